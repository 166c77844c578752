#pragma once

#include "fsi2d/cut.hpp"
#include "fsi2d/sparse.hpp"

#include <functional>

namespace fsi2d {

using VectorField = std::function<Vec2(const Vec2& x, double t)>;

struct FluidParams {
  double rho = 1.0;
  double mu = 0.01;
  bool convection = true;  ///< false gives the (transient) Stokes equations
  VectorField body_force;  ///< per unit mass; empty means zero

  double nu() const { return mu / rho; }
  void validate() const;
};

struct StabParams {
  double C_I = 36.0;
  double gamma_c = 0.05;
  double gamma_u = 0.05;
  double gamma_p = 0.05;
  double c_u = 1.0;
  double c_sigma = 1.0;
  bool rbvm = true;
  bool ghost_penalty = true;

  void validate() const;
};

/// One-step-theta time discretization; steady drops all time terms.
struct OstScheme {
  double theta = 1.0;
  double dt = 1.0;
  bool steady = false;

  double sigma() const { return steady ? 0.0 : 1.0 / (theta * dt); }
  void validate() const;
};

/// Nodal fields on the active DOFs of one cut configuration. U and A are
/// node-interleaved (2 entries per active node), P has one entry per active node.
struct FluidVectors {
  Eigen::VectorXd U, P, A;

  static FluidVectors zeros(int n_active);
  int num_nodes() const { return static_cast<int>(P.size()); }
};

/// Global offsets of a fluid field's velocity and pressure blocks.
struct FieldIndexing {
  int u_offset = 0;
  int p_offset = 0;

  int u(int compact, int comp) const { return u_offset + 2 * compact + comp; }
  int p(int compact) const { return p_offset + compact; }
};

struct Tau {
  double m = 0.0;
  double c = 0.0;
};

/// Element stabilization parameters for an h1 x h2 rectangle and velocity c.
Tau tau_mc(double h1, double h2, const Vec2& c, const FluidParams& fp, const StabParams& sp, const OstScheme& ost);

/// Fields needed to assemble one fluid field at one Newton iterate.
struct FluidAssemblyInput {
  const CutConfiguration* cfg = nullptr;
  const FluidVectors* state = nullptr;    ///< current iterate
  const FluidVectors* history = nullptr;  ///< U and A of t^{n-1}, projected onto cfg
  const Eigen::VectorXd* scaling = nullptr;  ///< frozen velocity for tau and scalings
  double time = 0.0;                      ///< t^n, for the body force
};

/// Galerkin, RBVM and time terms on the physical part of all active elements.
void assemble_fluid(const FluidAssemblyInput& in, const FluidParams& fp, const StabParams& sp, const OstScheme& ost,
                    const FieldIndexing& idx, SystemBuilder& out);

/// Face-jump ghost penalties on the ghost facet set.
void assemble_ghost_penalty(const FluidAssemblyInput& in, const FluidParams& fp, const StabParams& sp,
                            const OstScheme& ost, const FieldIndexing& idx, SystemBuilder& out);

/// Elementwise |c| max, per-element scaling phi_T = nu + c_u |c| h + c_sigma sigma h^2.
double element_phi(const CutConfiguration& cfg, int e, const Eigen::VectorXd& scaling, const FluidParams& fp,
                   const StabParams& sp, double sigma);

/// a^n = (u^n - u^{n-1})/(theta dt) - (1-theta)/theta a^{n-1}.
Eigen::VectorXd fluid_acceleration_update(const Eigen::VectorXd& U, const Eigen::VectorXd& U_prev,
                                          const Eigen::VectorXd& A_prev, double theta, double dt);

/// Point evaluation of a fluid field inside an active element.
struct FluidPointValue {
  Vec2 u = Vec2::Zero();
  Mat2 grad_u = Mat2::Zero();  ///< grad_u(i, j) = du_i/dx_j
  double p = 0.0;
  Vec2 grad_p = Vec2::Zero();
};

FluidPointValue evaluate_fluid(const CutConfiguration& cfg, const FluidVectors& v, int e, const Vec2& x);

}  // namespace fsi2d
