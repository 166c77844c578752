#pragma once

#include "fsi2d/geometry.hpp"
#include "fsi2d/solid_mesh.hpp"
#include "fsi2d/sparse.hpp"

#include <functional>
#include <stdexcept>

namespace fsi2d {

class ElementInversion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Compressible Neo-Hookean material in plane strain.
struct NeoHookean {
  double E = 1.0;
  double nu = 0.3;
  double rho = 1.0;

  double lambda() const { return E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)); }
  double mu() const { return E / (2.0 * (1.0 + nu)); }
  void validate() const;
};

double strain_energy(const Mat2& F, const NeoHookean& m);
/// Second Piola-Kirchhoff stress; throws ElementInversion for det F <= 0.
Mat2 pk2_stress(const Mat2& F, const NeoHookean& m);
/// dS/dE as a 4x4 matrix indexed [2I+J][2K+L].
Eigen::Matrix4d material_tangent(const Mat2& F, const NeoHookean& m);

/// Deformation gradient of element e at reference coordinates xi in [-1,1]^2.
Mat2 deformation_gradient(const SolidMesh& mesh, int e, const Eigen::VectorXd& D, const Vec2& xi);

/// Quasi-static pieces of the solid problem on a fixed mesh.
class SolidOperator {
 public:
  SolidOperator(const SolidMesh& mesh, const NeoHookean& mat);

  const SolidMesh& mesh() const { return *mesh_; }
  const NeoHookean& material() const { return mat_; }
  int num_dofs() const { return mesh_->num_dofs(); }

  /// Consistent mass matrix.
  const SparseMatrix& mass() const { return mass_; }

  /// Internal force and (optionally) its tangent at displacement D.
  Eigen::VectorXd internal_force(const Eigen::VectorXd& D, SparseMatrix* tangent = nullptr) const;
  double stored_energy(const Eigen::VectorXd& D) const;
  /// Load vector of a constant body force per unit mass.
  Eigen::VectorXd body_force(const Vec2& b) const;
  /// Smallest det F over all quadrature points.
  double min_jacobian(const Eigen::VectorXd& D) const;

 private:
  const SolidMesh* mesh_;
  NeoHookean mat_;
  SparseMatrix mass_;
};

/// Generalized-alpha parameters from the spectral radius at infinity.
struct GenAlphaParams {
  double rho_inf = 1.0;
  double alpha_f = 0.5;
  double alpha_m = 0.5;
  double gamma = 0.5;
  double beta = 0.25;

  static GenAlphaParams from_rho_inf(double rho_inf);
};

struct SolidState {
  Eigen::VectorXd D, U, A;
};

/// Dynamic residual R^s(D^n) of the generalized-alpha scheme.
Eigen::VectorXd genalpha_residual(const SparseMatrix& M, const Eigen::VectorXd& Dn, const Eigen::VectorXd& fint_n,
                                  const Eigen::VectorXd& fext_n, const SolidState& prev,
                                  const Eigen::VectorXd& fint_prev, const Eigen::VectorXd& fext_prev, double dt,
                                  const GenAlphaParams& p);

/// Coefficient multiplying M in dR^s/dD (the tangent is this * M + (1-alpha_f) K).
double genalpha_mass_coefficient(double dt, const GenAlphaParams& p);

/// Velocity and acceleration at t^n from the converged displacement.
SolidState genalpha_update(const Eigen::VectorXd& Dn, const SolidState& prev, double dt, const GenAlphaParams& p);

}  // namespace fsi2d
