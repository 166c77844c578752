#pragma once

#include "fsi2d/cut.hpp"
#include "fsi2d/fluid.hpp"
#include "fsi2d/solid_mesh.hpp"
#include "fsi2d/sparse.hpp"

namespace fsi2d {

struct NitscheParams {
  double gamma = 35.0;
  int adjoint_sign = +1;          ///< +1 adjoint-inconsistent, -1 adjoint-consistent
  double trace_constant = 12.0;   ///< (f^k)^2 = trace_constant / h

  void validate() const;
};

/// U^s = (D - D_prev)/(theta dt) - (1-theta)/theta U_prev.
Eigen::VectorXd interface_velocity(const Eigen::VectorXd& D, const Eigen::VectorXd& D_prev,
                                   const Eigen::VectorXd& U_prev, double theta_gamma, double dt);

/// Solid velocity on the interface as a function of the displacement iterate.
struct InterfaceKinematics {
  const Eigen::VectorXd* D = nullptr;
  const Eigen::VectorXd* D_prev = nullptr;
  const Eigen::VectorXd* U_prev = nullptr;
  double theta_gamma = 1.0;
  double dt = 1.0;
  bool steady = false;  ///< interface held at rest

  double dvel_dD() const { return steady ? 0.0 : 1.0 / (theta_gamma * dt); }
  Vec2 velocity(int node) const;
};

/// Excluded region of a deformed solid: its outline plus the wet segments as couplings.
ExcludedRegion fluid_solid_region(const Polygon& outline, const std::vector<InterfaceSegment>& iface);

struct FsCouplingInput {
  const CutConfiguration* cfg = nullptr;
  const ExcludedRegion* region = nullptr;
  const std::vector<InterfaceSegment>* iface = nullptr;
  const FluidVectors* state = nullptr;
  const Eigen::VectorXd* scaling = nullptr;  ///< frozen fluid velocity for |u^f|
  InterfaceKinematics kin;
};

/// Coupling diagnostics; force sums run over all velocity (resp. displacement) rows.
struct CouplingForces {
  Vec2 fluid_sum = Vec2::Zero();
  Vec2 solid_sum = Vec2::Zero();
  Eigen::VectorXd solid_rows;  ///< C^{sf} per solid DOF
  double jump_l2_sq = 0.0;     ///< integral of |u^f - u^s|^2 over the interface
  double normal_flux_abs = 0.0;  ///< integral of |(u^i - u^j).n| (fluid-fluid only)
};

/// Fluid-sided Nitsche coupling: C^{fs} into fluid rows and C^{sf} into solid
/// rows (at solid_offset). `out` may be null when only forces are wanted.
void assemble_fs_coupling(const FsCouplingInput& in, const FluidParams& fp, const NitscheParams& np,
                          const OstScheme& ost, const FieldIndexing& fidx, int solid_offset, int num_solid_dofs,
                          SystemBuilder* out, CouplingForces* forces);

struct FfCouplingInput {
  const CutConfiguration* cfg_i = nullptr;  ///< field cut by the patch
  const CutConfiguration* cfg_j = nullptr;  ///< embedded patch
  const ExcludedRegion* region_i = nullptr;
  int partner = -1;  ///< field id of j, matched against CutterSegment::source
  const FluidVectors* state_i = nullptr;
  const FluidVectors* state_j = nullptr;
  const Eigen::VectorXd* scaling_i = nullptr;
  const Eigen::VectorXd* scaling_j = nullptr;
};

/// Fluid-fluid Nitsche coupling with flux weights on the embedded side.
void assemble_ff_coupling(const FfCouplingInput& in, const FluidParams& fp, const StabParams& sp,
                          const NitscheParams& np, const OstScheme& ost, const FieldIndexing& idx_i,
                          const FieldIndexing& idx_j, SystemBuilder* out, CouplingForces* diag);

}  // namespace fsi2d
