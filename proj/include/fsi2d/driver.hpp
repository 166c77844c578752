#pragma once

#include "fsi2d/cut.hpp"
#include "fsi2d/fluid.hpp"
#include "fsi2d/nitsche.hpp"
#include "fsi2d/projection.hpp"
#include "fsi2d/solid.hpp"
#include "fsi2d/sparse.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fsi2d {

enum class BcKind { Wall, Velocity, Traction, Coupled };

struct SideCondition {
  BcKind kind = BcKind::Wall;
  VectorField velocity;  ///< prescribed u(x, t) for BcKind::Velocity
};

/// One structured fluid mesh. Field 0 is the background; further fields are
/// embedded patches whose Coupled sides carry fluid-fluid coupling.
struct FluidField {
  StructuredBackgroundMesh mesh;
  std::array<SideCondition, 4> sides;  ///< indexed by Side
};

struct SolidSpec {
  SolidMesh mesh;
  NeoHookean material;
  Vec2 body_force = Vec2::Zero();  ///< per unit mass
  bool rigid = false;              ///< every node held at zero displacement
};

enum class Predictor { Constant, Velocity };

struct DriverConfig {
  double dt = 0.01;
  int steps = 1;
  double theta = 1.0;
  double theta_gamma = 1.0;
  double rho_inf = 1.0;
  double tol = 1e-8;
  int max_newton = 25;
  int max_cycles = 5;
  bool freeze = false;     ///< freeze the fluid function space from the first iteration
  int freeze_after = 2;    ///< change signals at one step before freezing
  Predictor predictor = Predictor::Constant;
  bool steady = false;     ///< drop all time terms (each step is a steady solve)
  int max_halvings = 8;
  std::string matrix_market_dir;  ///< when set, every Newton matrix is exported there

  void validate() const;
};

struct Problem {
  std::vector<FluidField> fields;
  std::optional<SolidSpec> solid;
  FluidParams fluid;
  StabParams stab;
  NitscheParams nitsche;
  DriverConfig driver;
  double t0 = 0.0;
  VectorField initial_velocity;        ///< empty means rest
  std::optional<Vec2> pressure_pin;    ///< pins p = 0 at the nearest standard node of field 0
  std::vector<Vec2> probes;            ///< solid reference points

  void validate() const;
};

/// Cut state of all fluid fields for one solid displacement.
struct Geometry {
  std::vector<InterfaceSegment> iface;
  int solid_owner = -1;  ///< field cut by the solid, -1 without solid
  std::vector<ExcludedRegion> regions;
  std::vector<CutConfiguration> cfgs;
  std::vector<std::vector<char>> force_active;
  int ghost_layers = 0;

  bool same_spaces(const Geometry& other) const;
};

Geometry build_geometry(const Problem& pb, const Eigen::VectorXd& D,
                        const std::vector<std::vector<char>>& force_active, int ghost_layers);

/// Offsets of the global unknown vector: per field [U_f, P_f], then D.
struct Layout {
  std::vector<FieldIndexing> fields;
  std::vector<int> nodes;
  int solid_offset = 0;
  int solid_dofs = 0;
  int size = 0;

  static Layout from(const Geometry& g, int solid_dofs);
  std::vector<int> block_sizes() const;
};

/// Time-level data the coupled residual depends on besides the iterate.
struct StepContext {
  double time = 0.0;
  OstScheme ost;
  std::vector<FluidVectors> history;  ///< projected onto the current spaces
  SolidState solid_prev;
  Eigen::VectorXd fint_prev, fext_prev, fext;
  Eigen::VectorXd coupling_prev;  ///< C^{sf} of the previous converged step
  GenAlphaParams ga;
  double theta_gamma = 1.0;
};

struct CoupledSystem {
  SystemBuilder builder;
  CouplingForces fs;
  CouplingForces ff;
};

/// Assembles residual and Jacobian of the monolithic system at the global
/// iterate x with frozen geometry and scaling fields (no Dirichlet rows).
class CoupledAssembler {
 public:
  CoupledAssembler(const Problem& pb, const SolidOperator* op);

  CoupledSystem assemble(const Geometry& g, const Layout& L, const Eigen::VectorXd& x,
                         const std::vector<Eigen::VectorXd>& scaling, const StepContext& ctx) const;

  /// Constrained rows and their prescribed values at time t.
  void dirichlet(const Geometry& g, const Layout& L, double t, std::vector<int>& dofs, std::vector<double>& values) const;

 private:
  const Problem* pb_;
  const SolidOperator* op_;
};

struct StepReport {
  int step = 0;
  double time = 0.0;
  int newton_iterations = 0;
  int cycles = 0;
  bool frozen = false;
  std::vector<double> residual_history;  ///< combined l2 norm per assembly
  double final_residual = 0.0;
  double jump_l2 = 0.0;
  Vec2 fluid_force = Vec2::Zero();
  Vec2 solid_force = Vec2::Zero();
  double ff_mass_defect = 0.0;
  std::vector<Vec2> probe_displacement;
};

class NewtonFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Simulation {
 public:
  explicit Simulation(Problem pb);
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  const Problem& problem() const { return pb_; }
  int step_index() const { return step_; }
  double time() const { return time_; }
  const Geometry& geometry() const { return geom_; }
  const Layout& layout() const { return layout_; }
  const std::vector<FluidVectors>& fluid() const { return fluid_; }
  const SolidState& solid() const { return solid_; }
  const Eigen::VectorXd& stored_coupling() const { return coupling_; }
  /// Context of the last converged step.
  const StepContext& last_context() const { return last_ctx_; }
  const SolidOperator* solid_operator() const { return op_.get(); }

  StepReport step();
  std::vector<StepReport> run(int steps, const std::function<void(const StepReport&)>& on_step = {});

  /// Global vector [U_0, P_0, ..., D] of the current converged state.
  Eigen::VectorXd pack() const;

  /// Re-assembles the coupled system at the converged state of the last step.
  CoupledSystem reassemble() const;

  void save_checkpoint(std::ostream& out) const;
  void load_checkpoint(std::istream& in);
  void save_checkpoint(const std::string& path) const;
  void load_checkpoint(const std::string& path);

  std::vector<Vec2> probe_displacements() const;

 private:
  StepContext make_context(double t, double theta) const;
  Eigen::VectorXd predictor() const;
  void set_initial_state();

  Problem pb_;
  std::unique_ptr<SolidOperator> op_;
  GenAlphaParams ga_;
  int step_ = 0;
  double time_ = 0.0;
  Geometry geom_;
  Layout layout_;
  std::vector<FluidVectors> fluid_;
  SolidState solid_;
  Eigen::VectorXd coupling_;
  StepContext last_ctx_;
};

/// Displacement at a reference point of the solid by element-local interpolation.
Vec2 interpolate_solid(const SolidMesh& mesh, const Eigen::VectorXd& D, const Vec2& X);

/// Error integrals of a fluid field against an exact solution; fields add up.
struct FluidError {
  double u_sq = 0.0;    ///< integral of |u_h - u|^2
  double p_int = 0.0;   ///< integral of p_h - p
  double p_sq = 0.0;    ///< integral of (p_h - p)^2
  double area = 0.0;

  double velocity_l2() const;
  /// L2 norm of the pressure error with its mean removed.
  double pressure_l2() const;
  FluidError& operator+=(const FluidError& o);
};
using ScalarField = std::function<double(const Vec2& x, double t)>;
FluidError fluid_error(const CutConfiguration& cfg, const FluidVectors& v, const VectorField& u, const ScalarField& p,
                       double t);

}  // namespace fsi2d
