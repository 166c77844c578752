#include "fsi2d/cases.hpp"
#include "fsi2d/driver.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <random>
#include <sstream>

using namespace fsi2d;

namespace {

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

std::vector<Eigen::VectorXd> scaling_of(const Simulation& sim) {
  std::vector<Eigen::VectorXd> s;
  for (const auto& f : sim.fluid()) s.push_back(f.U);
  return s;
}

}  // namespace

TEST(Driver, ZeroLoadsStayZero) {
  Problem pb = cases::micro_flap();
  pb.fields[0].sides[static_cast<int>(Side::Left)].kind = BcKind::Wall;
  Simulation sim(std::move(pb));
  for (const auto& r : sim.run(3)) {
    EXPECT_LE(r.newton_iterations, 1);
    EXPECT_EQ(r.cycles, 0);
  }
  EXPECT_EQ(max_abs(sim.fluid()[0].U), 0.0);
  EXPECT_EQ(max_abs(sim.fluid()[0].P), 0.0);
  EXPECT_EQ(max_abs(sim.solid().D), 0.0);
}

TEST(Driver, CoupledJacobianMatchesFiniteDifferences) {
  Simulation sim(cases::micro_flap());
  sim.run(4);
  const CoupledAssembler assembler(sim.problem(), sim.solid_operator());
  const auto scaling = scaling_of(sim);
  const Eigen::VectorXd x = sim.pack();
  const CoupledSystem base = assembler.assemble(sim.geometry(), sim.layout(), x, scaling, sim.last_context());
  const SparseMatrix J = base.builder.matrix();

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd dir(x.size());
  for (Eigen::Index i = 0; i < dir.size(); ++i) dir[i] = dist(rng);
  // Keep the solid perturbation small so the elements stay valid.
  dir.tail(sim.layout().solid_dofs) *= 1e-3;

  const double eps = 1e-6;
  const auto rp = assembler.assemble(sim.geometry(), sim.layout(), x + eps * dir, scaling, sim.last_context());
  const auto rm = assembler.assemble(sim.geometry(), sim.layout(), x - eps * dir, scaling, sim.last_context());
  const Eigen::VectorXd fd = (rp.builder.residual() - rm.builder.residual()) / (2 * eps);
  const Eigen::VectorXd an = J * dir;
  EXPECT_LT((fd - an).norm(), 1e-7 * std::max(1.0, an.norm()));
}

TEST(Driver, RestartIsBitwiseDeterministic) {
  Simulation full(cases::micro_flap());
  full.run(10);

  Simulation first(cases::micro_flap());
  first.run(5);
  std::stringstream buf;
  first.save_checkpoint(buf);
  Simulation second(cases::micro_flap());
  second.load_checkpoint(buf);
  EXPECT_EQ(second.step_index(), 5);
  second.run(5);

  EXPECT_EQ(full.time(), second.time());
  EXPECT_TRUE(full.solid().D == second.solid().D);
  EXPECT_TRUE(full.solid().U == second.solid().U);
  EXPECT_TRUE(full.solid().A == second.solid().A);
  ASSERT_EQ(full.fluid()[0].U.size(), second.fluid()[0].U.size());
  EXPECT_TRUE(full.fluid()[0].U == second.fluid()[0].U);
  EXPECT_TRUE(full.fluid()[0].P == second.fluid()[0].P);
  EXPECT_TRUE(full.stored_coupling() == second.stored_coupling());
}

TEST(Driver, CorruptCheckpointIsRejected) {
  Simulation sim(cases::micro_flap());
  std::stringstream bad("not a checkpoint at all");
  EXPECT_THROW(sim.load_checkpoint(bad), std::runtime_error);

  sim.run(1);
  std::stringstream buf;
  sim.save_checkpoint(buf);
  std::string s = buf.str();
  s.resize(s.size() / 2);
  std::stringstream cut(s);
  Simulation other(cases::micro_flap());
  EXPECT_THROW(other.load_checkpoint(cut), std::runtime_error);
}

TEST(Driver, StoredCouplingMatchesReassembly) {
  Simulation sim(cases::micro_flap());
  sim.run(6);
  const CoupledSystem sys = sim.reassemble();
  EXPECT_TRUE(sys.fs.solid_rows == sim.stored_coupling());
  EXPECT_NEAR((sys.fs.fluid_sum + sys.fs.solid_sum).norm(), 0.0, 1e-12);
}

TEST(Driver, HydrostaticColumnIsExact) {
  const double g = 2.0;
  Simulation sim(cases::hydrostatic_column(10, g));
  const auto rep = sim.step();
  EXPECT_LT(rep.final_residual, 1e-10);
  EXPECT_LT(max_abs(sim.fluid()[0].U), 1e-10);
  const auto& cfg = sim.geometry().cfgs[0];
  for (int k = 0; k < cfg.dofs.size(); ++k) {
    const Vec2 x = cfg.mesh.node(cfg.dofs.nodes[k]);
    EXPECT_NEAR(sim.fluid()[0].P[k], -g * x.y(), 1e-9);
  }
}

TEST(Driver, LinearSteadyProblemConvergesInOneCorrection) {
  Problem pb = cases::poiseuille_channel(8, {});
  pb.fluid.convection = false;
  Simulation sim(std::move(pb));
  const auto rep = sim.step();
  ASSERT_GE(rep.residual_history.size(), 2u);
  EXPECT_LT(rep.residual_history[1], 1e-10);
  EXPECT_LE(rep.newton_iterations, 2);
  EXPECT_EQ(rep.cycles, 0);
}

TEST(Driver, SteadyStateResolvesCheaply) {
  Problem pb = cases::poiseuille_channel(8, {});
  pb.fluid.convection = false;
  Simulation sim(std::move(pb));
  const auto reps = sim.run(4);
  for (std::size_t i = 1; i < reps.size(); ++i) {
    EXPECT_LE(reps[i].newton_iterations, 2);
    EXPECT_EQ(reps[i].cycles, 0);
  }
}

TEST(Driver, InterfaceJumpShrinksWithPenalty) {
  double prev = std::numeric_limits<double>::infinity();
  for (double gamma : {10.0, 35.0, 100.0, 300.0}) {
    Problem pb = cases::poiseuille_channel(8, {});
    pb.nitsche.gamma = gamma;
    Simulation sim(std::move(pb));
    const double jump = sim.step().jump_l2;
    EXPECT_LT(jump, prev);
    prev = jump;
  }
}

TEST(Driver, FrozenSpacesOnlyGrow) {
  Problem pb = cases::micro_flap();
  pb.driver.freeze = true;
  Simulation sim(std::move(pb));
  std::vector<char> before = sim.geometry().cfgs[0].active;
  for (int s = 0; s < 6; ++s) {
    const auto r = sim.step();
    EXPECT_TRUE(r.frozen);
    EXPECT_LT(r.final_residual, 1e-8);
    const auto& now = sim.geometry().cfgs[0].active;
    for (std::size_t e = 0; e < now.size(); ++e)
      if (before[e]) EXPECT_TRUE(now[e]);
    before = now;
  }
  EXPECT_EQ(sim.geometry().ghost_layers, 1);
}

TEST(Driver, ConvergedStepsMeetTheTolerance) {
  Simulation sim(cases::micro_flap());
  for (const auto& r : sim.run(8)) {
    EXPECT_LE(r.newton_iterations, 10);
    EXPECT_LT(r.final_residual, 1e-8);
    EXPECT_LT((r.fluid_force + r.solid_force).norm(), 1e-12);
  }
  EXPECT_GT(sim.probe_displacements()[0].x(), 0.0);
}

TEST(Driver, NewtonLimitIsReported) {
  Problem pb = cases::micro_flap();
  pb.driver.max_newton = 1;
  Simulation sim(std::move(pb));
  try {
    sim.run(3);
    FAIL() << "expected a Newton failure";
  } catch (const NewtonFailure& e) {
    EXPECT_NE(std::string(e.what()).find("maximum number of Newton-Raphson iterations reached!"), std::string::npos);
  }
}

TEST(Driver, InvalidConfigurationIsRejected) {
  Problem pb = cases::micro_flap();
  pb.driver.dt = -1.0;
  EXPECT_THROW(Simulation{pb}, std::invalid_argument);
  pb = cases::micro_flap();
  pb.driver.theta = 0.0;
  EXPECT_THROW(Simulation{pb}, std::invalid_argument);
}
