#include "fsi2d/fluid.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace fsi2d;

namespace {

ExcludedRegion box_region(const Vec2& lo, const Vec2& hi) {
  ExcludedRegion r;
  r.polygons.push_back({lo, Vec2(hi.x(), lo.y()), hi, Vec2(lo.x(), hi.y())});
  return r;
}

struct Fixture {
  CutConfiguration cfg;
  FluidVectors state, history;
  Eigen::VectorXd scaling;
  FluidParams fp;
  StabParams sp;
  OstScheme ost;

  explicit Fixture(const CutConfiguration& c) : cfg(c) {
    const int n = cfg.dofs.size();
    state = FluidVectors::zeros(n);
    history = FluidVectors::zeros(n);
    scaling = Eigen::VectorXd::Zero(2 * n);
    fp.rho = 1.3;
    fp.mu = 0.07;
    ost.dt = 0.1;
    ost.theta = 0.6;
  }

  FluidAssemblyInput input() const { return {&cfg, &state, &history, &scaling, 0.3}; }
  FieldIndexing indexing() const { return {0, 2 * cfg.dofs.size()}; }
  int size() const { return 3 * cfg.dofs.size(); }

  Eigen::VectorXd pack() const {
    Eigen::VectorXd x(size());
    x << state.U, state.P;
    return x;
  }
  void unpack(const Eigen::VectorXd& x) {
    const int n = cfg.dofs.size();
    state.U = x.head(2 * n);
    state.P = x.tail(n);
  }
  SystemBuilder assemble(bool gp_only = false) const {
    SystemBuilder b(size());
    if (!gp_only) assemble_fluid(input(), fp, sp, ost, indexing(), b);
    assemble_ghost_penalty(input(), fp, sp, ost, indexing(), b);
    return b;
  }
};

}  // namespace

TEST(Tau, CartesianSteadyLimit) {
  FluidParams fp;
  fp.rho = 1.0;
  fp.mu = 0.5;
  StabParams sp;
  OstScheme ost;
  ost.steady = true;
  const double h = 0.2;
  const Tau t = tau_mc(h, h, Vec2::Zero(), fp, sp, ost);
  EXPECT_NEAR(t.m, h * h / (std::sqrt(16.0 * 72.0) * fp.mu), 1e-14);
  EXPECT_NEAR(tau_mc(2 * h, 2 * h, Vec2::Zero(), fp, sp, ost).m / t.m, 4.0, 1e-12);
  EXPECT_NEAR(t.c, 1.0 / (t.m * 8.0 / (h * h)), 1e-12);
  // Small time steps are dominated by the transient term.
  ost.steady = false;
  ost.dt = 1e-8;
  EXPECT_NEAR(tau_mc(h, h, Vec2(1, 1), fp, sp, ost).m, ost.dt / 2.0, 1e-14);
}

TEST(FluidAssembly, ZeroStateGivesZeroResidual) {
  const auto mesh = StructuredBackgroundMesh::from_box(Vec2(0, 0), Vec2(1, 1), 5, 5);
  Fixture f(classify_and_cut(mesh, box_region(Vec2(0.41, 0.43), Vec2(0.7, 0.66))));
  EXPECT_EQ(f.assemble().residual().norm(), 0.0);
}

TEST(FluidAssembly, ConstantFieldWithMatchingHistoryGivesZeroResidual) {
  const auto mesh = StructuredBackgroundMesh::from_box(Vec2(0, 0), Vec2(1, 1), 4, 4);
  Fixture f(classify_and_cut(mesh, ExcludedRegion{}));
  for (int k = 0; k < f.cfg.dofs.size(); ++k) {
    f.state.U.segment<2>(2 * k) = Vec2(0.7, -0.2);
    f.state.P[k] = 0.0;
  }
  f.history.U = f.state.U;
  f.scaling = f.state.U;
  f.ost.theta = 1.0;
  EXPECT_LT(f.assemble().residual().norm(), 1e-14);
}

TEST(FluidAssembly, LinearShearFlowBalancesInInterior) {
  // Steady Stokes u = (y, 0), p = 0: interior rows vanish.
  const auto mesh = StructuredBackgroundMesh::from_box(Vec2(0, 0), Vec2(1, 1), 4, 4);
  Fixture f(classify_and_cut(mesh, ExcludedRegion{}));
  f.fp.convection = false;
  f.ost.steady = true;
  for (int k = 0; k < f.cfg.dofs.size(); ++k) f.state.U.segment<2>(2 * k) = Vec2(mesh.node(f.cfg.dofs.nodes[k]).y(), 0.0);
  const auto b = f.assemble();
  const int n = f.cfg.dofs.size();
  for (int k = 0; k < n; ++k) {
    const auto [i, j] = mesh.node_ij(f.cfg.dofs.nodes[k]);
    if (i == 0 || j == 0 || i == mesh.n1() || j == mesh.n2()) continue;
    EXPECT_NEAR(b.residual()[2 * k], 0.0, 1e-12);
    EXPECT_NEAR(b.residual()[2 * k + 1], 0.0, 1e-12);
    EXPECT_NEAR(b.residual()[2 * n + k], 0.0, 1e-12);
  }
}

TEST(FluidAssembly, JacobianMatchesFiniteDifferencesOnCutMesh) {
  const auto mesh = StructuredBackgroundMesh::from_box(Vec2(0, 0), Vec2(1, 1), 4, 4);
  Fixture f(classify_and_cut(mesh, box_region(Vec2(0.37, 0.29), Vec2(0.66, 0.71))));
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::VectorXd x(f.size());
  for (int i = 0; i < x.size(); ++i) x[i] = u(rng);
  f.unpack(x);
  for (int i = 0; i < f.history.U.size(); ++i) {
    f.history.U[i] = u(rng);
    f.history.A[i] = u(rng);
  }
  f.scaling = f.state.U;
  f.fp.body_force = [](const Vec2& p, double t) { return Vec2(std::sin(p.x()) + t, p.y() * p.y()); };
  const auto b = f.assemble();
  const Eigen::MatrixXd J = Eigen::MatrixXd(b.matrix());
  Eigen::MatrixXd Jfd(f.size(), f.size());
  const double eps = 1e-6;
  for (int j = 0; j < f.size(); ++j) {
    Eigen::VectorXd xp = x, xm = x;
    xp[j] += eps;
    xm[j] -= eps;
    f.unpack(xp);
    const Eigen::VectorXd rp = f.assemble().residual();
    f.unpack(xm);
    const Eigen::VectorXd rm = f.assemble().residual();
    Jfd.col(j) = (rp - rm) / (2 * eps);
  }
  EXPECT_LT((J - Jfd).norm() / J.norm(), 1e-6);
}

TEST(GhostPenalty, VanishesOnGloballyLinearFields) {
  const auto mesh = StructuredBackgroundMesh::from_box(Vec2(0, 0), Vec2(1, 1), 6, 6);
  Fixture f(classify_and_cut(mesh, box_region(Vec2(0.3, 0.3), Vec2(0.71, 0.69))));
  ASSERT_FALSE(f.cfg.ghost_facets.empty());
  for (int k = 0; k < f.cfg.dofs.size(); ++k) {
    const Vec2 x = mesh.node(f.cfg.dofs.nodes[k]);
    f.state.U.segment<2>(2 * k) = Vec2(1 + 2 * x.x() - x.y(), 3 * x.y());
    f.state.P[k] = 0.5 - x.x() + 4 * x.y();
  }
  f.scaling = f.state.U;
  EXPECT_LT(f.assemble(true).residual().norm(), 1e-12);
}

TEST(GhostPenalty, HandIntegratedViscousJumpAndSymmetry) {
  // Two elements sharing one ghost facet; velocity x-component is the hat
  // function of the middle column so the normal-derivative jump is 2/h.
  const double h = 0.5;
  const auto mesh = StructuredBackgroundMesh::from_box(Vec2(0, 0), Vec2(1, 0.5), 2, 1);
  // Cut the right element slightly so the middle facet is a ghost facet.
  Fixture f(classify_and_cut(mesh, box_region(Vec2(0.9, -0.1), Vec2(1.2, 0.6))));
  ASSERT_EQ(f.cfg.ghost_facets.size(), 1u);
  f.sp.gamma_u = 1e-300;  // isolate g_c
  f.sp.gamma_p = 1e-300;
  f.ost.steady = true;
  for (int k = 0; k < f.cfg.dofs.size(); ++k) {
    const auto [i, j] = mesh.node_ij(f.cfg.dofs.nodes[k]);
    f.state.U[2 * k] = (i == 1) ? 1.0 : 0.0;
  }
  const auto b = f.assemble(true);
  const Eigen::VectorXd x = f.pack();
  const double energy = x.dot(b.residual());
  // gamma_c rho nu h_F * |jump|^2 * |F| with jump = 2/h.
  const double expected = f.sp.gamma_c * f.fp.rho * f.fp.nu() * h * (2.0 / h) * (2.0 / h) * h;
  EXPECT_NEAR(energy, expected, 1e-12 * expected);
  const Eigen::MatrixXd K = Eigen::MatrixXd(b.matrix());
  EXPECT_LT((K - K.transpose()).norm(), 1e-12 * K.norm());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (K + K.transpose()));
  EXPECT_GT(es.eigenvalues().minCoeff(), -1e-12 * K.norm());
}

TEST(FluidAcceleration, UpdateFormula) {
  Eigen::VectorXd u(1), up(1), ap(1);
  u << 0.1;
  up << 0.0;
  ap << 0.0;
  EXPECT_NEAR(fluid_acceleration_update(u, up, ap, 0.5, 0.1)[0], 2.0, 1e-14);
  EXPECT_NEAR(fluid_acceleration_update(up, up, ap, 1.0, 0.1)[0], 0.0, 0.0);
}
