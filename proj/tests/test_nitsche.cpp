#include "fsi2d/nitsche.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace fsi2d;

namespace {

struct FsFixture {
  StructuredBackgroundMesh mesh = StructuredBackgroundMesh::from_box(Vec2(0, 0), Vec2(1, 1), 6, 6);
  SolidMesh solid;
  std::vector<InterfaceSegment> iface;
  ExcludedRegion region;
  CutConfiguration cfg;
  FluidVectors state;
  Eigen::VectorXd scaling, D, D_prev, U_prev;
  FluidParams fp;
  NitscheParams np;
  OstScheme ost;
  double theta_gamma = 0.7;

  FsFixture() {
    solid = make_rectangle_solid(Vec2(0.37, 0.29), Vec2(0.61, 0.73), 2, 3,
                                 {BoundaryTag::Wet, BoundaryTag::Wet, BoundaryTag::Clamped, BoundaryTag::Wet});
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(solid.num_dofs());
    iface = extract_interface(solid, {zero.data(), static_cast<std::size_t>(zero.size())});
    region = fluid_solid_region(solid_outline(solid, {zero.data(), static_cast<std::size_t>(zero.size())}), iface);
    cfg = classify_and_cut(mesh, region);
    const int n = cfg.dofs.size();
    state = FluidVectors::zeros(n);
    scaling = Eigen::VectorXd::Zero(2 * n);
    D = D_prev = U_prev = zero;
    fp.rho = 1.1;
    fp.mu = 0.03;
    ost.dt = 0.05;
    ost.theta = 0.6;
  }

  int nf() const { return 3 * cfg.dofs.size(); }
  int size() const { return nf() + solid.num_dofs(); }

  void randomize(unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < state.U.size(); ++i) state.U[i] = u(rng), scaling[i] = u(rng);
    for (int i = 0; i < state.P.size(); ++i) state.P[i] = u(rng);
    for (int i = 0; i < D.size(); ++i) D[i] = 0.01 * u(rng), D_prev[i] = 0.01 * u(rng), U_prev[i] = u(rng);
  }

  Eigen::VectorXd pack() const {
    Eigen::VectorXd x(size());
    x << state.U, state.P, D;
    return x;
  }
  void unpack(const Eigen::VectorXd& x) {
    const int n = cfg.dofs.size();
    state.U = x.head(2 * n);
    state.P = x.segment(2 * n, n);
    D = x.tail(solid.num_dofs());
  }

  SystemBuilder assemble(CouplingForces* forces = nullptr) const {
    FsCouplingInput in;
    in.cfg = &cfg;
    in.region = &region;
    in.iface = &iface;
    in.state = &state;
    in.scaling = &scaling;
    in.kin = {&D, &D_prev, &U_prev, theta_gamma, ost.dt, ost.steady};
    SystemBuilder b(size());
    assemble_fs_coupling(in, fp, np, ost, {0, 2 * cfg.dofs.size()}, nf(), solid.num_dofs(), &b, forces);
    return b;
  }
};

template <class F>
Eigen::MatrixXd fd_jacobian(F&& residual_at, const Eigen::VectorXd& x, double eps = 1e-6) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd J(residual_at(x).size(), n);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd xp = x, xm = x;
    xp[j] += eps;
    xm[j] -= eps;
    J.col(j) = (residual_at(xp) - residual_at(xm)) / (2 * eps);
  }
  return J;
}

}  // namespace

TEST(FluidSolidCoupling, InterfaceVelocityFormula) {
  Eigen::VectorXd D(2), Dp(2), Up(2);
  D << 0.3, 0.0;
  Dp << 0.1, 0.0;
  Up << 1.0, 2.0;
  const Eigen::VectorXd v = interface_velocity(D, Dp, Up, 0.5, 0.1);
  EXPECT_NEAR(v[0], 0.2 / 0.05 - 1.0, 1e-14);
  EXPECT_NEAR(v[1], -2.0, 1e-14);
}

TEST(FluidSolidCoupling, JacobianMatchesFiniteDifferences) {
  FsFixture f;
  f.randomize(3);
  ASSERT_GT(f.cfg.surface.size(), 0u);
  const Eigen::VectorXd x = f.pack();
  const Eigen::MatrixXd J = Eigen::MatrixXd(f.assemble().matrix());
  const Eigen::MatrixXd Jfd = fd_jacobian(
      [&](const Eigen::VectorXd& y) {
        f.unpack(y);
        return Eigen::VectorXd(f.assemble().residual());
      },
      x);
  EXPECT_LT((J - Jfd).norm() / J.norm(), 1e-7);
}

TEST(FluidSolidCoupling, InterfaceForcesBalance) {
  FsFixture f;
  f.randomize(5);
  CouplingForces forces;
  f.assemble(&forces);
  EXPECT_GT(forces.fluid_sum.norm(), 1e-3);
  EXPECT_LT((forces.fluid_sum + forces.solid_sum).norm(), 1e-12 * forces.fluid_sum.norm());
  EXPECT_NEAR(forces.solid_rows.sum(), forces.solid_sum.sum(), 1e-12);
}

TEST(FluidSolidCoupling, MatchingVelocitiesLeaveOnlyTraction) {
  FsFixture f;
  const Vec2 V(0.4, -0.3);
  for (int k = 0; k < f.cfg.dofs.size(); ++k) {
    f.state.U.segment<2>(2 * k) = V;
    f.state.P[k] = 2.0;
    f.scaling.segment<2>(2 * k) = V;
  }
  for (int a = 0; a < f.solid.num_nodes(); ++a) f.D.segment<2>(2 * a) = f.theta_gamma * f.ost.dt * V;
  CouplingForces forces;
  const Eigen::VectorXd r1 = f.assemble(&forces).residual();
  EXPECT_LT(forces.jump_l2_sq, 1e-24);
  f.np.adjoint_sign = -1;
  f.np.gamma = 1000.0;
  const Eigen::VectorXd r2 = f.assemble().residual();
  EXPECT_LT((r1 - r2).norm(), 1e-12);
  // Wet sides close with the clamped bottom edge, so p n integrates to -p |bottom| e_y.
  EXPECT_NEAR(forces.fluid_sum.x(), 0.0, 1e-12);
  EXPECT_NEAR(forces.fluid_sum.y(), -2.0 * 0.24, 1e-12);
}

TEST(FluidSolidCoupling, AdjointConsistentSignSymmetrizesVelocityBlock) {
  FsFixture f;
  f.fp.convection = false;
  f.ost.steady = true;
  const int nu = 2 * f.cfg.dofs.size();
  auto velocity_block = [&](int sign) {
    f.np.adjoint_sign = sign;
    return Eigen::MatrixXd(Eigen::MatrixXd(f.assemble().matrix()).topLeftCorner(nu, nu));
  };
  const Eigen::MatrixXd Ac = velocity_block(-1);
  const Eigen::MatrixXd Ai = velocity_block(+1);
  EXPECT_LT((Ac - Ac.transpose()).norm(), 1e-12 * Ac.norm());
  EXPECT_GT((Ai - Ai.transpose()).norm(), 1e-3 * Ai.norm());
  const Eigen::MatrixXd K = Eigen::MatrixXd(f.assemble().matrix());
  const int np = f.cfg.dofs.size();
  EXPECT_LT((K.block(0, nu, nu, np) + K.block(nu, 0, np, nu).transpose()).norm(), 1e-12 * K.norm());
}

namespace {

struct FfFixture {
  StructuredBackgroundMesh mi = StructuredBackgroundMesh::from_box(Vec2(0, 0), Vec2(1, 1), 8, 8);
  StructuredBackgroundMesh mj = StructuredBackgroundMesh::from_box(Vec2(0.3, 0.28), Vec2(0.7, 0.66), 7, 7);
  ExcludedRegion region;
  CutConfiguration ci, cj;
  FluidVectors si, sj;
  Eigen::VectorXd ci_scaling, cj_scaling;
  FluidParams fp;
  StabParams sp;
  NitscheParams np;
  OstScheme ost;

  FfFixture() {
    const Vec2 lo = mj.bounds().lo, hi = mj.bounds().hi;
    const Polygon rect = {lo, Vec2(hi.x(), lo.y()), hi, Vec2(lo.x(), hi.y())};
    region.polygons.push_back(rect);
    for (int k = 0; k < 4; ++k) {
      const Vec2 a = rect[k], b = rect[(k + 1) % 4];
      const Vec2 t = (b - a).normalized();
      region.segments.push_back({a, b, Vec2(-t.y(), t.x()), CouplingKind::FluidFluid, 1});
    }
    ci = classify_and_cut(mi, region);
    cj = classify_and_cut(mj, ExcludedRegion{});
    si = FluidVectors::zeros(ci.dofs.size());
    sj = FluidVectors::zeros(cj.dofs.size());
    ci_scaling = Eigen::VectorXd::Zero(si.U.size());
    cj_scaling = Eigen::VectorXd::Zero(sj.U.size());
    fp.rho = 0.9;
    fp.mu = 0.02;
    ost.dt = 0.1;
  }

  int ni() const { return 3 * ci.dofs.size(); }
  int size() const { return ni() + 3 * cj.dofs.size(); }

  Eigen::VectorXd pack() const {
    Eigen::VectorXd x(size());
    x << si.U, si.P, sj.U, sj.P;
    return x;
  }
  void unpack(const Eigen::VectorXd& x) {
    const int a = ci.dofs.size(), b = cj.dofs.size();
    si.U = x.head(2 * a);
    si.P = x.segment(2 * a, a);
    sj.U = x.segment(3 * a, 2 * b);
    sj.P = x.tail(b);
  }

  SystemBuilder assemble(CouplingForces* diag = nullptr) const {
    FfCouplingInput in{&ci, &cj, &region, 1, &si, &sj, &ci_scaling, &cj_scaling};
    SystemBuilder b(size());
    const int a = ci.dofs.size();
    assemble_ff_coupling(in, fp, sp, np, ost, {0, 2 * a}, {3 * a, 3 * a + 2 * cj.dofs.size()}, &b, diag);
    return b;
  }
};

}  // namespace

TEST(FluidFluidCoupling, JacobianMatchesFiniteDifferences) {
  FfFixture f;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::VectorXd x(f.size());
  for (int i = 0; i < x.size(); ++i) x[i] = u(rng);
  f.unpack(x);
  f.ci_scaling = f.si.U;
  f.cj_scaling = f.sj.U;
  const Eigen::MatrixXd J = Eigen::MatrixXd(f.assemble().matrix());
  const Eigen::MatrixXd Jfd = fd_jacobian(
      [&](const Eigen::VectorXd& y) {
        f.unpack(y);
        return Eigen::VectorXd(f.assemble().residual());
      },
      x);
  EXPECT_LT((J - Jfd).norm() / J.norm(), 1e-7);
}

TEST(FluidFluidCoupling, ContinuousLinearFieldsHaveNoJumpAndBalance) {
  FfFixture f;
  auto fill = [](const CutConfiguration& c, FluidVectors& s) {
    for (int k = 0; k < c.dofs.size(); ++k) {
      const Vec2 x = c.mesh.node(c.dofs.nodes[k]);
      s.U.segment<2>(2 * k) = Vec2(1 + x.y(), 0.5 - x.x());
      s.P[k] = 3.0;
    }
  };
  fill(f.ci, f.si);
  fill(f.cj, f.sj);
  f.ci_scaling = f.si.U;
  f.cj_scaling = f.sj.U;
  CouplingForces diag;
  const Eigen::VectorXd r = f.assemble(&diag).residual();
  EXPECT_LT(diag.jump_l2_sq, 1e-26);
  EXPECT_LT(diag.normal_flux_abs, 1e-12);
  // Momentum leaving field i through the interface enters field j.
  Vec2 sum = Vec2::Zero();
  const int a = f.ci.dofs.size(), b = f.cj.dofs.size();
  for (int k = 0; k < a; ++k) sum += r.segment<2>(2 * k);
  for (int k = 0; k < b; ++k) sum += r.segment<2>(3 * a + 2 * k);
  EXPECT_LT(sum.norm(), 1e-12);
  EXPECT_GT(r.head(2 * a).norm(), 1e-6);
}
