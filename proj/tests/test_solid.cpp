#include "fsi2d/solid.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace fsi2d;

namespace {

NeoHookean unit_shear_material() {
  NeoHookean m;
  m.nu = 0.3;
  m.E = 2.0 * (1.0 + m.nu);  // mu = 1
  m.rho = 1.0;
  return m;
}

SparseMatrix scalar_matrix(double v) {
  SparseMatrix M(1, 1);
  M.insert(0, 0) = v;
  return M;
}

// Damped-free oscillator m u'' + k u = 0 advanced with the library's
// generalized-alpha residual; the residual is linear so one solve per step is exact.
double sdof_error(double dt, double T, double rho_inf) {
  const double m = 1.0, k = 4.0 * std::numbers::pi * std::numbers::pi;  // period 1
  const auto p = GenAlphaParams::from_rho_inf(rho_inf);
  const SparseMatrix M = scalar_matrix(m);
  SolidState s;
  s.D = Eigen::VectorXd::Constant(1, 1.0);
  s.U = Eigen::VectorXd::Zero(1);
  s.A = Eigen::VectorXd::Constant(1, -k / m);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  const int n = static_cast<int>(std::lround(T / dt));
  for (int step = 0; step < n; ++step) {
    const Eigen::VectorXd D0 = s.D;
    const Eigen::VectorXd r0 = genalpha_residual(M, D0, k * D0, zero, s, k * s.D, zero, dt, p);
    const double jac = genalpha_mass_coefficient(dt, p) * m + (1.0 - p.alpha_f) * k;
    const Eigen::VectorXd Dn = D0 - r0 / jac;
    s = genalpha_update(Dn, s, dt, p);
  }
  return std::abs(s.D[0] - std::cos(2.0 * std::numbers::pi * T));
}

}  // namespace

TEST(NeoHookean, LameParameters) {
  NeoHookean m;
  m.E = 500.0;
  m.nu = 0.4;
  EXPECT_NEAR(m.lambda(), 500.0 * 0.4 / (1.4 * 0.2), 1e-12);
  EXPECT_NEAR(m.mu(), 500.0 / 2.8, 1e-12);
  m.nu = 0.5;
  EXPECT_THROW(m.validate(), std::invalid_argument);
}

TEST(NeoHookean, SimpleShearStress) {
  Mat2 F;
  F << 1.0, 0.1, 0.0, 1.0;
  const Mat2 S = pk2_stress(F, unit_shear_material());
  Mat2 ref;
  ref << -0.01, 0.1, 0.1, 0.0;
  EXPECT_LT((S - ref).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(NeoHookean, StressIsEnergyDerivative) {
  const auto m = unit_shear_material();
  Mat2 F;
  F << 1.1, 0.2, -0.05, 0.93;
  const Mat2 P = F * pk2_stress(F, m);
  const double eps = 1e-6;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Mat2 Fp = F, Fm = F;
      Fp(i, j) += eps;
      Fm(i, j) -= eps;
      const double fd = (strain_energy(Fp, m) - strain_energy(Fm, m)) / (2 * eps);
      EXPECT_NEAR(fd, P(i, j), 1e-8);
    }
}

TEST(NeoHookean, TangentMatchesFiniteDifferences) {
  NeoHookean m;
  m.E = 500.0;
  m.nu = 0.4;
  Mat2 F;
  F << 1.2, 0.15, -0.1, 0.9;
  const Eigen::Matrix4d T = material_tangent(F, m);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  double max_rel = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    Mat2 dF;
    dF << u(rng), u(rng), u(rng), u(rng);
    const Mat2 dE = 0.5 * (F.transpose() * dF + dF.transpose() * F);
    const double eps = 1e-6;
    const Mat2 fd = (pk2_stress(F + eps * dF, m) - pk2_stress(F - eps * dF, m)) / (2 * eps);
    Mat2 lin = Mat2::Zero();
    for (int I = 0; I < 2; ++I)
      for (int J = 0; J < 2; ++J)
        for (int K = 0; K < 2; ++K)
          for (int L = 0; L < 2; ++L) lin(I, J) += T(2 * I + J, 2 * K + L) * dE(K, L);
    max_rel = std::max(max_rel, (fd - lin).norm() / lin.norm());
  }
  EXPECT_LT(max_rel, 1e-6);
}

TEST(NeoHookean, InversionThrows) {
  Mat2 F;
  F << -1.0, 0.0, 0.0, 1.0;
  EXPECT_THROW(pk2_stress(F, unit_shear_material()), ElementInversion);
}

TEST(SolidOperator, ForceIsEnergyGradientAndTangentIsForceJacobian) {
  const auto mesh = make_rectangle_solid(Vec2(0, 0), Vec2(1, 0.4), 3, 2,
                                         {BoundaryTag::Free, BoundaryTag::Free, BoundaryTag::Clamped, BoundaryTag::Free});
  NeoHookean mat;
  mat.E = 500;
  mat.nu = 0.4;
  mat.rho = 250;
  const SolidOperator op(mesh, mat);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-0.03, 0.03);
  Eigen::VectorXd D(op.num_dofs());
  for (int i = 0; i < D.size(); ++i) D[i] = u(rng);
  SparseMatrix K;
  const Eigen::VectorXd f = op.internal_force(D, &K);
  const double eps = 1e-6;
  Eigen::MatrixXd Kfd(D.size(), D.size());
  for (int j = 0; j < D.size(); ++j) {
    Eigen::VectorXd Dp = D, Dm = D;
    Dp[j] += eps;
    Dm[j] -= eps;
    EXPECT_NEAR((op.stored_energy(Dp) - op.stored_energy(Dm)) / (2 * eps), f[j], 1e-6 * (1 + std::abs(f[j])));
    Kfd.col(j) = (op.internal_force(Dp) - op.internal_force(Dm)) / (2 * eps);
  }
  const Eigen::MatrixXd Kd = Eigen::MatrixXd(K);
  EXPECT_LT((Kd - Kfd).norm() / Kd.norm(), 1e-6);
  EXPECT_LT((Kd - Kd.transpose()).norm(), 1e-9 * Kd.norm());
}

TEST(SolidOperator, MassAndRigidMotions) {
  const auto mesh = make_rectangle_solid(Vec2(0, 0), Vec2(2, 1), 4, 2,
                                         {BoundaryTag::Wet, BoundaryTag::Wet, BoundaryTag::Wet, BoundaryTag::Wet});
  NeoHookean mat;
  mat.rho = 3.0;
  const SolidOperator op(mesh, mat);
  EXPECT_NEAR(op.body_force(Vec2(1, 0)).sum(), 6.0, 1e-12);
  // A rigid rotation produces no internal force.
  const double th = 0.7;
  Mat2 R;
  R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  Eigen::VectorXd D(op.num_dofs());
  for (int n = 0; n < mesh.num_nodes(); ++n) {
    const Vec2 d = R * mesh.X[n] - mesh.X[n];
    D[2 * n] = d.x();
    D[2 * n + 1] = d.y();
  }
  EXPECT_LT(op.internal_force(D).norm(), 1e-12);
  EXPECT_NEAR(op.min_jacobian(D), 1.0, 1e-12);
}

TEST(GeneralizedAlpha, ParametersFromSpectralRadius) {
  const auto p = GenAlphaParams::from_rho_inf(0.5);
  EXPECT_NEAR(p.alpha_f, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(p.alpha_m, 0.0, 1e-15);
  EXPECT_NEAR(p.gamma, 5.0 / 6.0, 1e-15);
  EXPECT_NEAR(p.beta, 4.0 / 9.0, 1e-15);
  const auto q = GenAlphaParams::from_rho_inf(1.0);
  EXPECT_DOUBLE_EQ(q.gamma, 0.5);
  EXPECT_DOUBLE_EQ(q.beta, 0.25);
  EXPECT_THROW(GenAlphaParams::from_rho_inf(1.5), std::invalid_argument);
}

TEST(GeneralizedAlpha, UnitSpectralRadiusReproducesTrapezoidalRule) {
  // Independent average-acceleration Newmark recurrence.
  const double m = 2.0, k = 7.0, dt = 0.05;
  double u = 0.3, v = -0.1, a = -k * u / m;
  const auto p = GenAlphaParams::from_rho_inf(1.0);
  const SparseMatrix M = scalar_matrix(m);
  SolidState s{Eigen::VectorXd::Constant(1, u), Eigen::VectorXd::Constant(1, v), Eigen::VectorXd::Constant(1, a)};
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  for (int n = 0; n < 40; ++n) {
    const double up = u + dt * v + 0.25 * dt * dt * a;
    const double an = -k * up / (m + 0.25 * dt * dt * k);
    const double un = up + 0.25 * dt * dt * an;
    v += 0.5 * dt * (a + an);
    u = un;
    a = an;
    const Eigen::VectorXd r0 = genalpha_residual(M, s.D, k * s.D, zero, s, k * s.D, zero, dt, p);
    const double jac = genalpha_mass_coefficient(dt, p) * m + (1 - p.alpha_f) * k;
    s = genalpha_update(s.D - r0 / jac, s, dt, p);
    ASSERT_NEAR(s.D[0], u, 1e-13);
    ASSERT_NEAR(s.U[0], v, 1e-12);
  }
}

TEST(GeneralizedAlpha, SecondOrderConvergence) {
  for (double rho : {1.0, 0.5}) {
    const double T = 1.0;
    const double e1 = sdof_error(T / 40, T, rho);
    const double e2 = sdof_error(T / 80, T, rho);
    const double e3 = sdof_error(T / 160, T, rho);
    EXPECT_GE(std::log2(e1 / e2), 1.9) << rho;
    EXPECT_GE(std::log2(e2 / e3), 1.9) << rho;
  }
}
