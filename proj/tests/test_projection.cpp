#include "fsi2d/projection.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace fsi2d;

namespace {

const StructuredBackgroundMesh kMesh = StructuredBackgroundMesh::from_box(Vec2(0, 0), Vec2(1, 1), 10, 10);

CutConfiguration with_box(const Vec2& lo, const Vec2& hi) {
  ExcludedRegion r;
  r.polygons.push_back({lo, Vec2(hi.x(), lo.y()), hi, Vec2(lo.x(), hi.y())});
  return classify_and_cut(kMesh, r);
}

Eigen::VectorXd sample(const CutConfiguration& cfg, double (*f)(const Vec2&)) {
  Eigen::VectorXd v(cfg.dofs.size());
  for (int k = 0; k < cfg.dofs.size(); ++k) v[k] = f(kMesh.node(cfg.dofs.nodes[k]));
  return v;
}

double linear(const Vec2& x) { return 0.3 - 1.7 * x.x() + 2.9 * x.y(); }
double kink(const Vec2& x) { return std::abs(x.x() - 0.5) + x.y() * x.y(); }

}  // namespace

TEST(Projection, StationaryConfigurationIsBitwiseIdentity) {
  const auto cfg = with_box(Vec2(0.33, 0.33), Vec2(0.67, 0.67));
  FluidVectors v = FluidVectors::zeros(cfg.dofs.size());
  for (int i = 0; i < v.U.size(); ++i) v.U[i] = std::sin(1.0 + i), v.A[i] = std::cos(2.0 * i);
  for (int i = 0; i < v.P.size(); ++i) v.P[i] = std::exp(-0.1 * i);
  const FluidVectors w = project_fluid(cfg, cfg, v);
  EXPECT_TRUE(match_dofs(cfg, cfg).identity());
  EXPECT_EQ(w.U, v.U);
  EXPECT_EQ(w.P, v.P);
  EXPECT_EQ(w.A, v.A);
}

TEST(Projection, ExtensionReproducesLinearFieldAtSingleFreeDof) {
  const auto prev = with_box(Vec2(0.33, 0.33), Vec2(0.67, 0.67));
  const auto curr = with_box(Vec2(0.43, 0.43), Vec2(0.57, 0.57));
  const PartialValues pv = transfer_copy(prev, curr, sample(prev, linear), 1);
  ASSERT_EQ(pv.corr.count(DofStatus::NeedsExtension), 1);
  const Eigen::VectorXd full = extension_solve(curr, pv.values, pv.corr, 1);
  const Eigen::VectorXd exact = sample(curr, linear);
  EXPECT_LT((full - exact).cwiseAbs().maxCoeff(), 1e-10);
  // Copied values stay bitwise.
  for (int k = 0; k < curr.dofs.size(); ++k)
    if (pv.corr.status[k] == DofStatus::Copied) EXPECT_EQ(full[k], pv.values[k]);
}

TEST(Projection, ExtensionIsSymmetricOnSymmetricConfiguration) {
  const auto prev = with_box(Vec2(0.23, 0.33), Vec2(0.77, 0.67));
  const auto curr = with_box(Vec2(0.32, 0.33), Vec2(0.68, 0.67));
  const PartialValues pv = transfer_copy(prev, curr, sample(prev, kink), 1);
  ASSERT_EQ(pv.corr.count(DofStatus::NeedsExtension), 2);
  const Eigen::VectorXd full = extension_solve(curr, pv.values, pv.corr, 1);
  std::vector<double> free;
  for (int k = 0; k < curr.dofs.size(); ++k)
    if (pv.corr.status[k] == DofStatus::NeedsExtension) free.push_back(full[k]);
  EXPECT_NEAR(free[0], free[1], 1e-12);
  const Eigen::MatrixXd A = extension_matrix(curr, pv.corr);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  EXPECT_LT((A - A.transpose()).norm(), 1e-15);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(Projection, ExtensionSystemIsPositiveDefiniteOnLargerFreeSet) {
  const auto prev = with_box(Vec2(0.13, 0.23), Vec2(0.87, 0.77));
  const auto curr = with_box(Vec2(0.22, 0.32), Vec2(0.78, 0.68));
  const auto corr = match_dofs(prev, curr);
  ASSERT_GT(corr.count(DofStatus::NeedsExtension), 4);
  ASSERT_EQ(corr.count(DofStatus::Violation), 0);
  const Eigen::MatrixXd A = extension_matrix(curr, corr);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  EXPECT_GT(es.eigenvalues().minCoeff(), 1e-14 * es.eigenvalues().maxCoeff());
  const PartialValues pv = transfer_copy(prev, curr, sample(prev, linear), 1);
  EXPECT_LT((extension_solve(curr, pv.values, pv.corr, 1) - sample(curr, linear)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Projection, ProjectingTwiceEqualsProjectingOnce) {
  const auto prev = with_box(Vec2(0.33, 0.33), Vec2(0.67, 0.67));
  const auto curr = with_box(Vec2(0.43, 0.43), Vec2(0.57, 0.57));
  FluidVectors v = FluidVectors::zeros(prev.dofs.size());
  for (int i = 0; i < v.U.size(); ++i) v.U[i] = std::sin(3.0 * i);
  v.P = sample(prev, kink);
  const FluidVectors once = project_fluid(prev, curr, v);
  const FluidVectors twice = project_fluid(curr, curr, once);
  EXPECT_EQ(once.U, twice.U);
  EXPECT_EQ(once.P, twice.P);
}

TEST(Projection, LargeInterfaceJumpRaisesCflViolation) {
  const auto prev = with_box(Vec2(0.33, 0.33), Vec2(0.67, 0.67));
  const auto curr = with_box(Vec2(0.52, 0.33), Vec2(0.67, 0.67));
  EXPECT_GT(match_dofs(prev, curr).count(DofStatus::Violation), 0);
  try {
    transfer_copy(prev, curr, Eigen::VectorXd::Zero(prev.dofs.size()), 1);
    FAIL() << "expected CflViolation";
  } catch (const CflViolation& e) {
    EXPECT_NE(std::string(e.what()).find("CFL-like condition"), std::string::npos);
    EXPECT_EQ(kMesh.node(e.node()).isApprox(Vec2(0.5, 0.5)), true);
  }
}

TEST(Projection, FreeDofWithoutConstrainedNeighbourIsRejected) {
  const auto cfg = with_box(Vec2(0.33, 0.33), Vec2(0.67, 0.67));
  DofCorrespondence corr;
  corr.status.assign(cfg.dofs.size(), DofStatus::NeedsExtension);
  corr.source.assign(cfg.dofs.size(), -1);
  EXPECT_THROW(extension_solve(cfg, Eigen::VectorXd::Zero(cfg.dofs.size()), corr, 1), IsolatedGhost);
}
