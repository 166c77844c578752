#include "fsi2d/geometry.hpp"
#include "fsi2d/jump_average.hpp"
#include "fsi2d/quadrature.hpp"
#include "fsi2d/structured_mesh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace fsi2d;

namespace {

// Green's theorem: int_P x^a y^b dA = 1/(a+1) * oint x^(a+1) y^b dy, with the
// edge integrals done by 4-point Gauss (exact up to degree 7).
double green_moment(const Polygon& p, int a, int b) {
  std::vector<double> x, w;
  gauss_legendre_01(4, x, w);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2& u = p[i];
    const Vec2& v = p[(i + 1) % p.size()];
    for (std::size_t q = 0; q < x.size(); ++q) {
      const Vec2 z = u + x[q] * (v - u);
      s += w[q] * std::pow(z.x(), a + 1) * std::pow(z.y(), b) * (v.y() - u.y());
    }
  }
  return s / (a + 1);
}

double rule_moment(const QuadratureRule& r, int a, int b) {
  double s = 0.0;
  for (std::size_t q = 0; q < r.size(); ++q) s += r.weights[q] * std::pow(r.points[q].x(), a) * std::pow(r.points[q].y(), b);
  return s;
}

Polygon l_shape() {
  return {Vec2(0, 0), Vec2(2, 0), Vec2(2, 1), Vec2(1, 1), Vec2(1, 2), Vec2(0, 2)};
}

}  // namespace

TEST(Polygon, AreaAndCentroidOfLShape) {
  const Polygon p = l_shape();
  EXPECT_DOUBLE_EQ(signed_area(p), 3.0);
  const Vec2 c = polygon_centroid(p);
  EXPECT_NEAR(c.x(), 5.0 / 6.0, 1e-15);
  EXPECT_NEAR(c.y(), 5.0 / 6.0, 1e-15);
}

TEST(Polygon, PointInPolygonAndSelfIntersection) {
  const Polygon p = l_shape();
  EXPECT_TRUE(point_in_polygon(Vec2(0.5, 1.5), p));
  EXPECT_FALSE(point_in_polygon(Vec2(1.5, 1.5), p));
  EXPECT_FALSE(is_self_intersecting(p));
  const Polygon bow{Vec2(0, 0), Vec2(1, 1), Vec2(1, 0), Vec2(0, 1)};
  EXPECT_TRUE(is_self_intersecting(bow));
}

TEST(Polygon, TriangulationCoversNonConvexPolygon) {
  // Not star-shaped with respect to the vertex centroid: needs ear clipping.
  const Polygon p{Vec2(0, 0), Vec2(4, 0), Vec2(4, 1), Vec2(0.2, 0.2), Vec2(1, 4), Vec2(0, 4)};
  double area = 0.0;
  for (const auto& t : triangulate(p)) {
    EXPECT_GT(t.area(), 0.0);
    area += t.area();
  }
  EXPECT_NEAR(area, signed_area(p), 1e-13);
}

TEST(Quadrature, PolygonRuleMatchesGreenMoments) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> jitter(-0.2, 0.2);
  for (int trial = 0; trial < 20; ++trial) {
    Polygon p = l_shape();
    for (auto& v : p) v += Vec2(jitter(rng), jitter(rng));
    ASSERT_FALSE(is_self_intersecting(p));
    const QuadratureRule r = volume_quadrature(p);
    for (int a = 0; a <= 5; ++a)
      for (int b = 0; a + b <= 5; ++b) {
        const double ref = green_moment(p, a, b);
        EXPECT_NEAR(rule_moment(r, a, b), ref, 1e-12 * std::max(1.0, std::abs(ref))) << a << ' ' << b;
      }
  }
}

TEST(Quadrature, RectangleAndSegmentRules) {
  const QuadratureRule r = rectangle_rule(Vec2(1, 2), Vec2(1.5, 3), 3);
  EXPECT_NEAR(r.weight_sum(), 0.5, 1e-15);
  const Polygon box{Vec2(1, 2), Vec2(1.5, 2), Vec2(1.5, 3), Vec2(1, 3)};
  EXPECT_NEAR(rule_moment(r, 5, 4), green_moment(box, 5, 4), 1e-11);
  const QuadratureRule s = segment_rule(Vec2(0, 0), Vec2(3, 4), 3);
  EXPECT_NEAR(s.weight_sum(), 5.0, 1e-15);
  double m = 0.0;
  for (std::size_t q = 0; q < s.size(); ++q) m += s.weights[q] * std::pow(s.points[q].x() / 3.0, 5);
  EXPECT_NEAR(m, 5.0 / 6.0, 1e-14);
}

TEST(StructuredMesh, TopologyAndLocate) {
  const auto mesh = StructuredBackgroundMesh::from_box(Vec2(0, 0), Vec2(2, 1), 4, 2);
  EXPECT_EQ(mesh.num_nodes(), 15);
  EXPECT_EQ(mesh.num_elements(), 8);
  EXPECT_EQ(mesh.interior_facets().size(), 3u * 2u + 4u * 1u);
  EXPECT_EQ(mesh.locate(Vec2(0.75, 0.25)), mesh.element_id(1, 0));
  EXPECT_EQ(mesh.locate(Vec2(2.0, 1.0)), mesh.element_id(3, 1));
  EXPECT_EQ(mesh.locate(Vec2(2.5, 1.0)), -1);
  for (const auto& f : mesh.interior_facets()) {
    const Vec2 mid = 0.5 * (f.a + f.b);
    EXPECT_EQ(mesh.locate(mid - 1e-9 * f.normal), f.e0);
    EXPECT_EQ(mesh.locate(mid + 1e-9 * f.normal), f.e1);
  }
  EXPECT_EQ(mesh.node_elements(mesh.node_id(2, 1)).size(), 4u);
  EXPECT_TRUE(mesh.on_side(mesh.node_id(4, 0), Side::Right));
}

TEST(StructuredMesh, Q1BasisPartitionOfUnityAndGradients) {
  const RectQ1 q{Vec2(0.3, -0.2), 0.5, 0.25};
  const Vec2 x(0.41, -0.13);
  const auto N = q.values(x);
  const auto G = q.gradients(x);
  double sum = 0.0;
  Vec2 gsum = Vec2::Zero();
  for (int a = 0; a < 4; ++a) {
    sum += N[a];
    gsum += G[a];
  }
  EXPECT_NEAR(sum, 1.0, 1e-15);
  EXPECT_NEAR(gsum.norm(), 0.0, 1e-14);
  const double eps = 1e-6;
  for (int a = 0; a < 4; ++a) {
    const double dx = (q.values(x + Vec2(eps, 0))[a] - q.values(x - Vec2(eps, 0))[a]) / (2 * eps);
    const double dy = (q.values(x + Vec2(0, eps))[a] - q.values(x - Vec2(0, eps))[a]) / (2 * eps);
    EXPECT_NEAR(dx, G[a].x(), 1e-8);
    EXPECT_NEAR(dy, G[a].y(), 1e-8);
    const double dxy = (q.gradients(x + Vec2(0, eps))[a].x() - q.gradients(x - Vec2(0, eps))[a].x()) / (2 * eps);
    EXPECT_NEAR(dxy, q.mixed()[a], 1e-6);
  }
}

TEST(JumpAverage, ProductIdentityOnRandomSamples) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0), w01(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double wi = w01(rng);
    const AverageWeights w(wi, 1.0 - wi);
    const double fi = u(rng), fj = u(rng), gi = u(rng), gj = u(rng);
    const double lhs = jump(fi * gi, fj * gj);
    const double rhs = jump(fi, fj) * weighted_average(gi, gj, w) + conjugate_average(fi, fj, w) * jump(gi, gj);
    EXPECT_NEAR(lhs, rhs, 1e-14);
  }
  EXPECT_THROW(AverageWeights(0.7, 0.7), std::invalid_argument);
  const Vec2 a(1, 2), b(3, 5);
  EXPECT_EQ(jump(a, b), Vec2(-2, -3));
}
