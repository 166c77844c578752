#include "fsi2d/cut.hpp"
#include "fsi2d/solid_mesh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace fsi2d;

namespace {

Polygon regular_polygon(const Vec2& c, double r, int n, double phase) {
  Polygon p;
  for (int k = 0; k < n; ++k) {
    const double t = phase + 2.0 * std::numbers::pi * k / n;
    p.emplace_back(c.x() + r * std::cos(t), c.y() + r * std::sin(t));
  }
  return p;
}

ExcludedRegion region_from(const Polygon& p) {
  ExcludedRegion r;
  r.polygons.push_back(p);
  for (std::size_t i = 0; i < p.size(); ++i) {
    CutterSegment s;
    s.a = p[i];
    s.b = p[(i + 1) % p.size()];
    const Vec2 t = (s.b - s.a).normalized();
    s.normal = Vec2(-t.y(), t.x());  // into the polygon
    s.source = static_cast<int>(i);
    r.segments.push_back(s);
  }
  return r;
}

double perimeter(const Polygon& p) {
  double l = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) l += (p[(i + 1) % p.size()] - p[i]).norm();
  return l;
}

}  // namespace

TEST(Cut, AreaPartitionAndInterfaceLengthForRandomPlacements) {
  const auto mesh = StructuredBackgroundMesh::from_box(Vec2(0, 0), Vec2(1, 1), 16, 16);
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> pos(0.3, 0.7), rad(0.08, 0.2), ph(0.0, 1.0);
  std::uniform_int_distribution<int> nv(3, 12);
  for (int trial = 0; trial < 50; ++trial) {
    const Polygon p = regular_polygon(Vec2(pos(rng), pos(rng)), rad(rng), nv(rng), ph(rng));
    const auto cfg = classify_and_cut(mesh, region_from(p));
    EXPECT_NEAR(cfg.total_fluid_area() + signed_area(p), 1.0, 1e-12);
    double len = 0.0;
    for (const auto& piece : cfg.surface) len += piece.rule.weight_sum();
    EXPECT_NEAR(len, perimeter(p), 1e-12);
    for (const auto& piece : cfg.surface) EXPECT_TRUE(cfg.active[piece.element]);
  }
}

TEST(Cut, ClassificationAgreesWithPointSampling) {
  const auto mesh = StructuredBackgroundMesh::from_box(Vec2(0, 0), Vec2(1, 1), 10, 10);
  const Polygon p = regular_polygon(Vec2(0.52, 0.47), 0.27, 7, 0.3);
  const auto cfg = classify_and_cut(mesh, region_from(p));
  // Oracle: dense sampling of each element.
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Vec2 lo = mesh.element_lower_left(e);
    int in = 0, total = 0;
    for (int i = 0; i < 40; ++i)
      for (int j = 0; j < 40; ++j) {
        const Vec2 x = lo + Vec2((i + 0.5) / 40 * mesh.h1(), (j + 0.5) / 40 * mesh.h2());
        in += point_in_polygon(x, p) ? 0 : 1;
        ++total;
      }
    const double frac = static_cast<double>(in) / total;
    if (frac == 1.0) {
      EXPECT_NE(cfg.element_class[e], ElementClass::Outside);
    } else if (frac == 0.0) {
      EXPECT_NE(cfg.element_class[e], ElementClass::InsideFluid);
    } else {
      EXPECT_EQ(cfg.element_class[e], ElementClass::Cut);
    }
    EXPECT_NEAR(cfg.fluid_area[e] / (mesh.h1() * mesh.h2()), frac, 0.06);
  }
}

TEST(Cut, GhostFacetsAndDofRoles) {
  const auto mesh = StructuredBackgroundMesh::from_box(Vec2(0, 0), Vec2(1, 1), 8, 8);
  const Polygon box{Vec2(0.31, 0.33), Vec2(0.67, 0.33), Vec2(0.67, 0.71), Vec2(0.31, 0.71)};
  const auto cfg = classify_and_cut(mesh, region_from(box));
  ASSERT_GT(cfg.num_cut(), 0);
  for (int f : cfg.ghost_facets) {
    const auto& fc = mesh.interior_facets()[f];
    EXPECT_TRUE(cfg.active[fc.e0] && cfg.active[fc.e1]);
    EXPECT_TRUE(cfg.element_class[fc.e0] == ElementClass::Cut || cfg.element_class[fc.e1] == ElementClass::Cut);
  }
  for (int n = 0; n < mesh.num_nodes(); ++n) {
    const Vec2 x = mesh.node(n);
    const bool strictly_inside = x.x() > 0.31 && x.x() < 0.67 && x.y() > 0.33 && x.y() < 0.71;
    if (cfg.dofs.role[n] == DofRole::Standard) EXPECT_FALSE(strictly_inside);
    if (cfg.dofs.role[n] == DofRole::Ghost) EXPECT_TRUE(strictly_inside);
  }
  // Node (0.375, 0.375) is inside the box and belongs to a cut element.
  EXPECT_EQ(cfg.dofs.role[mesh.node_id(3, 3)], DofRole::Ghost);
  EXPECT_EQ(cfg.dofs.role[mesh.node_id(4, 4)], DofRole::Inactive);
  EXPECT_EQ(cfg.dofs.role[mesh.node_id(0, 0)], DofRole::Standard);

  CutOptions wide;
  wide.ghost_layers = 1;
  const auto cfg2 = classify_and_cut(mesh, region_from(box), wide);
  EXPECT_GT(cfg2.ghost_facets.size(), cfg.ghost_facets.size());
}

TEST(Cut, SmallObstacleInsideOneElementProducesHoleFreePieces) {
  const auto mesh = StructuredBackgroundMesh::from_box(Vec2(0, 0), Vec2(1, 1), 4, 4);
  const Polygon p = regular_polygon(Vec2(0.37, 0.38), 0.05, 6, 0.1);
  const auto cfg = classify_and_cut(mesh, region_from(p));
  const int e = mesh.locate(Vec2(0.37, 0.38));
  EXPECT_EQ(cfg.element_class[e], ElementClass::Cut);
  EXPECT_GE(cfg.pieces[e].size(), 2u);
  EXPECT_NEAR(cfg.fluid_area[e], 1.0 / 16.0 - signed_area(p), 1e-14);
  EXPECT_NEAR(element_volume_rule(cfg, e).weight_sum(), cfg.fluid_area[e], 1e-14);
  // Every node of the element lies in the fluid.
  for (int n : mesh.element_nodes(e)) EXPECT_EQ(cfg.dofs.role[n], DofRole::Standard);
}

TEST(Cut, SnappingRemovesSlivers) {
  const auto mesh = StructuredBackgroundMesh::from_box(Vec2(0, 0), Vec2(1, 1), 4, 4);
  const double eps = 1e-12;
  const Polygon box{Vec2(0.25 + eps, 0.25 - eps), Vec2(0.75, 0.25 - eps), Vec2(0.75, 0.75), Vec2(0.25 + eps, 0.75)};
  const auto cfg = classify_and_cut(mesh, region_from(box));
  EXPECT_EQ(cfg.num_cut(), 0);
  EXPECT_NEAR(cfg.total_fluid_area(), 0.75, 1e-15);
}

TEST(Cut, RejectsSelfIntersectingCutter) {
  const auto mesh = StructuredBackgroundMesh::from_box(Vec2(0, 0), Vec2(1, 1), 4, 4);
  ExcludedRegion r;
  r.polygons.push_back({Vec2(0.2, 0.2), Vec2(0.8, 0.8), Vec2(0.8, 0.2), Vec2(0.2, 0.8)});
  EXPECT_THROW(classify_and_cut(mesh, r), GeometryError);
}

TEST(SolidMesh, RoundTripAndInterfaceExtraction) {
  const auto m = make_rectangle_solid(Vec2(0, 0), Vec2(1, 0.5), 2, 1,
                                      {BoundaryTag::Wet, BoundaryTag::Wet, BoundaryTag::Clamped, BoundaryTag::Wet});
  std::stringstream ss;
  write_solid_mesh(ss, m);
  const auto m2 = read_solid_mesh(ss);
  EXPECT_EQ(m2.num_nodes(), m.num_nodes());
  EXPECT_EQ(m2.boundary.size(), m.boundary.size());
  EXPECT_EQ(m2.clamped_nodes(), (std::vector<int>{0, 1, 2}));
  const Polygon outline = solid_outline(m2, {});
  EXPECT_NEAR(signed_area(outline), 0.5, 1e-15);
  const auto iface = extract_interface(m2, {});
  EXPECT_EQ(iface.size(), 4u);
  for (const auto& s : iface) {
    // Normal points into the solid.
    EXPECT_TRUE(point_in_polygon(0.5 * (s.a + s.b) + 1e-6 * s.normal, outline));
  }
}

TEST(SolidMesh, RotatedSegmentInterface) {
  SolidMesh m;
  m.X = {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};
  m.elements = {{0, 1, 2, 3}};
  m.boundary = {{0, 1, BoundaryTag::Wet}, {1, 2, BoundaryTag::Free}, {2, 3, BoundaryTag::Free}, {3, 0, BoundaryTag::Free}};
  m.validate();
  // Rigid rotation by 90 degrees about the origin.
  std::vector<double> d;
  for (const auto& x : m.X) {
    const Vec2 y(-x.y(), x.x());
    d.push_back(y.x() - x.x());
    d.push_back(y.y() - x.y());
  }
  const auto iface = extract_interface(m, d);
  ASSERT_EQ(iface.size(), 1u);
  EXPECT_NEAR((iface[0].a - Vec2(0, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((iface[0].b - Vec2(0, 1)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((iface[0].normal - Vec2(-1, 0)).norm(), 0.0, 1e-15);
}

TEST(SolidMesh, ParserReportsLineNumbers) {
  std::stringstream ss("dim 2\nN 0 0\nN 1 0\nX 3\n");
  try {
    read_solid_mesh(ss);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
  }
}
