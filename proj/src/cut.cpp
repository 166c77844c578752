#include "fsi2d/cut.hpp"

#define BOOST_GEOMETRY_NO_ROBUSTNESS
#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>

#include <algorithm>
#include <cmath>

namespace bg = boost::geometry;

namespace fsi2d {

namespace {

using BgPoint = bg::model::d2::point_xy<double>;
using BgPolygon = bg::model::polygon<BgPoint, false, true>;
using BgMulti = bg::model::multi_polygon<BgPolygon>;

BgPolygon to_bg(const Polygon& poly) {
  BgPolygon out;
  for (const auto& p : poly) bg::append(out.outer(), BgPoint(p.x(), p.y()));
  if (!poly.empty()) bg::append(out.outer(), BgPoint(poly.front().x(), poly.front().y()));
  bg::correct(out);
  return out;
}

Polygon ring_to_polygon(const BgPolygon::ring_type& ring, double merge_tol) {
  Polygon out;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    Vec2 p(ring[i].x(), ring[i].y());
    if (!out.empty() && (p - out.back()).norm() <= merge_tol) continue;
    out.push_back(p);
  }
  while (out.size() > 1 && (out.front() - out.back()).norm() <= merge_tol) out.pop_back();
  if (signed_area(out) < 0.0) std::reverse(out.begin(), out.end());
  return out;
}

void clip_recursive(const Vec2& lo, const Vec2& hi, const std::vector<BgPolygon>& excluded, int depth,
                    std::vector<Polygon>& out) {
  const Box box{lo, hi};
  BgMulti current;
  current.push_back(to_bg({lo, Vec2(hi.x(), lo.y()), hi, Vec2(lo.x(), hi.y())}));
  for (const auto& ex : excluded) {
    bg::model::box<BgPoint> eb;
    bg::envelope(ex, eb);
    const Box ebox{Vec2(eb.min_corner().x(), eb.min_corner().y()), Vec2(eb.max_corner().x(), eb.max_corner().y())};
    if (!box.overlaps(ebox)) continue;
    BgMulti next;
    bg::difference(current, ex, next);
    current = std::move(next);
    if (current.empty()) return;
  }
  const double merge_tol = 1e-14 * std::max(hi.x() - lo.x(), hi.y() - lo.y());
  for (const auto& poly : current) {
    if (!poly.inners().empty()) {
      if (depth > 12) throw GeometryError("cannot resolve fluid region with holes");
      // Split through the hole and recurse on the two halves.
      bg::model::box<BgPoint> hb;
      bg::envelope(poly.inners().front(), hb);
      const double cx = 0.5 * (hb.min_corner().x() + hb.max_corner().x());
      clip_recursive(lo, Vec2(cx, hi.y()), excluded, depth + 1, out);
      clip_recursive(Vec2(cx, lo.y()), hi, excluded, depth + 1, out);
      return;
    }
  }
  for (const auto& poly : current) {
    Polygon p = ring_to_polygon(poly.outer(), merge_tol);
    if (p.size() >= 3 && signed_area(p) > 0.0) out.push_back(std::move(p));
  }
}

double snap_coord(double x, double x0, double h, double tol) {
  const double k = std::round((x - x0) / h);
  const double g = x0 + k * h;
  return std::abs(x - g) < tol * h ? g : x;
}

bool node_touches_fluid(const Vec2& x, const std::vector<Polygon>& pieces, double tol) {
  for (const auto& poly : pieces) {
    if (point_in_polygon(x, poly)) return true;
    for (std::size_t i = 0; i < poly.size(); ++i)
      if (distance_to_segment(x, poly[i], poly[(i + 1) % poly.size()]) <= tol) return true;
  }
  return false;
}

}  // namespace

DofMap DofMap::from_roles(std::vector<DofRole> roles) {
  DofMap m;
  m.role = std::move(roles);
  m.index.assign(m.role.size(), -1);
  for (std::size_t i = 0; i < m.role.size(); ++i)
    if (m.role[i] != DofRole::Inactive) {
      m.index[i] = static_cast<int>(m.nodes.size());
      m.nodes.push_back(static_cast<int>(i));
    }
  return m;
}

int CutConfiguration::num_cut() const {
  return static_cast<int>(std::count(element_class.begin(), element_class.end(), ElementClass::Cut));
}

int CutConfiguration::num_active() const {
  return static_cast<int>(std::count(active.begin(), active.end(), 1));
}

double CutConfiguration::total_fluid_area() const {
  double a = 0.0;
  for (double v : fluid_area) a += v;
  return a;
}

Vec2 snap_to_grid(const Vec2& p, const StructuredBackgroundMesh& mesh, double rel_tol) {
  return {snap_coord(p.x(), mesh.origin().x(), mesh.h1(), rel_tol),
          snap_coord(p.y(), mesh.origin().y(), mesh.h2(), rel_tol)};
}

std::vector<Polygon> clip_rectangle(const Vec2& lo, const Vec2& hi, const std::vector<Polygon>& excluded) {
  std::vector<BgPolygon> ex;
  ex.reserve(excluded.size());
  for (const auto& p : excluded) ex.push_back(to_bg(p));
  std::vector<Polygon> out;
  clip_recursive(lo, hi, ex, 0, out);
  return out;
}

CutConfiguration classify_and_cut(const StructuredBackgroundMesh& mesh, const ExcludedRegion& region,
                                  const CutOptions& opts) {
  CutConfiguration cfg;
  cfg.mesh = mesh;
  cfg.snap_tol = opts.snap_tol;
  const int ne = mesh.num_elements();
  cfg.element_class.assign(ne, ElementClass::InsideFluid);
  cfg.active.assign(ne, 1);
  cfg.pieces.assign(ne, {});
  cfg.volume_rules.assign(ne, {});
  const double full_area = mesh.h1() * mesh.h2();
  cfg.fluid_area.assign(ne, full_area);

  std::vector<BgPolygon> excluded;
  std::vector<Box> boxes;
  for (const auto& poly : region.polygons) {
    if (poly.size() < 3) throw GeometryError("excluded polygon needs at least three vertices");
    Polygon snapped;
    for (const auto& p : poly) snapped.push_back(snap_to_grid(p, mesh, opts.snap_tol));
    if (signed_area(snapped) <= 0.0) throw GeometryError("excluded polygon must be counterclockwise");
    if (is_self_intersecting(snapped)) throw GeometryError("excluded polygon is self-intersecting");
    boxes.push_back(bounding_box(snapped));
    excluded.push_back(to_bg(snapped));
  }

  for (int e = 0; e < ne; ++e) {
    const Vec2 lo = mesh.element_lower_left(e);
    const Vec2 hi = lo + mesh.h();
    const Box eb{lo, hi};
    bool touched = false;
    for (const auto& b : boxes) touched = touched || eb.overlaps(b);
    if (!touched) continue;
    std::vector<Polygon> pieces;
    clip_recursive(lo, hi, excluded, 0, pieces);
    double area = 0.0;
    for (const auto& p : pieces) area += signed_area(p);
    if (area <= opts.outside_tol * full_area) {
      cfg.element_class[e] = ElementClass::Outside;
      cfg.active[e] = 0;
      cfg.fluid_area[e] = 0.0;
    } else if (area >= (1.0 - opts.outside_tol) * full_area) {
      cfg.fluid_area[e] = full_area;
    } else {
      cfg.element_class[e] = ElementClass::Cut;
      cfg.fluid_area[e] = area;
      for (const auto& p : pieces) cfg.volume_rules[e].append(volume_quadrature(p));
      cfg.pieces[e] = std::move(pieces);
    }
  }
  if (!opts.force_active.empty()) {
    if (static_cast<int>(opts.force_active.size()) != ne)
      throw std::invalid_argument("force_active must have one entry per element");
    for (int e = 0; e < ne; ++e)
      if (opts.force_active[e]) cfg.active[e] = 1;
  }

  // Ghost facets: around cut elements and active elements without full fluid.
  auto partial = [&](int e) { return cfg.active[e] && cfg.element_class[e] != ElementClass::InsideFluid; };
  std::vector<char> marked(ne, 0);
  for (int e = 0; e < ne; ++e) marked[e] = partial(e);
  const auto& facets = mesh.interior_facets();
  for (int layer = 0; layer < opts.ghost_layers; ++layer) {
    std::vector<char> grown = marked;
    for (const auto& f : facets)
      if (cfg.active[f.e0] && cfg.active[f.e1] && (marked[f.e0] || marked[f.e1])) grown[f.e0] = grown[f.e1] = 1;
    marked = std::move(grown);
  }
  for (int f = 0; f < static_cast<int>(facets.size()); ++f) {
    const auto& fc = facets[f];
    if (cfg.active[fc.e0] && cfg.active[fc.e1] && (marked[fc.e0] || marked[fc.e1])) cfg.ghost_facets.push_back(f);
  }

  std::vector<DofRole> roles(mesh.num_nodes(), DofRole::Inactive);
  const double tol = opts.standard_tol * mesh.diameter();
  for (int e = 0; e < ne; ++e) {
    if (!cfg.active[e]) continue;
    for (int n : mesh.element_nodes(e)) {
      if (roles[n] == DofRole::Standard) continue;
      bool physical = false;
      if (cfg.element_class[e] == ElementClass::InsideFluid) physical = true;
      else if (cfg.element_class[e] == ElementClass::Cut) physical = node_touches_fluid(mesh.node(n), cfg.pieces[e], tol);
      roles[n] = physical ? DofRole::Standard : DofRole::Ghost;
    }
  }
  cfg.dofs = DofMap::from_roles(std::move(roles));
  cfg.surface = surface_quadrature(region, cfg);
  return cfg;
}

std::vector<SurfacePiece> surface_quadrature(const ExcludedRegion& region, const CutConfiguration& cfg,
                                             const StructuredBackgroundMesh* extra, int points_per_piece) {
  const auto& mesh = cfg.mesh;
  std::vector<SurfacePiece> out;
  std::vector<double> gx, gw;
  gauss_legendre_01(points_per_piece, gx, gw);
  const double hmin = std::min(mesh.h1(), mesh.h2());
  const Box bounds = mesh.bounds();

  auto add_line_params = [](double a, double b, double x0, double h, int n, std::vector<double>& ts) {
    if (a == b) return;
    const double lo = std::min(a, b), hi = std::max(a, b);
    const int k0 = std::max(0, static_cast<int>(std::ceil((lo - x0) / h)));
    const int k1 = std::min(n, static_cast<int>(std::floor((hi - x0) / h)));
    for (int k = k0; k <= k1; ++k) {
      const double t = (x0 + k * h - a) / (b - a);
      if (t > 0.0 && t < 1.0) ts.push_back(t);
    }
  };

  for (int si = 0; si < static_cast<int>(region.segments.size()); ++si) {
    const auto& seg = region.segments[si];
    const Vec2 a = snap_to_grid(seg.a, mesh, cfg.snap_tol);
    const Vec2 b = snap_to_grid(seg.b, mesh, cfg.snap_tol);
    const double len = (b - a).norm();
    if (len == 0.0) continue;
    std::vector<double> ts{0.0, 1.0};
    for (const auto* m : {&mesh, extra}) {
      if (!m) continue;
      add_line_params(a.x(), b.x(), m->origin().x(), m->h1(), m->n1(), ts);
      add_line_params(a.y(), b.y(), m->origin().y(), m->h2(), m->n2(), ts);
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end(), [](double x, double y) { return std::abs(x - y) < 1e-14; }), ts.end());
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
      const double t0 = ts[k], t1 = ts[k + 1];
      const double plen = (t1 - t0) * len;
      if (plen <= 1e-14 * hmin) continue;
      const Vec2 mid = a + 0.5 * (t0 + t1) * (b - a);
      if (!bounds.contains(mid, 1e-12 * hmin)) continue;
      const Vec2 probe = mid - 1e-7 * hmin * seg.normal;
      int e = mesh.locate(probe);
      if (e < 0 || !cfg.active[e]) {
        // Sliver on the fluid side classified outside; fall back to an active neighbour.
        e = -1;
        for (int cand : {mesh.locate(mid), mesh.locate(mid + 1e-7 * hmin * seg.normal)})
          if (cand >= 0 && cfg.active[cand]) e = cand;
        if (e < 0) continue;
      }
      SurfacePiece piece;
      piece.element = e;
      piece.segment = si;
      piece.rule.normal = seg.normal;
      for (std::size_t q = 0; q < gx.size(); ++q) {
        const double t = t0 + gx[q] * (t1 - t0);
        piece.rule.points.push_back(a + t * (b - a));
        piece.rule.weights.push_back(gw[q] * plen);
        piece.s.push_back(t);
      }
      out.push_back(std::move(piece));
    }
  }
  return out;
}

QuadratureRule element_volume_rule(const CutConfiguration& cfg, int e) {
  switch (cfg.element_class[e]) {
    case ElementClass::InsideFluid: {
      const Vec2 lo = cfg.mesh.element_lower_left(e);
      return rectangle_rule(lo, lo + cfg.mesh.h(), 3);
    }
    case ElementClass::Cut: return cfg.volume_rules[e];
    case ElementClass::Outside: return {};
  }
  return {};
}

}  // namespace fsi2d
