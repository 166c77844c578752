#include "fsi2d/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fsi2d {

double signed_area(const Polygon& poly) {
  const std::size_t n = poly.size();
  double a = 0.0;
  for (std::size_t i = 0; i < n; ++i) a += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * a;
}

Vec2 polygon_centroid(const Polygon& poly) {
  const std::size_t n = poly.size();
  const double area = signed_area(poly);
  if (std::abs(area) < std::numeric_limits<double>::min()) {
    Vec2 c = Vec2::Zero();
    for (const auto& p : poly) c += p;
    return c / static_cast<double>(std::max<std::size_t>(n, 1));
  }
  Vec2 c = Vec2::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    c += (p + q) * cross(p, q);
  }
  return c / (6.0 * area);
}

double distance_to_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

bool point_in_polygon(const Vec2& p, const Polygon& poly) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

namespace {

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double v = cross(b - a, c - a);
  const double scale = (b - a).norm() * (c - a).norm();
  if (std::abs(v) <= 1e-14 * scale) return 0;
  return v > 0 ? 1 : -1;
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

bool point_in_triangle(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
  return cross(b - a, p - a) >= 0.0 && cross(c - b, p - b) >= 0.0 && cross(a - c, p - c) >= 0.0;
}

}  // namespace

bool is_self_intersecting(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 4) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the closing edge
      const Vec2& c = poly[j];
      const Vec2& d = poly[(j + 1) % n];
      if (segments_intersect(a, b, c, d)) return true;
    }
  }
  return false;
}

std::vector<Triangle> ear_clip(const Polygon& poly) {
  std::vector<Triangle> out;
  std::vector<int> idx(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) idx[i] = static_cast<int>(i);

  std::size_t guard = 0;
  while (idx.size() > 3 && guard < 4 * poly.size() * poly.size()) {
    ++guard;
    bool clipped = false;
    const std::size_t m = idx.size();
    for (std::size_t k = 0; k < m; ++k) {
      const Vec2& a = poly[idx[(k + m - 1) % m]];
      const Vec2& b = poly[idx[k]];
      const Vec2& c = poly[idx[(k + 1) % m]];
      if (cross(b - a, c - b) <= 0.0) continue;  // reflex or degenerate
      bool contains_other = false;
      for (std::size_t r = 0; r < m && !contains_other; ++r) {
        if (r == k || r == (k + 1) % m || r == (k + m - 1) % m) continue;
        const Vec2& p = poly[idx[r]];
        if (p == a || p == b || p == c) continue;
        contains_other = point_in_triangle(p, a, b, c);
      }
      if (contains_other) continue;
      out.push_back({a, b, c});
      idx.erase(idx.begin() + static_cast<long>(k));
      clipped = true;
      break;
    }
    if (!clipped) {
      // Only degenerate (collinear) vertices remain; drop one.
      for (std::size_t k = 0; k < m; ++k) {
        const Vec2& a = poly[idx[(k + m - 1) % m]];
        const Vec2& b = poly[idx[k]];
        const Vec2& c = poly[idx[(k + 1) % m]];
        if (std::abs(cross(b - a, c - b)) <= 1e-14 * ((b - a).squaredNorm() + (c - b).squaredNorm())) {
          idx.erase(idx.begin() + static_cast<long>(k));
          clipped = true;
          break;
        }
      }
      if (!clipped) throw GeometryError("ear clipping failed: polygon is not simple");
    }
  }
  if (idx.size() == 3) {
    Triangle t{poly[idx[0]], poly[idx[1]], poly[idx[2]]};
    if (t.area() > 0.0) out.push_back(t);
  }
  return out;
}

std::vector<Triangle> triangulate(const Polygon& poly) {
  if (poly.size() < 3) return {};
  Vec2 c = Vec2::Zero();
  for (const auto& p : poly) c += p;
  c /= static_cast<double>(poly.size());
  std::vector<Triangle> fan;
  fan.reserve(poly.size());
  const double total = signed_area(poly);
  bool ok = true;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    Triangle t{c, poly[i], poly[(i + 1) % poly.size()]};
    const double a = t.area();
    if (a < -1e-14 * std::abs(total)) {
      ok = false;
      break;
    }
    if (a > 0.0) fan.push_back(t);
  }
  if (ok) return fan;
  return ear_clip(poly);
}

Box bounding_box(const Polygon& poly) {
  Box b{Vec2::Constant(std::numeric_limits<double>::infinity()),
        Vec2::Constant(-std::numeric_limits<double>::infinity())};
  for (const auto& p : poly) {
    b.lo = b.lo.cwiseMin(p);
    b.hi = b.hi.cwiseMax(p);
  }
  return b;
}

}  // namespace fsi2d
