#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace fsi2d {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Simple polygon, counterclockwise, without repeated closing vertex.
using Polygon = std::vector<Vec2>;

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double signed_area(const Polygon& poly);
Vec2 polygon_centroid(const Polygon& poly);
double distance_to_segment(const Vec2& p, const Vec2& a, const Vec2& b);

/// Even-odd test; points on the boundary may report either side.
bool point_in_polygon(const Vec2& p, const Polygon& poly);

/// True if any two non-adjacent edges intersect.
bool is_self_intersecting(const Polygon& poly);

struct Triangle {
  Vec2 a, b, c;
  double area() const { return 0.5 * cross(b - a, c - a); }
};

/// Fan triangulation from the vertex centroid; falls back to ear clipping when
/// the fan produces an inverted triangle. Input must be simple and CCW.
std::vector<Triangle> triangulate(const Polygon& poly);
std::vector<Triangle> ear_clip(const Polygon& poly);

struct Box {
  Vec2 lo, hi;
  bool overlaps(const Box& other) const {
    return lo.x() <= other.hi.x() && other.lo.x() <= hi.x() && lo.y() <= other.hi.y() &&
           other.lo.y() <= hi.y();
  }
  bool contains(const Vec2& p, double tol = 0.0) const {
    return p.x() >= lo.x() - tol && p.x() <= hi.x() + tol && p.y() >= lo.y() - tol &&
           p.y() <= hi.y() + tol;
  }
};

Box bounding_box(const Polygon& poly);

}  // namespace fsi2d
