#pragma once

#include "fsi2d/geometry.hpp"

#include <array>
#include <vector>

namespace fsi2d {

enum class Side { Left = 0, Right = 1, Bottom = 2, Top = 3 };

/// Interior facet between two elements of a structured mesh.
struct Facet {
  int e0 = -1;  ///< element on the left / below
  int e1 = -1;  ///< element on the right / above
  Vec2 a, b;
  Vec2 normal;  ///< unit normal pointing from e0 into e1
  double length = 0.0;
  bool vertical = false;
};

/// Axis-aligned uniform Q1 mesh of n1 x n2 rectangles.
class StructuredBackgroundMesh {
 public:
  StructuredBackgroundMesh() = default;
  StructuredBackgroundMesh(const Vec2& origin, double h1, double h2, int n1, int n2);

  static StructuredBackgroundMesh from_box(const Vec2& lo, const Vec2& hi, int n1, int n2);

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  double h1() const { return h1_; }
  double h2() const { return h2_; }
  Vec2 h() const { return {h1_, h2_}; }
  const Vec2& origin() const { return origin_; }
  double diameter() const;
  Box bounds() const;

  int num_nodes() const { return (n1_ + 1) * (n2_ + 1); }
  int num_elements() const { return n1_ * n2_; }

  int node_id(int i, int j) const { return j * (n1_ + 1) + i; }
  int element_id(int i, int j) const { return j * n1_ + i; }
  std::array<int, 2> node_ij(int node) const { return {node % (n1_ + 1), node / (n1_ + 1)}; }
  std::array<int, 2> element_ij(int e) const { return {e % n1_, e / n1_}; }

  Vec2 node(int node) const;
  /// Counterclockwise: lower-left, lower-right, upper-right, upper-left.
  std::array<int, 4> element_nodes(int e) const;
  Vec2 element_lower_left(int e) const;
  Vec2 element_center(int e) const;
  Polygon element_polygon(int e) const;

  /// Element containing x; points on shared edges go to the upper/right element,
  /// points outside the mesh return -1.
  int locate(const Vec2& x, double tol = 0.0) const;

  const std::vector<Facet>& interior_facets() const { return facets_; }
  /// Facet ids of element e (up to four).
  std::vector<int> element_facets(int e) const;
  /// Elements sharing node (up to four).
  std::vector<int> node_elements(int node) const;

  bool on_side(int node, Side side) const;

 private:
  void build_facets();

  Vec2 origin_ = Vec2::Zero();
  double h1_ = 1.0, h2_ = 1.0;
  int n1_ = 0, n2_ = 0;
  std::vector<Facet> facets_;
  std::vector<std::array<int, 4>> element_facets_;
};

/// Bilinear shape functions on an axis-aligned rectangle with lower-left corner x0.
struct RectQ1 {
  Vec2 x0;
  double h1, h2;

  std::array<double, 4> values(const Vec2& x) const;
  std::array<Vec2, 4> gradients(const Vec2& x) const;
  /// Mixed second derivative d2N/dxdy (the only non-zero second derivative).
  std::array<double, 4> mixed() const;
};

}  // namespace fsi2d
