#pragma once

#include "fsi2d/geometry.hpp"

#include <vector>

namespace fsi2d {

struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  Vec2 normal = Vec2::Zero();  ///< set for surface rules

  std::size_t size() const { return points.size(); }
  double weight_sum() const;
  void append(const QuadratureRule& other);
};

/// Gauss-Legendre points and weights on [0, 1].
void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w);

/// 7-point rule exact for degree 5 on a triangle.
QuadratureRule triangle_rule(const Triangle& t);

/// n x n Gauss rule on an axis-aligned rectangle.
QuadratureRule rectangle_rule(const Vec2& lo, const Vec2& hi, int n = 3);

/// Degree-5 rule on a simple CCW polygon via triangulation.
QuadratureRule volume_quadrature(const Polygon& poly);

/// n-point Gauss rule on segment [a, b]; weights carry the segment length.
QuadratureRule segment_rule(const Vec2& a, const Vec2& b, int n = 3);

}  // namespace fsi2d
