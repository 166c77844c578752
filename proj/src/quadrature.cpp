#include "fsi2d/quadrature.hpp"

#include <cmath>
#include <numeric>

namespace fsi2d {

double QuadratureRule::weight_sum() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

void QuadratureRule::append(const QuadratureRule& other) {
  points.insert(points.end(), other.points.begin(), other.points.end());
  weights.insert(weights.end(), other.weights.begin(), other.weights.end());
}

void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.clear();
  w.clear();
  switch (n) {
    case 1:
      x = {0.0};
      w = {2.0};
      break;
    case 2: {
      const double a = 1.0 / std::sqrt(3.0);
      x = {-a, a};
      w = {1.0, 1.0};
      break;
    }
    case 3: {
      const double a = std::sqrt(0.6);
      x = {-a, 0.0, a};
      w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
      break;
    }
    case 4: {
      const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
      const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
      x = {-b, -a, a, b};
      w = {wb, wa, wa, wb};
      break;
    }
    default:
      throw std::invalid_argument("gauss_legendre_01: supported orders are 1..4");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = 0.5 * (x[i] + 1.0);
    w[i] *= 0.5;
  }
}

QuadratureRule triangle_rule(const Triangle& t) {
  static const double s15 = std::sqrt(15.0);
  static const double a1 = (6.0 - s15) / 21.0, b1 = (9.0 + 2.0 * s15) / 21.0;
  static const double a2 = (6.0 + s15) / 21.0, b2 = (9.0 - 2.0 * s15) / 21.0;
  static const double w0 = 9.0 / 40.0;
  static const double w1 = (155.0 - s15) / 1200.0;
  static const double w2 = (155.0 + s15) / 1200.0;
  static const double bary[7][3] = {{1.0 / 3, 1.0 / 3, 1.0 / 3}, {a1, a1, b1}, {a1, b1, a1},
                                    {b1, a1, a1},                {a2, a2, b2}, {a2, b2, a2},
                                    {b2, a2, a2}};
  static const double wts[7] = {w0, w1, w1, w1, w2, w2, w2};
  const double area = t.area();
  QuadratureRule r;
  r.points.reserve(7);
  r.weights.reserve(7);
  for (int k = 0; k < 7; ++k) {
    r.points.push_back(bary[k][0] * t.a + bary[k][1] * t.b + bary[k][2] * t.c);
    r.weights.push_back(wts[k] * area);
  }
  return r;
}

QuadratureRule rectangle_rule(const Vec2& lo, const Vec2& hi, int n) {
  std::vector<double> x, w;
  gauss_legendre_01(n, x, w);
  const Vec2 d = hi - lo;
  QuadratureRule r;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      r.points.emplace_back(lo.x() + x[i] * d.x(), lo.y() + x[j] * d.y());
      r.weights.push_back(w[i] * w[j] * d.x() * d.y());
    }
  return r;
}

QuadratureRule volume_quadrature(const Polygon& poly) {
  QuadratureRule r;
  for (const auto& t : triangulate(poly)) r.append(triangle_rule(t));
  return r;
}

QuadratureRule segment_rule(const Vec2& a, const Vec2& b, int n) {
  std::vector<double> x, w;
  gauss_legendre_01(n, x, w);
  const double len = (b - a).norm();
  QuadratureRule r;
  for (int i = 0; i < n; ++i) {
    r.points.push_back(a + x[i] * (b - a));
    r.weights.push_back(w[i] * len);
  }
  if (len > 0.0) {
    const Vec2 t = (b - a) / len;
    r.normal = Vec2(t.y(), -t.x());
  }
  return r;
}

}  // namespace fsi2d
