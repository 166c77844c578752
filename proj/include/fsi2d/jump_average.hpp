#pragma once

#include <cmath>
#include <stdexcept>
#include <type_traits>

namespace fsi2d {

/// Interface weights w_i + w_j = 1 with both in [0, 1].
struct AverageWeights {
  double wi = 0.5;
  double wj = 0.5;

  AverageWeights() = default;
  AverageWeights(double w_i, double w_j) : wi(w_i), wj(w_j) {
    if (w_i < 0.0 || w_j < 0.0 || w_i > 1.0 || w_j > 1.0 || std::abs(w_i + w_j - 1.0) > 1e-14)
      throw std::invalid_argument("average weights must lie in [0,1] and sum to one");
  }
};

/// Works for scalars and for Eigen vectors/matrices alike.
template <class T>
auto jump(const T& fi, const T& fj) {
  if constexpr (std::is_arithmetic_v<T>) {
    return fi - fj;
  } else {
    return (fi - fj).eval();
  }
}

template <class T>
auto weighted_average(const T& fi, const T& fj, const AverageWeights& w) {
  if constexpr (std::is_arithmetic_v<T>) {
    return w.wi * fi + w.wj * fj;
  } else {
    return (w.wi * fi + w.wj * fj).eval();
  }
}

/// Conjugate average with swapped weights.
template <class T>
auto conjugate_average(const T& fi, const T& fj, const AverageWeights& w) {
  if constexpr (std::is_arithmetic_v<T>) {
    return w.wj * fi + w.wi * fj;
  } else {
    return (w.wj * fi + w.wi * fj).eval();
  }
}

}  // namespace fsi2d
