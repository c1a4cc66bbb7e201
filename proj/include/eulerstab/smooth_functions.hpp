#pragma once

#include <cmath>

#include "eulerstab/dual.hpp"

namespace eulerstab {

/// |x| regularized from above: sqrt(x^2 + eps_h) >= |x|.
template <class T>
T smooth_abs_up(const T& x, double eps_h) {
  using std::abs;
  using std::sqrt;
  if (eps_h == 0.0) return abs(x);
  return sqrt(x * x + eps_h);
}

/// |x| regularized from below: x^2 / sqrt(x^2 + eps_h) <= |x|.
template <class T>
T smooth_abs_down(const T& x, double eps_h) {
  using std::abs;
  using std::sqrt;
  if (eps_h == 0.0) return abs(x);
  if (value_of(x) == 0.0) return T(0.0) * x;
  return x * x / sqrt(x * x + eps_h);
}

/// Smooth maximum |x - y|_up / 2 + (x + y) / 2. Reduces to max(x, y) for
/// sigma_h = 0 and overshoots by at most sqrt(sigma_h) / 2.
template <class T>
T smooth_max(const T& x, const T& y, double sigma_h) {
  if (sigma_h == 0.0) return value_of(x) < value_of(y) ? y : x;
  return 0.5 * smooth_abs_up(T(x - y), sigma_h) + 0.5 * (x + y);
}

template <class T>
T hard_max(const T& x, const T& y) {
  return value_of(x) < value_of(y) ? y : x;
}

/// Twice-differentiable limiter to one: 2x^4 - 5x^3 + 3x^2 + x below one,
/// identically one above. Z'(1) = Z''(1) = 0.
template <class T>
T limiter_z(const T& x) {
  if (value_of(x) >= 1.0) return T(1.0);
  const T x2 = x * x;
  return 2.0 * x2 * x2 - 5.0 * x2 * x + 3.0 * x2 + x;
}

}  // namespace eulerstab
