#pragma once

#include <cmath>
#include <stdexcept>

namespace proxlearn {

// Centered B-spline kernels: beta^0 is the unit box, beta^n = beta^{n-1} * beta^0.
// Closed-form evaluation as divided differences of truncated powers,
//
//   beta^n(x) = 1/n! * sum_{k=0}^{n+1} (-1)^k C(n+1,k) (x + (n+1)/2 - k)_+^n .
//
// The order-0 box is right-continuous (1 on [-1/2, 1/2)) so the partition of
// unity holds pointwise, knots included. Orders n >= 1 are evaluated at |x|,
// which makes the even symmetry of the kernel bit-exact.

inline double kernel_support_radius(int order) { return 0.5 * (order + 1); }

namespace detail {

// t_+^p with the right-continuous step convention for p = 0.
inline double truncated_power(double t, int p) {
  if (p == 0) return t >= 0.0 ? 1.0 : 0.0;
  if (t <= 0.0) return 0.0;
  double r = t;
  for (int i = 1; i < p; ++i) r *= t;
  return r;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// sum_k (-1)^k C(n+1,k) (x + (n+1)/2 - k)_+^p
inline double truncated_power_sum(double x, int n, int p) {
  const double half = 0.5 * (n + 1);
  double acc = 0.0;
  double coeff = 1.0;  // (-1)^k C(n+1, k)
  for (int k = 0; k <= n + 1; ++k) {
    acc += coeff * truncated_power(x + half - k, p);
    coeff *= -static_cast<double>(n + 1 - k) / static_cast<double>(k + 1);
  }
  return acc;
}

}  // namespace detail

inline double kernel_eval(int order, double x) {
  if (order < 0) throw std::invalid_argument("kernel_eval: order must be >= 0");
  const double half = kernel_support_radius(order);
  if (x < -half || x > half) return 0.0;
  if (order >= 1) x = std::abs(x);
  return detail::truncated_power_sum(x, order, order) /
         detail::factorial(order);
}

// d/dx beta^n, right-continuous at the knots of orders 1 and 2. Equals the
// finite difference beta^{n-1}(x + 1/2) - beta^{n-1}(x - 1/2).
inline double kernel_deriv(int order, double x) {
  if (order < 1) throw std::invalid_argument("kernel_deriv: order must be >= 1");
  const double half = kernel_support_radius(order);
  if (x < -half || x > half) return 0.0;
  const double sign = x < 0.0 ? -1.0 : 1.0;  // odd function, bit-exact
  if (x < 0.0) x = -x;
  return sign * detail::truncated_power_sum(x, order, order - 1) /
         detail::factorial(order - 1);
}

}  // namespace proxlearn
