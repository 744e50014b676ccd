#include "proxlearn/shrinkage_spline.hpp"

#include <algorithm>
#include <limits>

namespace proxlearn {

FirmReport check_firmly_nonexpansive(const ShrinkageSpline& T,
                                     std::size_t grid_points) {
  if (grid_points < 2)
    throw std::invalid_argument("check_firmly_nonexpansive: grid_points < 2");
  constexpr double tol = 1e-9;
  FirmReport rep;

  rep.min_increment = std::numeric_limits<double>::infinity();
  rep.max_increment = -rep.min_increment;
  for (int m = -T.m_half() + 1; m <= T.m_half(); ++m) {
    const double inc = T.full_coeff(m) - T.full_coeff(m - 1);
    rep.min_increment = std::min(rep.min_increment, inc);
    rep.max_increment = std::max(rep.max_increment, inc);
  }

  rep.min_slope = std::numeric_limits<double>::infinity();
  rep.max_slope = -rep.min_slope;
  const double limit = T.knot_limit();
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double x =
        -limit + 2.0 * limit * static_cast<double>(i) / (grid_points - 1);
    const double s = T.deriv(x);
    rep.min_slope = std::min(rep.min_slope, s);
    rep.max_slope = std::max(rep.max_slope, s);
  }

  rep.ok = rep.min_increment >= -tol && rep.max_increment <= T.delta() + tol &&
           rep.min_slope >= -tol && rep.max_slope <= 1.0 + tol;
  return rep;
}

double scale_preimage(const ShrinkageSpline& T, double lambda, double y,
                      double root_tol) {
  if (lambda < 0.0)
    throw std::invalid_argument("scale_operator: lambda must be >= 0");
  if (!(root_tol > 0.0))
    throw std::invalid_argument("scale_operator: root_tol must be > 0");
  const auto h = [&](double v) { return lambda * v + (1.0 - lambda) * T.eval(v); };

  // h is continuous, strictly increasing with slope in [min(1,lambda),
  // max(1,lambda)] for firmly nonexpansive T; bracket [lo, hi] around y.
  double lo = y, hi = y;
  double step = std::max(1.0, std::abs(y));
  int expansions = 0;
  while (h(lo) > y) {
    lo -= step;
    step *= 2.0;
    if (++expansions > 200)
      throw std::runtime_error("scale_operator: bracket expansion failed");
  }
  step = std::max(1.0, std::abs(y));
  while (h(hi) < y) {
    hi += step;
    step *= 2.0;
    if (++expansions > 200)
      throw std::runtime_error("scale_operator: bracket expansion failed");
  }
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 2000; ++it) {
    mid = 0.5 * (lo + hi);
    const double hm = h(mid);
    if (std::abs(hm - y) <= root_tol) return mid;
    if (hm < y)
      lo = mid;
    else
      hi = mid;
  }
  return mid;
}

double scale_operator(const ShrinkageSpline& T, double lambda, double y,
                      double root_tol) {
  if (lambda < 0.0)
    throw std::invalid_argument("scale_operator: lambda must be >= 0");
  if (lambda == 0.0) return y;        // T_0 = id
  if (lambda == 1.0) return T.eval(y);  // T_1 = T
  return T.eval(scale_preimage(T, lambda, y, root_tol));
}

PenaltyCurve recover_penalty(const ShrinkageSpline& T,
                             std::span<const double> v_grid) {
  if (v_grid.size() < 2)
    throw std::invalid_argument("recover_penalty: v_grid needs >= 2 points");
  for (std::size_t i = 1; i < v_grid.size(); ++i)
    if (!(v_grid[i] > v_grid[i - 1]))
      throw std::invalid_argument("recover_penalty: v_grid must increase");

  // Parametric samples, with runs of equal u collapsed. phi' over a run spans
  // the subgradient interval [first, last]. Exact equality is the collapse
  // test: flat regions of a spline evaluate bit-identically, and it keeps the
  // collapse mirror-symmetric for antisymmetric T on a symmetric grid. u
  // values below the running maximum (possible only through rounding on a
  // nonexpansive T) merge into the current run as well.
  std::vector<double> u, p_left, p_right;
  u.reserve(v_grid.size());
  for (const double v : v_grid) {
    const double uv = T.eval(v);
    const double p = v - uv;
    if (!u.empty() && uv <= u.back()) {
      p_right.back() = p;
      continue;
    }
    u.push_back(uv);
    p_left.push_back(p);
    p_right.push_back(p);
  }

  PenaltyCurve out;
  const std::size_t n = u.size();
  out.u_grid = std::move(u);
  out.phi_values.resize(n, 0.0);
  out.phi_prime_values.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.phi_prime_values[i] = 0.5 * (p_left[i] + p_right[i]);
  for (std::size_t i = 1; i < n; ++i) {
    const double du = out.u_grid[i] - out.u_grid[i - 1];
    out.phi_values[i] = out.phi_values[i - 1] +
                        0.5 * (p_right[i - 1] + p_left[i]) * du;
  }

  // Anchor phi = 0 at the grid point nearest u = 0.
  std::size_t anchor = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(out.u_grid[i]) < std::abs(out.u_grid[anchor])) anchor = i;
  const double base = out.phi_values[anchor];
  for (double& phi : out.phi_values) phi -= base;
  return out;
}

double penalty_value(const PenaltyCurve& penalty, double u) {
  const auto& g = penalty.u_grid;
  if (g.empty()) throw std::invalid_argument("penalty_value: empty curve");
  if (g.size() == 1)
    return penalty.phi_values[0] +
           penalty.phi_prime_values[0] * (u - g[0]);
  if (u <= g.front())
    return penalty.phi_values.front() +
           penalty.phi_prime_values.front() * (u - g.front());
  if (u >= g.back())
    return penalty.phi_values.back() +
           penalty.phi_prime_values.back() * (u - g.back());
  const auto it = std::upper_bound(g.begin(), g.end(), u);
  const std::size_t j = static_cast<std::size_t>(it - g.begin());
  const double t = (u - g[j - 1]) / (g[j] - g[j - 1]);
  return (1.0 - t) * penalty.phi_values[j - 1] + t * penalty.phi_values[j];
}

DenseMatrix basis_matrix(const ShrinkageSpline& T, std::span<const double> v) {
  DenseMatrix psi(static_cast<std::size_t>(T.coeff_count()), v.size());
  std::vector<double> col(psi.rows);
  for (std::size_t j = 0; j < v.size(); ++j) {
    std::fill(col.begin(), col.end(), 0.0);
    T.add_scaled_basis(v[j], 1.0, col);
    for (std::size_t i = 0; i < psi.rows; ++i) psi.at(i, j) = col[i];
  }
  return psi;
}

ShrinkageSpline identity_spline(int kernel_order, double delta, int m_half,
                                SplineMode mode) {
  std::vector<double> c;
  if (mode == SplineMode::General) {
    c.resize(static_cast<std::size_t>(2 * m_half + 1));
    for (int m = -m_half; m <= m_half; ++m)
      c[static_cast<std::size_t>(m + m_half)] = m * delta;
  } else {
    c.resize(static_cast<std::size_t>(m_half));
    for (int m = 1; m <= m_half; ++m)
      c[static_cast<std::size_t>(m - 1)] = m * delta;
  }
  return ShrinkageSpline(kernel_order, delta, m_half, mode, std::move(c));
}

ShrinkageSpline soft_threshold_spline(int kernel_order, double delta,
                                      int m_half, double tau, SplineMode mode) {
  if (!(tau >= 0.0))
    throw std::invalid_argument("soft_threshold_spline: tau must be >= 0");
  const auto st = [tau](double x) {
    const double a = std::abs(x) - tau;
    return a > 0.0 ? (x < 0.0 ? -a : a) : 0.0;
  };
  std::vector<double> c;
  if (mode == SplineMode::General) {
    c.resize(static_cast<std::size_t>(2 * m_half + 1));
    for (int m = -m_half; m <= m_half; ++m)
      c[static_cast<std::size_t>(m + m_half)] = st(m * delta);
  } else {
    c.resize(static_cast<std::size_t>(m_half));
    for (int m = 1; m <= m_half; ++m)
      c[static_cast<std::size_t>(m - 1)] = st(m * delta);
  }
  return ShrinkageSpline(kernel_order, delta, m_half, mode, std::move(c));
}

}  // namespace proxlearn
