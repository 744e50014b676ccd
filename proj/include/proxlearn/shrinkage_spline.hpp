#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "proxlearn/bspline.hpp"

namespace proxlearn {

enum class SplineMode { General, Antisymmetric };

struct DenseMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> data;  // row-major

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
};

// Spline-parametrized 1-D shrinkage function
//
//   T(x) = sum_m c_m psi(x/Delta - m),  psi = B-spline kernel of given order.
//
// General mode stores independent coefficients for m = -M..M. Antisymmetric
// mode stores m = 1..M and extends with c_0 = 0, c_{-m} = -c_m, which forces
// T(-x) = -T(x) bit-exactly. Outside the knot range where the kernel basis is
// complete, |x| <= (M - (order+1)/2)*Delta, the function continues with its
// boundary value; the derivative there is 0 and basis rows are defined as 0.
class ShrinkageSpline {
 public:
  ShrinkageSpline(int kernel_order, double delta, int m_half, SplineMode mode,
                  std::vector<double> coeffs)
      : order_(kernel_order),
        delta_(delta),
        m_half_(m_half),
        mode_(mode),
        coeffs_(std::move(coeffs)) {
    if (order_ < 0) throw std::invalid_argument("ShrinkageSpline: order < 0");
    if (!(delta_ > 0.0)) throw std::invalid_argument("ShrinkageSpline: delta <= 0");
    if (m_half_ < 1) throw std::invalid_argument("ShrinkageSpline: m_half < 1");
    if (coeffs_.size() != static_cast<std::size_t>(coeff_count_for(mode_, m_half_)))
      throw std::invalid_argument("ShrinkageSpline: coefficient count mismatch");
    knot_limit_ = (m_half_ - kernel_support_radius(order_)) * delta_;
    if (!(knot_limit_ > 0.0))
      throw std::invalid_argument("ShrinkageSpline: m_half too small for order");
  }

  static int coeff_count_for(SplineMode mode, int m_half) {
    return mode == SplineMode::General ? 2 * m_half + 1 : m_half;
  }

  int kernel_order() const { return order_; }
  double delta() const { return delta_; }
  int m_half() const { return m_half_; }
  SplineMode mode() const { return mode_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  int coeff_count() const { return static_cast<int>(coeffs_.size()); }

  // Largest |x| at which the basis expansion is complete.
  double knot_limit() const { return knot_limit_; }

  // Coefficient of the full sequence, m in [-M, M]; 0 outside.
  double full_coeff(int m) const {
    if (mode_ == SplineMode::General) {
      if (m < -m_half_ || m > m_half_) return 0.0;
      return coeffs_[static_cast<std::size_t>(m + m_half_)];
    }
    if (m == 0 || m > m_half_ || m < -m_half_) return 0.0;
    return m > 0 ? coeffs_[static_cast<std::size_t>(m - 1)]
                 : -coeffs_[static_cast<std::size_t>(-m - 1)];
  }

  double eval(double x) const {
    if (mode_ == SplineMode::Antisymmetric) {
      if (x == 0.0) return 0.0;
      return x < 0.0 ? -eval_clamped(-x) : eval_clamped(x);
    }
    return eval_clamped(x);
  }

  double operator()(double x) const { return eval(x); }

  // Analytic derivative inside the knot range, 0 in the constant extension.
  double deriv(double x) const {
    if (mode_ == SplineMode::Antisymmetric && x < 0.0) x = -x;  // T' is even
    if (std::abs(x) > knot_limit_) return 0.0;
    const double t = x / delta_;
    const auto [m_lo, m_hi] = window(t);
    double acc = 0.0;
    for (int m = m_lo; m <= m_hi; ++m)
      acc += full_coeff(m) * kernel_deriv(order_, t - m);
    return acc / delta_;
  }

  // acc[i] += w * psi_i(x) for the mode-appropriate basis; no contribution
  // when x lies in the constant extension.
  void add_scaled_basis(double x, double w, std::span<double> acc) const {
    if (std::abs(x) > knot_limit_) return;
    const double t = x / delta_;
    const auto [m_lo, m_hi] = window(t);
    for (int m = m_lo; m <= m_hi; ++m) {
      const double b = kernel_eval(order_, t - m);
      if (b == 0.0) continue;
      if (mode_ == SplineMode::General) {
        if (m >= -m_half_ && m <= m_half_)
          acc[static_cast<std::size_t>(m + m_half_)] += w * b;
      } else if (m >= 1 && m <= m_half_) {
        acc[static_cast<std::size_t>(m - 1)] += w * b;
      } else if (m <= -1 && m >= -m_half_) {
        acc[static_cast<std::size_t>(-m - 1)] -= w * b;
      }
    }
  }

  ShrinkageSpline with_coeffs(std::vector<double> c) const {
    return ShrinkageSpline(order_, delta_, m_half_, mode_, std::move(c));
  }

 private:
  std::pair<int, int> window(double t) const {
    const double rad = kernel_support_radius(order_);
    return {static_cast<int>(std::ceil(t - rad)) - 1,
            static_cast<int>(std::floor(t + rad)) + 1};
  }

  double eval_clamped(double x) const {
    if (x > knot_limit_)
      x = knot_limit_;
    else if (x < -knot_limit_)
      x = -knot_limit_;
    const double t = x / delta_;
    const auto [m_lo, m_hi] = window(t);
    double acc = 0.0;
    for (int m = m_lo; m <= m_hi; ++m)
      acc += full_coeff(m) * kernel_eval(order_, t - m);
    return acc;
  }

  int order_;
  double delta_;
  int m_half_;
  SplineMode mode_;
  std::vector<double> coeffs_;
  double knot_limit_ = 0.0;
};

// Numerically recovered convex penalty, sampled on a strictly increasing grid.
struct PenaltyCurve {
  std::vector<double> u_grid;
  std::vector<double> phi_values;
  std::vector<double> phi_prime_values;
};

struct FirmReport {
  bool ok = false;
  double min_slope = 0.0, max_slope = 0.0;
  double min_increment = 0.0, max_increment = 0.0;
};

// Coefficient-increment test 0 <= c_m - c_{m-1} <= Delta on the full sequence
// plus a dense sampling of T' against [0, 1]; tolerance 1e-9 on both.
FirmReport check_firmly_nonexpansive(const ShrinkageSpline& T,
                                     std::size_t grid_points);

// T_lambda(y) for T_lambda = (lambda*T^{-1} + (1-lambda)*id)^{-1}, computed by
// solving lambda*v + (1-lambda)*T(v) = y and returning T(v). Requires a firmly
// nonexpansive T so that the scalar equation is strictly increasing.
double scale_operator(const ShrinkageSpline& T, double lambda, double y,
                      double root_tol = 1e-10);

// The preimage v solving lambda*v + (1-lambda)*T(v) = y (lambda > 0).
double scale_preimage(const ShrinkageSpline& T, double lambda, double y,
                      double root_tol = 1e-10);

// Penalty whose proximal map is T: parametric samples u = T(v),
// phi'(u) = v - u, integrated by the trapezoidal rule along the (u, phi')
// curve and anchored to 0 at the grid point nearest u = 0. Runs of duplicate u
// (flat regions of T) collapse to one sample; the integration uses the
// subgradient interval endpoints of each run and the exported phi_prime is the
// interval midpoint.
PenaltyCurve recover_penalty(const ShrinkageSpline& T,
                             std::span<const double> v_grid);

// Piecewise-linear interpolation of the penalty samples, extended linearly
// beyond the grid with the boundary phi_prime slopes.
double penalty_value(const PenaltyCurve& penalty, double u);

// Matrix with entry (i, j) = psi_i(v_j); columns for v_j in the constant
// extension are zero. Each column has at most order+1 nonzeros in general
// mode.
DenseMatrix basis_matrix(const ShrinkageSpline& T, std::span<const double> v);

// c_m = m*Delta, so that T(x) = x on the knot range (kernel order >= 1).
ShrinkageSpline identity_spline(int kernel_order, double delta, int m_half,
                                SplineMode mode);

// c_m = soft-threshold(m*Delta, tau); increments lie in {0, Delta} by
// construction, so the result is firmly nonexpansive.
ShrinkageSpline soft_threshold_spline(int kernel_order, double delta,
                                      int m_half, double tau, SplineMode mode);

}  // namespace proxlearn
