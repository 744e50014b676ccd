#pragma once

#include <memory>
#include <span>
#include <vector>

#include "proxlearn/shrinkage_spline.hpp"
#include "proxlearn/tridiag.hpp"

namespace proxlearn {

// 1-D shrinkage applied entrywise in the ADMM u-update.
class Shrinkage {
 public:
  virtual ~Shrinkage() = default;
  virtual double value(double x) const = 0;
  virtual double slope(double x) const = 0;
};

class IdentityShrinkage final : public Shrinkage {
 public:
  double value(double x) const override { return x; }
  double slope(double) const override { return 1.0; }
};

class SoftThreshold final : public Shrinkage {
 public:
  explicit SoftThreshold(double threshold) : threshold_(threshold) {
    if (threshold_ < 0.0)
      throw std::invalid_argument("SoftThreshold: threshold must be >= 0");
  }
  double threshold() const { return threshold_; }
  double value(double x) const override {
    const double a = std::abs(x) - threshold_;
    return a > 0.0 ? (x < 0.0 ? -a : a) : 0.0;
  }
  double slope(double x) const override {
    return std::abs(x) > threshold_ ? 1.0 : 0.0;
  }

 private:
  double threshold_;
};

class SplineShrinkage final : public Shrinkage {
 public:
  explicit SplineShrinkage(ShrinkageSpline spline) : spline_(std::move(spline)) {}
  const ShrinkageSpline& spline() const { return spline_; }
  double value(double x) const override { return spline_.eval(x); }
  double slope(double x) const override { return spline_.deriv(x); }

 private:
  ShrinkageSpline spline_;
};

// Pointwise evaluation of T_lambda = (lambda*T^{-1} + (1-lambda)*id)^{-1}.
// The base spline must be firmly nonexpansive (checked at construction).
class ScaledShrinkage final : public Shrinkage {
 public:
  ScaledShrinkage(ShrinkageSpline base, double lambda, double root_tol = 1e-10);
  const ShrinkageSpline& base() const { return base_; }
  double lambda() const { return lambda_; }
  double value(double y) const override;
  double slope(double y) const override;

 private:
  ShrinkageSpline base_;
  double lambda_;
  double root_tol_;
};

struct AdmmConfig {
  double mu = 2.0;
  int iterations = 10;         // K
  bool record_trace = false;   // store v^{(k)} per iteration
  bool record_iterates = false;  // store x^{(k)} per iteration
};

struct AdmmTrace {
  std::vector<double> x_final;
  std::vector<std::vector<double>> v_per_iter;
  std::vector<std::vector<double>> x_per_iter;
  std::vector<double> cost_per_iter;  // filled by callers that track cost
};

// Generalized ADMM with a pluggable shrinkage, starting from u = alpha = 0:
//   x      <- (I + mu L^T L)^{-1} (y + L^T(mu u + alpha))
//   alpha  <- alpha - mu (L x - u)
//   v      <- L x - alpha / mu
//   u      <- shrink(v) entrywise
// for exactly K iterations. The factorization must match y's length and mu.
AdmmTrace admm_run(std::span<const double> y, const Shrinkage& shrink,
                   const AdmmConfig& config, const TridiagFactorization& fact);

// 1/2 ||y - x||^2 + sum_i phi([Lx]_i) with phi interpolated on the curve.
double cost_eval(std::span<const double> x, std::span<const double> y,
                 const PenaltyCurve& penalty);

}  // namespace proxlearn
