#include "proxlearn/admm.hpp"

#include <cmath>

#include "proxlearn/signal_model.hpp"

namespace proxlearn {

ScaledShrinkage::ScaledShrinkage(ShrinkageSpline base, double lambda,
                                 double root_tol)
    : base_(std::move(base)), lambda_(lambda), root_tol_(root_tol) {
  if (lambda_ < 0.0)
    throw std::invalid_argument("ScaledShrinkage: lambda must be >= 0");
  if (!(root_tol_ > 0.0))
    throw std::invalid_argument("ScaledShrinkage: root_tol must be > 0");
  const FirmReport rep = check_firmly_nonexpansive(base_, 4096);
  if (!rep.ok)
    throw std::invalid_argument(
        "ScaledShrinkage: base spline is not firmly nonexpansive");
}

double ScaledShrinkage::value(double y) const {
  return scale_operator(base_, lambda_, y, root_tol_);
}

double ScaledShrinkage::slope(double y) const {
  if (lambda_ == 0.0) return 1.0;
  const double v = lambda_ == 1.0 ? y : scale_preimage(base_, lambda_, y, root_tol_);
  const double tp = base_.deriv(v);
  return tp / (lambda_ + (1.0 - lambda_) * tp);
}

AdmmTrace admm_run(std::span<const double> y, const Shrinkage& shrink,
                   const AdmmConfig& config, const TridiagFactorization& fact) {
  const std::size_t n = y.size();
  if (n == 0) throw std::invalid_argument("admm_run: empty input");
  if (fact.size() != n)
    throw std::invalid_argument("admm_run: factorization size mismatch");
  if (fact.mu() != config.mu)
    throw std::invalid_argument("admm_run: factorization mu mismatch");
  if (config.iterations < 1)
    throw std::invalid_argument("admm_run: iterations must be >= 1");
  if (!(config.mu > 0.0)) throw std::invalid_argument("admm_run: mu must be > 0");

  const double mu = config.mu;
  std::vector<double> u(n, 0.0), alpha(n, 0.0), x(n), lx(n), v(n), work(n);

  AdmmTrace trace;
  if (config.record_trace) trace.v_per_iter.reserve(config.iterations);
  if (config.record_iterates) trace.x_per_iter.reserve(config.iterations);

  for (int k = 0; k < config.iterations; ++k) {
    for (std::size_t i = 0; i < n; ++i) work[i] = mu * u[i] + alpha[i];
    apply_Lt_into(work, x);
    for (std::size_t i = 0; i < n; ++i) x[i] += y[i];
    fact.solve_inplace(x);
    apply_L_into(x, lx);
    for (std::size_t i = 0; i < n; ++i) {
      alpha[i] -= mu * (lx[i] - u[i]);
      v[i] = lx[i] - alpha[i] / mu;
      u[i] = shrink.value(v[i]);
    }
    if (config.record_trace) trace.v_per_iter.push_back(v);
    if (config.record_iterates) trace.x_per_iter.push_back(x);
  }
  trace.x_final = std::move(x);
  return trace;
}

double cost_eval(std::span<const double> x, std::span<const double> y,
                 const PenaltyCurve& penalty) {
  if (x.size() != y.size())
    throw std::invalid_argument("cost_eval: size mismatch");
  double quad = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = y[i] - x[i];
    quad += d * d;
  }
  double reg = 0.0;
  const std::vector<double> lx = apply_L(x);
  for (const double u : lx) reg += penalty_value(penalty, u);
  return 0.5 * quad + reg;
}

}  // namespace proxlearn
