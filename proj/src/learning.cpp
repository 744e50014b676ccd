#include "proxlearn/learning.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "proxlearn/parallel.hpp"

namespace proxlearn {

GradientResult backprop_gradient(const ShrinkageSpline& spline,
                                 std::span<const double> x_clean,
                                 std::span<const double> y,
                                 const AdmmConfig& admm,
                                 const TridiagFactorization& fact) {
  const std::size_t n = y.size();
  if (x_clean.size() != n)
    throw std::invalid_argument("backprop_gradient: signal size mismatch");

  AdmmConfig cfg = admm;
  cfg.record_trace = true;
  cfg.record_iterates = false;
  const SplineShrinkage shrink(spline);
  const AdmmTrace trace = admm_run(y, shrink, cfg, fact);

  GradientResult result;
  result.grad.assign(static_cast<std::size_t>(spline.coeff_count()), 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = trace.x_final[i] - x_clean[i];
    loss += d * d;
  }
  result.loss = 0.5 * loss;
  if (cfg.iterations < 2) {
    result.has_gradient = false;
    return result;
  }

  const double mu = cfg.mu;
  // r = A (x^{(K)} - x), A = L (I + mu L^T L)^{-1}
  std::vector<double> r(n), work(n), s(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = trace.x_final[i] - x_clean[i];
  fact.solve_inplace(r);
  apply_L_into(r, work);
  r.swap(work);

  for (int k = cfg.iterations - 1; k >= 1; --k) {
    const std::vector<double>& v = trace.v_per_iter[static_cast<std::size_t>(k - 1)];
    // g += mu * Psi^{(k)} r
    for (std::size_t j = 0; j < n; ++j)
      spline.add_scaled_basis(v[j], mu * r[j], result.grad);
    // r <- B^{(k)} r = (r - w) - mu A L^T (r - 2w), w = D^{(k)} r
    for (std::size_t j = 0; j < n; ++j) {
      const double w = spline.deriv(v[j]) * r[j];
      work[j] = r[j] - 2.0 * w;
      r[j] -= w;
    }
    apply_Lt_into(work, s);
    fact.solve_inplace(s);
    apply_L_into(s, work);
    for (std::size_t j = 0; j < n; ++j) r[j] -= mu * work[j];
  }
  return result;
}

GradientResult batch_gradient(const ShrinkageSpline& spline,
                              const SignalBatch& batch, const AdmmConfig& admm,
                              const TridiagFactorization& fact, int threads) {
  const std::size_t count = batch.count();
  if (count == 0) throw std::invalid_argument("batch_gradient: empty batch");

  std::vector<GradientResult> partial(count);
  parallel_for(count, threads, [&](std::size_t s) {
    partial[s] = backprop_gradient(spline, batch.clean[s], batch.noisy[s],
                                   admm, fact);
  });

  GradientResult total;
  total.grad.assign(static_cast<std::size_t>(spline.coeff_count()), 0.0);
  total.has_gradient = partial.front().has_gradient;
  for (const GradientResult& g : partial) {
    total.loss += g.loss;
    for (std::size_t i = 0; i < total.grad.size(); ++i)
      total.grad[i] += g.grad[i];
  }
  return total;
}

namespace {

// Slab constraints lo <= c[b] - c[a] <= hi with a = -1 standing for the
// implicit fixed c_0 = 0 in antisymmetric mode.
struct Slab {
  int a = -1, b = 0;
};

std::vector<Slab> slabs_for(const ConstraintSet& S) {
  std::vector<Slab> slabs;
  if (S.mode == SplineMode::Antisymmetric) {
    slabs.push_back({-1, 0});  // 0 <= c_1 - c_0 <= delta, c_0 = 0
    for (int m = 2; m <= S.m_half; ++m) slabs.push_back({m - 2, m - 1});
  } else {
    for (int m = 1; m <= 2 * S.m_half; ++m) slabs.push_back({m - 1, m});
  }
  return slabs;
}

}  // namespace

bool satisfies_constraints(std::span<const double> c, const ConstraintSet& S,
                           double tol) {
  for (const Slab& s : slabs_for(S)) {
    const double lo_val = s.a < 0 ? 0.0 : c[static_cast<std::size_t>(s.a)];
    const double inc = c[static_cast<std::size_t>(s.b)] - lo_val;
    if (inc < -tol || inc > S.delta + tol) return false;
  }
  return true;
}

std::vector<double> project_to_S(std::span<const double> z,
                                 const ConstraintSet& S, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("project_to_S: tol must be > 0");
  if (!(S.delta > 0.0) || S.m_half < 1)
    throw std::invalid_argument("project_to_S: invalid constraint set");
  const std::size_t dim =
      static_cast<std::size_t>(ShrinkageSpline::coeff_count_for(S.mode, S.m_half));
  if (z.size() != dim)
    throw std::invalid_argument("project_to_S: coefficient count mismatch");

  const std::vector<Slab> slabs = slabs_for(S);
  std::vector<double> c(z.begin(), z.end());
  // Dykstra corrections, supported on the two coordinates each slab touches.
  std::vector<double> pa(slabs.size(), 0.0), pb(slabs.size(), 0.0);

  constexpr int kMaxSweeps = 200000;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double change = 0.0;
    for (std::size_t m = 0; m < slabs.size(); ++m) {
      const Slab& s = slabs[m];
      const bool fixed_a = s.a < 0;
      const double xa = (fixed_a ? 0.0 : c[static_cast<std::size_t>(s.a)]) + pa[m];
      const double xb = c[static_cast<std::size_t>(s.b)] + pb[m];
      double na = xa, nb = xb;
      if (fixed_a) {
        // box projection on the single free coordinate
        nb = std::clamp(xb, 0.0, S.delta);
      } else {
        const double t = xb - xa;
        if (t < 0.0) {
          na = xa + 0.5 * t;
          nb = xb - 0.5 * t;
        } else if (t > S.delta) {
          na = xa + 0.5 * (t - S.delta);
          nb = xb - 0.5 * (t - S.delta);
        }
      }
      pa[m] = xa - na;
      pb[m] = xb - nb;
      if (!fixed_a) {
        change = std::max(change, std::abs(na - c[static_cast<std::size_t>(s.a)]));
        c[static_cast<std::size_t>(s.a)] = na;
      }
      change = std::max(change, std::abs(nb - c[static_cast<std::size_t>(s.b)]));
      c[static_cast<std::size_t>(s.b)] = nb;
    }
    if (change < tol && satisfies_constraints(c, S, tol)) return c;
  }
  throw std::runtime_error("project_to_S: Dykstra did not converge");
}

TrainResult train(const TrainConfig& config, const SignalBatch& batch) {
  if (batch.count() == 0) throw std::invalid_argument("train: empty batch");
  if (config.outer_iterations < 1)
    throw std::invalid_argument("train: outer_iterations must be >= 1");
  if (config.gamma < 0.0)
    throw std::invalid_argument("train: gamma must be >= 0");

  const auto t0 = std::chrono::steady_clock::now();

  const double sigma = std::sqrt(batch.noise_variance);
  const double delta = config.delta > 0.0 ? config.delta : 0.5 * sigma;
  const int m_half =
      config.m_half > 0
          ? config.m_half
          : knot_range_from_data(batch, delta, config.margin_knots);
  const SplineMode mode = config.mode == TrainMode::Constrained
                              ? SplineMode::Antisymmetric
                              : SplineMode::General;

  ShrinkageSpline spline =
      config.init == InitKind::Custom
          ? ShrinkageSpline(config.kernel_order, delta, m_half, mode,
                            config.init_coeffs)
          : identity_spline(config.kernel_order, delta, m_half, mode);

  const TridiagFactorization fact = factorize(batch.length(), config.admm.mu);
  const ConstraintSet S{delta, m_half, mode};

  TrainResult result{spline, {}, 0.0};
  result.loss_history.reserve(static_cast<std::size_t>(config.outer_iterations));
  double initial_loss = 0.0;

  for (int it = 0; it < config.outer_iterations; ++it) {
    const GradientResult g =
        batch_gradient(spline, batch, config.admm, fact, config.threads);
    result.loss_history.push_back(g.loss);
    if (it == 0) initial_loss = g.loss;
    if (g.loss > 1e6 * initial_loss && initial_loss > 0.0)
      throw std::runtime_error("train: diverged at iteration " +
                               std::to_string(it) + ", loss " +
                               std::to_string(g.loss));

    std::vector<double> c = spline.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= config.gamma * g.grad[i];
    if (config.mode == TrainMode::Constrained)
      c = project_to_S(c, S, config.projection_tol);
    spline = spline.with_coeffs(std::move(c));
    if (config.on_iteration) config.on_iteration(it, spline, g.loss);
  }

  result.spline = std::move(spline);
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

int knot_range_from_data(const SignalBatch& batch, double delta,
                         int margin_knots) {
  if (batch.count() == 0)
    throw std::invalid_argument("knot_range_from_data: empty batch");
  if (!(delta > 0.0))
    throw std::invalid_argument("knot_range_from_data: delta must be > 0");
  double max_abs = 0.0;
  for (const auto& y : batch.noisy) {
    const std::vector<double> u = apply_L(y);
    for (const double ui : u) max_abs = std::max(max_abs, std::abs(ui));
  }
  return static_cast<int>(std::ceil(max_abs / delta)) + margin_knots;
}

}  // namespace proxlearn
