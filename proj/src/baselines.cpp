#include "proxlearn/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "proxlearn/experiments.hpp"

namespace proxlearn {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;
}

GridSpec default_grid(std::span<const double> y, double sigma2,
                      std::size_t points) {
  if (y.empty()) throw std::invalid_argument("default_grid: empty signal");
  const auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
  const double sigma = std::sqrt(sigma2);
  const double margin = 5.0 * (sigma + std::sqrt(static_cast<double>(y.size())));
  return GridSpec{*lo_it - margin, *hi_it + margin, points};
}

IncrementDensity increment_density(const LevyModel& model) {
  IncrementDensity d;
  d.model = model;
  if (model.kind == LevyKind::CompoundPoisson) {
    if (!(model.poisson_rate > 0.0))
      throw std::invalid_argument("increment_density: lambda must be > 0");
    d.atom_at_zero = std::exp(-model.poisson_rate);
  }
  return d;
}

std::vector<double> lmmse_denoise(std::span<const double> y, double sigma2) {
  if (!(sigma2 > 0.0))
    throw std::invalid_argument("lmmse_denoise: sigma2 must be > 0");
  return factorize(y.size(), sigma2).solve(y);
}

std::vector<double> tv_denoise(std::span<const double> y, double lam,
                               const AdmmConfig& admm,
                               const TridiagFactorization& fact) {
  if (lam < 0.0) throw std::invalid_argument("tv_denoise: lam must be >= 0");
  const SoftThreshold shrink(lam / admm.mu);
  AdmmConfig cfg = admm;
  cfg.record_trace = false;
  cfg.record_iterates = false;
  return admm_run(y, shrink, cfg, fact).x_final;
}

TvOracleResult tv_oracle_lambda(std::span<const double> y,
                                std::span<const double> x_clean,
                                const AdmmConfig& admm,
                                const TridiagFactorization& fact) {
  constexpr double kLogLo = -3.0, kLogHi = 2.0;
  constexpr int kEvaluations = 40;
  if (x_clean.size() != y.size())
    throw std::invalid_argument("tv_oracle_lambda: size mismatch");

  // Maximizing the SNR improvement is minimizing the squared error; the
  // latter stays well defined even when x_clean == y.
  TvOracleResult best;
  double best_err = std::numeric_limits<double>::infinity();
  const auto evaluate = [&](double t) {
    const double lam = std::pow(10.0, t);
    std::vector<double> x_hat = tv_denoise(y, lam, admm, fact);
    double err = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double d = x_hat[i] - x_clean[i];
      err += d * d;
    }
    if (err < best_err) {
      best_err = err;
      best.lambda = lam;
      best.x_hat = std::move(x_hat);
    }
    return err;
  };

  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = kLogLo, b = kLogHi;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double fc = evaluate(c);
  double fd = evaluate(d);
  for (int i = 2; i < kEvaluations; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = evaluate(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = evaluate(d);
    }
  }

  double noise = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double dn = y[i] - x_clean[i];
    noise += dn * dn;
  }
  if (noise == 0.0)
    best.snr_db = std::numeric_limits<double>::quiet_NaN();  // undefined baseline
  else if (best_err == 0.0)
    best.snr_db = std::numeric_limits<double>::infinity();
  else
    best.snr_db = 10.0 * std::log10(noise / best_err);
  return best;
}

namespace {

struct Chain {
  std::size_t grid_size = 0;
  double h = 0.0;
  std::vector<double> xs;      // grid nodes; xs[zero_index] == 0 when covered
  std::size_t zero_index = 0;
  std::vector<double> taps;    // h * N(d*h; 0, 1), d = 0..radius
  double atom = 0.0;

  // out = (1 - atom) * (gauss (*) f) + atom * f
  void transition(const std::vector<double>& f, std::vector<double>& out) const {
    const std::ptrdiff_t g = static_cast<std::ptrdiff_t>(grid_size);
    const std::ptrdiff_t radius = static_cast<std::ptrdiff_t>(taps.size()) - 1;
    const double keep = atom;
    const double move = 1.0 - atom;
    for (std::ptrdiff_t j = 0; j < g; ++j) {
      double acc = taps[0] * f[static_cast<std::size_t>(j)];
      const std::ptrdiff_t d_max = std::min(radius, g - 1 - j);
      for (std::ptrdiff_t d = 1; d <= std::min(radius, j); ++d)
        acc += taps[static_cast<std::size_t>(d)] * f[static_cast<std::size_t>(j - d)];
      for (std::ptrdiff_t d = 1; d <= d_max; ++d)
        acc += taps[static_cast<std::size_t>(d)] * f[static_cast<std::size_t>(j + d)];
      out[static_cast<std::size_t>(j)] =
          move * acc + keep * f[static_cast<std::size_t>(j)];
    }
  }
};

Chain build_chain(const GridSpec& grid, const IncrementDensity& density) {
  if (grid.points < 16)
    throw std::invalid_argument("mmse_smoother: grid too coarse (G < 16)");
  if (!(grid.hi > grid.lo))
    throw std::invalid_argument("mmse_smoother: grid must have lo < hi");

  Chain chain;
  chain.grid_size = grid.points;
  chain.h = (grid.hi - grid.lo) / static_cast<double>(grid.points - 1);
  chain.atom = density.atom_at_zero;

  // Shift so that one node sits exactly at 0 when the range covers it; the
  // zero atom of the increment law then lives on a grid node.
  double shift = 0.0;
  std::size_t j0 = 0;
  if (grid.lo <= 0.0 && grid.hi >= 0.0) {
    j0 = static_cast<std::size_t>(std::lround(-grid.lo / chain.h));
    j0 = std::min(j0, grid.points - 1);
    shift = grid.lo + static_cast<double>(j0) * chain.h;
  } else {
    const double nearest = grid.lo > 0.0 ? grid.lo : grid.hi;
    j0 = grid.lo > 0.0 ? 0 : grid.points - 1;
    (void)nearest;
  }
  chain.zero_index = j0;
  chain.xs.resize(grid.points);
  for (std::size_t j = 0; j < grid.points; ++j)
    chain.xs[j] = grid.lo + static_cast<double>(j) * chain.h - shift;

  // Unit-variance Gaussian kernel truncated at 8 sigma (tail mass ~1e-15).
  const auto radius = static_cast<std::size_t>(std::ceil(8.0 / chain.h));
  chain.taps.resize(radius + 1);
  for (std::size_t d = 0; d <= radius; ++d) {
    const double t = static_cast<double>(d) * chain.h;
    chain.taps[d] = chain.h * kInvSqrt2Pi * std::exp(-0.5 * t * t);
  }
  return chain;
}

}  // namespace

std::vector<double> mmse_smoother(std::span<const double> y, double sigma2,
                                  const IncrementDensity& density,
                                  const GridSpec& grid, MmseDiagnostics* diag) {
  if (y.empty()) throw std::invalid_argument("mmse_smoother: empty signal");
  if (!(sigma2 > 0.0))
    throw std::invalid_argument("mmse_smoother: sigma2 must be > 0");

  const Chain chain = build_chain(grid, density);
  const std::size_t N = y.size();
  const std::size_t G = chain.grid_size;
  const double h = chain.h;
  const double inv2s2 = 0.5 / sigma2;
  const double em_norm = kInvSqrt2Pi / std::sqrt(sigma2);
  const double atom = chain.atom;
  const double move = 1.0 - atom;

  const auto emission = [&](std::size_t i, double x) {
    const double d = y[i] - x;
    return em_norm * std::exp(-d * d * inv2s2);
  };

  // Forward filtering with the zero atom tracked exactly. fwd[i] and
  // fwd_atom[i] hold p(x_i | y_{1..i}) up to the stored normalizers.
  std::vector<std::vector<double>> fwd(N, std::vector<double>(G));
  std::vector<double> fwd_atom(N, 0.0);
  double log_evidence = 0.0;

  std::vector<double> prior(G), work(G);
  for (std::size_t j = 0; j < G; ++j) {
    const double x = chain.xs[j];
    prior[j] = move * kInvSqrt2Pi * std::exp(-0.5 * x * x);
  }
  for (std::size_t j = 0; j < G; ++j) fwd[0][j] = prior[j] * emission(0, chain.xs[j]);
  fwd_atom[0] = atom * emission(0, 0.0);

  const auto normalize = [&](std::vector<double>& f, double& fa) {
    double z = fa;
    for (const double v : f) z += v * h;
    if (!(z > 0.0)) throw std::runtime_error("mmse_smoother: vanished message");
    const double inv = 1.0 / z;
    for (double& v : f) v *= inv;
    fa *= inv;
    log_evidence += std::log(z);
  };
  normalize(fwd[0], fwd_atom[0]);

  for (std::size_t i = 1; i < N; ++i) {
    // p_U (*) previous posterior: grid part plus the diffused atom at 0.
    chain.transition(fwd[i - 1], work);
    const double wa = fwd_atom[i - 1];
    for (std::size_t j = 0; j < G; ++j) {
      const double from_atom = wa * prior[j];  // atom diffusing off zero
      fwd[i][j] = (work[j] + from_atom) * emission(i, chain.xs[j]);
    }
    fwd_atom[i] = wa * atom * emission(i, 0.0);
    normalize(fwd[i], fwd_atom[i]);
  }

  // Backward pass, accumulating posterior means on the fly.
  std::vector<double> means(N);
  std::vector<double> bwd(G, 1.0), weighted(G);
  MmseDiagnostics local;
  local.log_evidence = log_evidence;

  for (std::size_t i = N; i-- > 0;) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < G; ++j) {
      const double m = fwd[i][j] * bwd[j] * h;
      num += m * chain.xs[j];
      den += m;
    }
    const double atom_mass = fwd_atom[i] * bwd[chain.zero_index];
    den += atom_mass;  // atom sits at x = 0, contributes nothing to num
    if (!(den > 0.0)) throw std::runtime_error("mmse_smoother: vanished posterior");
    means[i] = num / den;

    const double edge = (fwd[i][0] * bwd[0] + fwd[i][G - 1] * bwd[G - 1]) * h;
    local.max_boundary_mass = std::max(local.max_boundary_mass, edge / den);

    if (i == 0) break;
    // b_{i-1} = atom * w + (1 - atom) * (gauss (*) w), w = emission_i * b_i
    for (std::size_t j = 0; j < G; ++j)
      weighted[j] = emission(i, chain.xs[j]) * bwd[j];
    chain.transition(weighted, bwd);
    double peak = 0.0;
    for (const double v : bwd) peak = std::max(peak, v);
    if (!(peak > 0.0)) throw std::runtime_error("mmse_smoother: vanished message");
    for (double& v : bwd) v /= peak;
  }

  local.mass_loss_warning = local.max_boundary_mass > 1e-6;
  if (diag) *diag = local;
  return means;
}

}  // namespace proxlearn
