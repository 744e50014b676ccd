#include "proxlearn/signal_model.hpp"

#include <cmath>

#include "proxlearn/rng.hpp"

namespace proxlearn {

namespace {
constexpr std::uint64_t kStreamIncrements = 0;
constexpr std::uint64_t kStreamNoise = 1;
}  // namespace

std::vector<double> apply_L(std::span<const double> x) {
  std::vector<double> out(x.size());
  apply_L_into(x, out);
  return out;
}

std::vector<double> apply_Lt(std::span<const double> u) {
  std::vector<double> out(u.size());
  apply_Lt_into(u, out);
  return out;
}

void apply_L_into(std::span<const double> x, std::span<double> out) {
  const std::size_t n = x.size();
  if (n == 0) return;
  out[0] = x[0];
  for (std::size_t i = n - 1; i > 0; --i) out[i] = x[i] - x[i - 1];
}

void apply_Lt_into(std::span<const double> u, std::span<double> out) {
  const std::size_t n = u.size();
  if (n == 0) return;
  for (std::size_t i = 0; i + 1 < n; ++i) out[i] = u[i] - u[i + 1];
  out[n - 1] = u[n - 1];
}

std::vector<std::vector<double>> generate(const LevyModel& model, std::size_t n,
                                          std::size_t count,
                                          std::uint64_t seed) {
  if (n < 1 || count < 1)
    throw std::invalid_argument("generate: n and count must be >= 1");
  if (model.kind == LevyKind::CompoundPoisson && !(model.poisson_rate > 0.0))
    throw std::invalid_argument("generate: compound Poisson needs lambda > 0");

  const double zero_prob = model.kind == LevyKind::CompoundPoisson
                               ? std::exp(-model.poisson_rate)
                               : 0.0;
  std::vector<std::vector<double>> signals(count);
  for (std::size_t s = 0; s < count; ++s) {
    Rng rng(derive_seed(seed, kStreamIncrements, s));
    auto& x = signals[s];
    x.resize(n);
    double running = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double inc;
      if (model.kind == LevyKind::CompoundPoisson) {
        inc = rng.uniform01() < zero_prob ? 0.0 : rng.gaussian();
      } else {
        inc = rng.gaussian();
      }
      running += inc;
      x[i] = running;
    }
  }
  return signals;
}

SignalBatch add_awgn(const LevyModel& model,
                     std::vector<std::vector<double>> clean, double sigma2,
                     std::uint64_t seed) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("add_awgn: sigma2 must be > 0");
  SignalBatch batch;
  batch.model = model;
  batch.noise_variance = sigma2;
  batch.seed = seed;
  batch.noisy.resize(clean.size());
  const double sigma = std::sqrt(sigma2);
  for (std::size_t s = 0; s < clean.size(); ++s) {
    Rng rng(derive_seed(seed, kStreamNoise, s));
    auto& y = batch.noisy[s];
    y.resize(clean[s].size());
    for (std::size_t i = 0; i < y.size(); ++i)
      y[i] = clean[s][i] + sigma * rng.gaussian();
  }
  batch.clean = std::move(clean);
  return batch;
}

SignalBatch make_batch(const LevyModel& model, std::size_t n, std::size_t count,
                       double sigma2, std::uint64_t seed) {
  auto clean = generate(model, n, count, derive_seed(seed, 10, 0));
  SignalBatch batch =
      add_awgn(model, std::move(clean), sigma2, derive_seed(seed, 11, 0));
  batch.seed = seed;
  return batch;
}

}  // namespace proxlearn
