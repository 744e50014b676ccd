#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace proxlearn {

enum class LevyKind { BrownianMotion, CompoundPoisson };

struct LevyModel {
  LevyKind kind = LevyKind::BrownianMotion;
  double poisson_rate = 0.0;  // lambda, CompoundPoisson only
};

// Paired clean/noisy realizations with the generating model and master seed.
struct SignalBatch {
  std::vector<std::vector<double>> clean;
  std::vector<std::vector<double>> noisy;
  double noise_variance = 0.0;
  LevyModel model;
  std::uint64_t seed = 0;

  std::size_t count() const { return clean.size(); }
  std::size_t length() const { return clean.empty() ? 0 : clean.front().size(); }
};

// First differences with the x_0 = 0 convention; L is square, lower
// bidiagonal and invertible (its inverse is the cumulative sum).
std::vector<double> apply_L(std::span<const double> x);
std::vector<double> apply_Lt(std::span<const double> u);
void apply_L_into(std::span<const double> x, std::span<double> out);
void apply_Lt_into(std::span<const double> u, std::span<double> out);

struct DifferenceOperator {
  std::size_t n = 0;

  std::vector<double> apply(std::span<const double> x) const {
    check(x.size());
    return apply_L(x);
  }
  std::vector<double> apply_adjoint(std::span<const double> u) const {
    check(u.size());
    return apply_Lt(u);
  }

 private:
  void check(std::size_t m) const {
    if (m != n) throw std::invalid_argument("DifferenceOperator: size mismatch");
  }
};

// Clean Levy-process paths: cumulative sums of i.i.d. increments.
// Brownian motion: N(0,1) increments. Compound Poisson: increments are 0 with
// probability exp(-lambda), else N(0,1). Deterministic given seed.
std::vector<std::vector<double>> generate(const LevyModel& model, std::size_t n,
                                          std::size_t count, std::uint64_t seed);

SignalBatch add_awgn(const LevyModel& model,
                     std::vector<std::vector<double>> clean, double sigma2,
                     std::uint64_t seed);

// generate + add_awgn on sub-seeds derived from one master seed.
SignalBatch make_batch(const LevyModel& model, std::size_t n, std::size_t count,
                       double sigma2, std::uint64_t seed);

}  // namespace proxlearn
