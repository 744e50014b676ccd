#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "proxlearn/baselines.hpp"
#include "proxlearn/learning.hpp"

namespace proxlearn {

enum class Estimator { CADMM, ADMM, MMSE, LMMSE, TV };

std::string estimator_name(Estimator e);
Estimator estimator_from_name(const std::string& name);

struct SweepConfig {
  std::vector<double> sigma2_values;
  std::size_t train_count = 100;
  std::size_t test_count = 100;
  LevyModel model;
  std::vector<Estimator> estimators;
  TrainConfig train;  // template; mode set per learned estimator
  std::uint64_t seed = 0;
  std::size_t signal_length = 100;
  std::size_t grid_points = 2048;  // MMSE smoother grid
  int threads = 0;
};

struct CellProvenance {
  std::uint64_t train_seed = 0;
  std::uint64_t test_seed = 0;
  std::string spline_hash;  // empty for non-learned estimators
  std::string params;
};

struct ReportCell {
  double sigma2 = 0.0;
  std::string estimator;
  std::vector<double> per_signal_db;
  double mean_db = 0.0;
  double std_db = 0.0;
  CellProvenance provenance;
};

struct ExperimentReport {
  LevyModel model;
  std::size_t signal_length = 0;
  std::uint64_t seed = 0;
  std::vector<ReportCell> cells;
  double wall_time_s = 0.0;

  const ReportCell* find(double sigma2, const std::string& estimator) const;
};

// 10 log10(||y - x||^2 / ||x_hat - x||^2); positive iff the estimate improves
// on the raw observation, +inf when x_hat == x exactly.
double snr_improvement(std::span<const double> x_clean,
                       std::span<const double> x_hat,
                       std::span<const double> y);

// Per sigma2: fresh train/test batches, delta = sigma/2, knot range from the
// training data, train the requested learned estimators, evaluate everything
// on the test set.
ExperimentReport run_noise_sweep(const SweepConfig& cfg);

// Train once at train_sigma2; at every other sigma2 the constrained model is
// adapted with the scaling formula (lambda = sigma2/train_sigma2) while the
// unconstrained model is reused as-is.
ExperimentReport run_scale_once(const SweepConfig& cfg,
                                double train_sigma2 = 1.0);

struct KtestCurves {
  std::vector<int> k_test;
  std::vector<double> constrained_db;
  std::vector<double> unconstrained_db;
};

// Trains both modes at k_train and evaluates mean SNR improvement for each
// K_test in [k_lo, k_hi].
KtestCurves run_ktest_stability(const SweepConfig& cfg, int k_train = 2,
                                double sigma2 = 10.0, int k_lo = 2,
                                int k_hi = 50);

// ADMM cost trace under the recovered penalty of the given spline.
std::vector<double> convergence_trace(const ShrinkageSpline& spline,
                                      std::span<const double> y,
                                      const PenaltyCurve& penalty,
                                      int iters = 50, double mu = 2.0);

}  // namespace proxlearn
