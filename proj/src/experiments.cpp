#include "proxlearn/experiments.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>

#include "proxlearn/parallel.hpp"
#include "proxlearn/rng.hpp"
#include "proxlearn/serialize.hpp"

namespace proxlearn {

namespace {

constexpr int kTvIterations = 2000;
constexpr std::uint64_t kTrainStream = 1000;
constexpr std::uint64_t kTestStream = 2000;
constexpr std::uint64_t kScaleOnceTrainStream = 999;

struct Stats {
  double mean = 0.0, stddev = 0.0;
};

Stats summarize(const std::vector<double>& v) {
  Stats s;
  for (const double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double acc = 0.0;
    for (const double x : v) acc += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(acc / static_cast<double>(v.size() - 1));
  }
  return s;
}

ReportCell evaluate_shrinkage_cell(const Shrinkage& shrink,
                                   const SignalBatch& test,
                                   const AdmmConfig& admm,
                                   const TridiagFactorization& fact,
                                   int threads) {
  ReportCell cell;
  cell.per_signal_db.resize(test.count());
  parallel_for(test.count(), threads, [&](std::size_t s) {
    const AdmmTrace tr = admm_run(test.noisy[s], shrink, admm, fact);
    cell.per_signal_db[s] =
        snr_improvement(test.clean[s], tr.x_final, test.noisy[s]);
  });
  return cell;
}

ReportCell evaluate_estimator(Estimator which, const SignalBatch& test,
                              double sigma2, const SweepConfig& cfg,
                              const Shrinkage* learned,
                              const TridiagFactorization& fact) {
  ReportCell cell;
  const AdmmConfig eval_admm{cfg.train.admm.mu, cfg.train.admm.iterations,
                             false, false};
  switch (which) {
    case Estimator::CADMM:
    case Estimator::ADMM:
      cell = evaluate_shrinkage_cell(*learned, test, eval_admm, fact,
                                     cfg.threads);
      cell.provenance.params = "K=" + std::to_string(eval_admm.iterations) +
                               ",mu=" + std::to_string(eval_admm.mu);
      break;
    case Estimator::LMMSE: {
      cell.per_signal_db.resize(test.count());
      parallel_for(test.count(), cfg.threads, [&](std::size_t s) {
        const std::vector<double> x_hat = lmmse_denoise(test.noisy[s], sigma2);
        cell.per_signal_db[s] =
            snr_improvement(test.clean[s], x_hat, test.noisy[s]);
      });
      cell.provenance.params = "wiener";
      break;
    }
    case Estimator::MMSE: {
      const IncrementDensity dens = increment_density(cfg.model);
      cell.per_signal_db.resize(test.count());
      parallel_for(test.count(), cfg.threads, [&](std::size_t s) {
        const GridSpec grid =
            default_grid(test.noisy[s], sigma2, cfg.grid_points);
        const std::vector<double> x_hat =
            mmse_smoother(test.noisy[s], sigma2, dens, grid);
        cell.per_signal_db[s] =
            snr_improvement(test.clean[s], x_hat, test.noisy[s]);
      });
      cell.provenance.params = "G=" + std::to_string(cfg.grid_points);
      break;
    }
    case Estimator::TV: {
      const AdmmConfig tv_admm{cfg.train.admm.mu, kTvIterations, false, false};
      cell.per_signal_db.resize(test.count());
      parallel_for(test.count(), cfg.threads, [&](std::size_t s) {
        const TvOracleResult r =
            tv_oracle_lambda(test.noisy[s], test.clean[s], tv_admm, fact);
        cell.per_signal_db[s] = r.snr_db;
      });
      cell.provenance.params =
          "K=" + std::to_string(kTvIterations) + ",per-signal lambda";
      break;
    }
  }
  const Stats st = summarize(cell.per_signal_db);
  cell.mean_db = st.mean;
  cell.std_db = st.stddev;
  cell.sigma2 = sigma2;
  cell.estimator = estimator_name(which);
  return cell;
}

bool wants(const SweepConfig& cfg, Estimator e) {
  for (const Estimator x : cfg.estimators)
    if (x == e) return true;
  return false;
}

TrainResult train_for(const SweepConfig& cfg, const SignalBatch& batch,
                      TrainMode mode) {
  TrainConfig tc = cfg.train;
  tc.mode = mode;
  tc.threads = cfg.threads;
  return train(tc, batch);
}

}  // namespace

std::string estimator_name(Estimator e) {
  switch (e) {
    case Estimator::CADMM: return "cadmm";
    case Estimator::ADMM: return "admm";
    case Estimator::MMSE: return "mmse";
    case Estimator::LMMSE: return "lmmse";
    case Estimator::TV: return "tv";
  }
  throw std::invalid_argument("estimator_name: unknown estimator");
}

Estimator estimator_from_name(const std::string& name) {
  if (name == "cadmm") return Estimator::CADMM;
  if (name == "admm") return Estimator::ADMM;
  if (name == "mmse") return Estimator::MMSE;
  if (name == "lmmse") return Estimator::LMMSE;
  if (name == "tv") return Estimator::TV;
  throw std::invalid_argument("estimator_from_name: unknown estimator " + name);
}

const ReportCell* ExperimentReport::find(double sigma2,
                                         const std::string& estimator) const {
  for (const ReportCell& c : cells) {
    if (c.estimator == estimator &&
        std::abs(c.sigma2 - sigma2) <= 1e-12 * std::max(1.0, std::abs(sigma2)))
      return &c;
  }
  return nullptr;
}

double snr_improvement(std::span<const double> x_clean,
                       std::span<const double> x_hat,
                       std::span<const double> y) {
  if (x_hat.size() != x_clean.size() || y.size() != x_clean.size())
    throw std::invalid_argument("snr_improvement: size mismatch");
  double noise = 0.0, err = 0.0;
  for (std::size_t i = 0; i < x_clean.size(); ++i) {
    const double dn = y[i] - x_clean[i];
    const double de = x_hat[i] - x_clean[i];
    noise += dn * dn;
    err += de * de;
  }
  if (noise == 0.0)
    throw std::invalid_argument("snr_improvement: y equals the clean signal");
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(noise / err);
}

ExperimentReport run_noise_sweep(const SweepConfig& cfg) {
  if (cfg.sigma2_values.empty())
    throw std::invalid_argument("run_noise_sweep: no sigma2 values");
  if (cfg.train_count < 1 || cfg.test_count < 1)
    throw std::invalid_argument("run_noise_sweep: counts must be >= 1");

  const auto t0 = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.model = cfg.model;
  report.signal_length = cfg.signal_length;
  report.seed = cfg.seed;

  for (std::size_t i = 0; i < cfg.sigma2_values.size(); ++i) {
    const double sigma2 = cfg.sigma2_values[i];
    const std::uint64_t train_seed = derive_seed(cfg.seed, kTrainStream + i, 0);
    const std::uint64_t test_seed = derive_seed(cfg.seed, kTestStream + i, 1);
    const SignalBatch test =
        make_batch(cfg.model, cfg.signal_length, cfg.test_count, sigma2,
                   test_seed);
    const TridiagFactorization fact =
        factorize(cfg.signal_length, cfg.train.admm.mu);

    SignalBatch train_batch;
    const bool needs_training =
        wants(cfg, Estimator::CADMM) || wants(cfg, Estimator::ADMM);
    if (needs_training)
      train_batch = make_batch(cfg.model, cfg.signal_length, cfg.train_count,
                               sigma2, train_seed);

    for (const Estimator e : cfg.estimators) {
      std::unique_ptr<Shrinkage> learned;
      std::string spline_hash;
      if (e == Estimator::CADMM || e == Estimator::ADMM) {
        const TrainResult tr =
            train_for(cfg, train_batch,
                      e == Estimator::CADMM ? TrainMode::Constrained
                                            : TrainMode::Unconstrained);
        spline_hash = spline_fingerprint(tr.spline);
        learned = std::make_unique<SplineShrinkage>(tr.spline);
      }
      ReportCell cell =
          evaluate_estimator(e, test, sigma2, cfg, learned.get(), fact);
      cell.provenance.train_seed = train_seed;
      cell.provenance.test_seed = test_seed;
      cell.provenance.spline_hash = spline_hash;
      report.cells.push_back(std::move(cell));
    }
  }
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

ExperimentReport run_scale_once(const SweepConfig& cfg, double train_sigma2) {
  if (cfg.sigma2_values.empty())
    throw std::invalid_argument("run_scale_once: no sigma2 values");
  if (!(train_sigma2 > 0.0))
    throw std::invalid_argument("run_scale_once: train_sigma2 must be > 0");

  const auto t0 = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.model = cfg.model;
  report.signal_length = cfg.signal_length;
  report.seed = cfg.seed;

  const std::uint64_t train_seed =
      derive_seed(cfg.seed, kScaleOnceTrainStream, 0);
  const SignalBatch train_batch = make_batch(
      cfg.model, cfg.signal_length, cfg.train_count, train_sigma2, train_seed);

  std::optional<TrainResult> constrained, unconstrained;
  if (wants(cfg, Estimator::CADMM))
    constrained = train_for(cfg, train_batch, TrainMode::Constrained);
  if (wants(cfg, Estimator::ADMM))
    unconstrained = train_for(cfg, train_batch, TrainMode::Unconstrained);

  const TridiagFactorization fact =
      factorize(cfg.signal_length, cfg.train.admm.mu);

  for (std::size_t i = 0; i < cfg.sigma2_values.size(); ++i) {
    const double sigma2 = cfg.sigma2_values[i];
    const std::uint64_t test_seed = derive_seed(cfg.seed, kTestStream + i, 1);
    const SignalBatch test = make_batch(cfg.model, cfg.signal_length,
                                        cfg.test_count, sigma2, test_seed);

    for (const Estimator e : cfg.estimators) {
      std::unique_ptr<Shrinkage> learned;
      std::string spline_hash;
      std::string scale_note;
      if (e == Estimator::CADMM) {
        const double lambda = sigma2 / train_sigma2;
        learned =
            std::make_unique<ScaledShrinkage>(constrained->spline, lambda);
        spline_hash = spline_fingerprint(constrained->spline);
        scale_note = ",scale_lambda=" + std::to_string(lambda);
      } else if (e == Estimator::ADMM) {
        learned = std::make_unique<SplineShrinkage>(unconstrained->spline);
        spline_hash = spline_fingerprint(unconstrained->spline);
        scale_note = ",raw_reuse";
      }
      ReportCell cell =
          evaluate_estimator(e, test, sigma2, cfg, learned.get(), fact);
      cell.provenance.train_seed = train_seed;
      cell.provenance.test_seed = test_seed;
      cell.provenance.spline_hash = spline_hash;
      cell.provenance.params += scale_note;
      report.cells.push_back(std::move(cell));
    }
  }
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

KtestCurves run_ktest_stability(const SweepConfig& cfg, int k_train,
                                double sigma2, int k_lo, int k_hi) {
  if (k_lo < 1 || k_hi < k_lo)
    throw std::invalid_argument("run_ktest_stability: bad K_test range");

  SweepConfig train_cfg = cfg;
  train_cfg.train.admm.iterations = k_train;

  const std::uint64_t train_seed = derive_seed(cfg.seed, kTrainStream, 0);
  const std::uint64_t test_seed = derive_seed(cfg.seed, kTestStream, 1);
  const SignalBatch train_batch = make_batch(
      cfg.model, cfg.signal_length, cfg.train_count, sigma2, train_seed);
  const SignalBatch test = make_batch(cfg.model, cfg.signal_length,
                                      cfg.test_count, sigma2, test_seed);

  const TrainResult constrained =
      train_for(train_cfg, train_batch, TrainMode::Constrained);
  const TrainResult unconstrained =
      train_for(train_cfg, train_batch, TrainMode::Unconstrained);
  const SplineShrinkage shrink_c(constrained.spline);
  const SplineShrinkage shrink_u(unconstrained.spline);
  const TridiagFactorization fact =
      factorize(cfg.signal_length, cfg.train.admm.mu);

  KtestCurves curves;
  for (int k = k_lo; k <= k_hi; ++k) {
    const AdmmConfig admm{cfg.train.admm.mu, k, false, false};
    const ReportCell cc =
        evaluate_shrinkage_cell(shrink_c, test, admm, fact, cfg.threads);
    const ReportCell cu =
        evaluate_shrinkage_cell(shrink_u, test, admm, fact, cfg.threads);
    curves.k_test.push_back(k);
    curves.constrained_db.push_back(summarize(cc.per_signal_db).mean);
    curves.unconstrained_db.push_back(summarize(cu.per_signal_db).mean);
  }
  return curves;
}

std::vector<double> convergence_trace(const ShrinkageSpline& spline,
                                      std::span<const double> y,
                                      const PenaltyCurve& penalty, int iters,
                                      double mu) {
  const SplineShrinkage shrink(spline);
  AdmmConfig cfg{mu, iters, false, true};
  const TridiagFactorization fact = factorize(y.size(), mu);
  const AdmmTrace trace = admm_run(y, shrink, cfg, fact);
  std::vector<double> costs;
  costs.reserve(trace.x_per_iter.size());
  for (const auto& x : trace.x_per_iter) costs.push_back(cost_eval(x, y, penalty));
  return costs;
}

}  // namespace proxlearn
