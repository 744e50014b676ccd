// Command-line front end: generate data, train shrinkage splines, denoise,
// run experiment presets, scale operators, recover penalties.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "proxlearn/experiments.hpp"
#include "proxlearn/rng.hpp"
#include "proxlearn/serialize.hpp"

namespace fs = std::filesystem;
using namespace proxlearn;

namespace {

std::uint64_t apply_seed_env(std::uint64_t seed) {
  if (const char* env = std::getenv("PROXLEARN_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return seed;
}

LevyModel parse_model(const std::string& name, double lambda) {
  if (name == "brownian-motion" || name == "brownian")
    return LevyModel{LevyKind::BrownianMotion, 0.0};
  if (name == "compound-poisson")
    return LevyModel{LevyKind::CompoundPoisson, lambda};
  throw CLI::ValidationError("--model", "unknown model '" + name + "'");
}

// All outputs of a run live under one directory with a hash manifest.
class OutputDir {
 public:
  explicit OutputDir(std::string dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
  }

  void write(const std::string& name, const std::string& content) {
    write_text_file(dir_ / name, content);
    written_.push_back(name);
  }

  void finish() {
    if (!written_.empty()) write_manifest(dir_, written_);
  }

  const fs::path& path() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<std::string> written_;
};

SplineArtifact load_artifact(const std::string& path) {
  return spline_artifact_from_json(json::parse(read_text_file(path)));
}

std::unique_ptr<Shrinkage> shrinkage_from_artifact(const SplineArtifact& a) {
  if (a.scale_lambda)
    return std::make_unique<ScaledShrinkage>(a.spline, *a.scale_lambda);
  return std::make_unique<SplineShrinkage>(a.spline);
}

std::vector<double> logspace_sigma2(std::size_t count) {
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.5
                                : static_cast<double>(i) /
                                      static_cast<double>(count - 1);
    values[i] = std::pow(10.0, -0.5 + t);
  }
  return values;
}

int cmd_generate(const std::string& model_name, double lambda, std::size_t n,
                 std::size_t count, double sigma2, std::uint64_t seed,
                 const std::string& out, const std::string& out_dir) {
  const LevyModel model = parse_model(model_name, lambda);
  const SignalBatch batch = make_batch(model, n, count, sigma2,
                                       apply_seed_env(seed));
  OutputDir dir(out_dir);
  dir.write(out, batch_to_json(batch).dump() + "\n");
  dir.finish();
  std::cout << "wrote " << (dir.path() / out).string() << " (" << count
            << " signals of length " << n << ")\n";
  return 0;
}

int cmd_train(const std::string& mode, const std::string& batch_path, int K,
              double mu, double gamma, int iters, int kernel_order,
              double delta, int m_half, int margin_knots, int threads,
              const std::string& out, const std::string& report_name,
              const std::string& out_dir, bool verbose) {
  const SignalBatch batch =
      batch_from_json(json::parse(read_text_file(batch_path)));

  TrainConfig cfg;
  cfg.mode = mode == "constrained" ? TrainMode::Constrained
                                   : TrainMode::Unconstrained;
  cfg.gamma = gamma;
  cfg.outer_iterations = iters;
  cfg.admm = AdmmConfig{mu, K, false, false};
  cfg.kernel_order = kernel_order;
  cfg.delta = delta;
  cfg.m_half = m_half;
  cfg.margin_knots = margin_knots;
  cfg.threads = threads;
  if (verbose) {
    cfg.on_iteration = [](int it, const ShrinkageSpline&, double loss) {
      std::cerr << "iter " << it << "  loss " << loss << "\n";
    };
  }

  const TrainResult result = train(cfg, batch);

  SplineArtifact artifact{result.spline, batch.noise_variance,
                          TrainingMeta{gamma, iters, K, mu, batch.seed, mode},
                          std::nullopt};
  if (cfg.mode == TrainMode::Constrained) {
    const FirmReport rep = check_firmly_nonexpansive(result.spline, 10000);
    if (!rep.ok) {
      std::cerr << "error: trained spline failed the firm-nonexpansiveness "
                   "check (max slope "
                << rep.max_slope << ")\n";
      return 1;
    }
  }

  json report;
  report["loss_history"] = result.loss_history;
  report["wall_time_s"] = result.wall_time_s;
  report["final_coeffs"] = result.spline.coeffs();
  report["config"] = {{"mode", mode},         {"gamma", gamma},
                      {"iters", iters},       {"K", K},
                      {"mu", mu},             {"kernel_order", kernel_order},
                      {"delta", result.spline.delta()},
                      {"m_half", result.spline.m_half()},
                      {"batch_seed", batch.seed}};

  OutputDir dir(out_dir);
  dir.write(out, spline_artifact_to_json(artifact).dump(2) + "\n");
  dir.write(report_name, report.dump(2) + "\n");
  dir.finish();
  std::cout << "final loss " << result.loss_history.back() << " after "
            << iters << " iterations (" << result.wall_time_s << " s)\n";
  return 0;
}

int cmd_denoise(const std::string& spline_path, const std::string& in_path,
                const std::string& out, const std::string& out_dir,
                int k_override) {
  const SplineArtifact artifact = load_artifact(spline_path);
  const SignalBatch batch =
      batch_from_json(json::parse(read_text_file(in_path)));
  const std::unique_ptr<Shrinkage> shrink = shrinkage_from_artifact(artifact);

  const int K = k_override > 0
                    ? k_override
                    : (artifact.meta ? artifact.meta->K : 10);
  const double mu = artifact.meta ? artifact.meta->mu : 2.0;
  const AdmmConfig admm{mu, K, false, false};
  const TridiagFactorization fact = factorize(batch.length(), mu);

  json out_json;
  out_json["reconstructions"] = json::array();
  out_json["per_signal_db"] = json::array();
  double mean_db = 0.0;
  for (std::size_t s = 0; s < batch.count(); ++s) {
    const AdmmTrace tr = admm_run(batch.noisy[s], *shrink, admm, fact);
    const double snr =
        snr_improvement(batch.clean[s], tr.x_final, batch.noisy[s]);
    mean_db += snr;
    out_json["reconstructions"].push_back(tr.x_final);
    out_json["per_signal_db"].push_back(snr);
  }
  mean_db /= static_cast<double>(batch.count());
  out_json["mean_db"] = mean_db;
  out_json["K"] = K;
  out_json["mu"] = mu;

  OutputDir dir(out_dir);
  dir.write(out, out_json.dump() + "\n");
  dir.finish();
  std::cout << "mean SNR improvement " << mean_db << " dB over "
            << batch.count() << " signals\n";
  return 0;
}

int cmd_scale(const std::string& spline_path, double lambda,
              const std::string& out, const std::string& out_dir) {
  SplineArtifact artifact = load_artifact(spline_path);
  if (!artifact.constrained()) {
    std::cerr << "error: refusing to scale an artifact that was not trained "
                 "with the constrained scheme; only firmly nonexpansive "
                 "operators support noise-level scaling\n";
    return 1;
  }
  const FirmReport rep = check_firmly_nonexpansive(artifact.spline, 10000);
  if (!rep.ok) {
    std::cerr << "error: spline fails the firm-nonexpansiveness check (slope "
                 "range ["
              << rep.min_slope << ", " << rep.max_slope << "])\n";
    return 1;
  }
  if (lambda < 0.0) {
    std::cerr << "error: lambda must be >= 0\n";
    return 1;
  }
  artifact.scale_lambda =
      artifact.scale_lambda ? *artifact.scale_lambda * lambda : lambda;

  OutputDir dir(out_dir);
  dir.write(out, spline_artifact_to_json(artifact).dump(2) + "\n");
  dir.finish();
  std::cout << "wrote scaled artifact (lambda " << *artifact.scale_lambda
            << ")\n";
  return 0;
}

int cmd_penalty(const std::string& spline_path, const std::string& out,
                const std::string& out_dir, double v_max, double v_step) {
  const SplineArtifact artifact = load_artifact(spline_path);
  const ShrinkageSpline& spline = artifact.spline;
  const FirmReport rep = check_firmly_nonexpansive(spline, 10000);
  if (!rep.ok) {
    std::cerr << "error: spline is not firmly nonexpansive; the penalty is "
                 "not well defined\n";
    return 1;
  }
  if (v_max <= 0.0) v_max = spline.knot_limit() + 2.0;

  // grid built by multiplication so it is exactly mirror-symmetric
  std::vector<double> grid;
  const int half = static_cast<int>(std::ceil(v_max / v_step));
  for (int j = -half; j <= half; ++j) grid.push_back(j * v_step);
  const PenaltyCurve curve = recover_penalty(spline, grid);

  // convexity always; symmetry when the spline is antisymmetric
  const std::size_t n = curve.u_grid.size();
  for (std::size_t i = 2; i < n; ++i) {
    const double s1 = (curve.phi_values[i - 1] - curve.phi_values[i - 2]) /
                      (curve.u_grid[i - 1] - curve.u_grid[i - 2]);
    const double s2 = (curve.phi_values[i] - curve.phi_values[i - 1]) /
                      (curve.u_grid[i] - curve.u_grid[i - 1]);
    if (s2 < s1 - 1e-9) {
      std::cerr << "error: recovered penalty is not convex near u = "
                << curve.u_grid[i] << "\n";
      return 1;
    }
  }
  if (spline.mode() == SplineMode::Antisymmetric) {
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(curve.u_grid[i] + curve.u_grid[n - 1 - i]) > 1e-9 ||
          std::abs(curve.phi_values[i] - curve.phi_values[n - 1 - i]) > 1e-6) {
        std::cerr << "error: recovered penalty is not symmetric\n";
        return 1;
      }
    }
  }

  OutputDir dir(out_dir);
  dir.write(out, penalty_to_csv(curve));
  dir.finish();
  std::cout << "wrote " << n << " penalty samples";
  if (spline.mode() == SplineMode::Antisymmetric)
    std::cout << " (symmetric, convex)";
  std::cout << "\n";
  return 0;
}

int cmd_evaluate(const std::string& preset, const std::string& model_name,
                 double lambda, std::size_t train_count, std::size_t test_count,
                 const std::vector<double>& sigma2_override,
                 const std::string& estimators_csv, std::uint64_t seed,
                 int threads, const std::string& out_dir) {
  SweepConfig cfg;
  cfg.model = parse_model(model_name, lambda);
  cfg.seed = apply_seed_env(seed);
  cfg.threads = threads;
  cfg.train.gamma = 2e-4;
  cfg.train.outer_iterations = 1000;
  cfg.train.admm = AdmmConfig{2.0, 10, false, false};
  cfg.estimators = {Estimator::CADMM, Estimator::ADMM, Estimator::MMSE,
                    Estimator::LMMSE, Estimator::TV};

  std::string experiment = "sweep";
  if (preset == "desk") {
    cfg.train_count = 100;
    cfg.test_count = 100;
    cfg.sigma2_values = {std::pow(10.0, -0.5), 1.0, std::pow(10.0, 0.5)};
  } else if (preset == "paper-fig2") {
    cfg.model = LevyModel{LevyKind::BrownianMotion, 0.0};
    cfg.train_count = 500;
    cfg.test_count = 500;
    cfg.sigma2_values = logspace_sigma2(9);
  } else if (preset == "paper-fig3") {
    cfg.model = LevyModel{LevyKind::CompoundPoisson, 0.6};
    cfg.train_count = 500;
    cfg.test_count = 500;
    cfg.sigma2_values = logspace_sigma2(9);
  } else if (preset == "scale-once-desk") {
    cfg.train_count = 100;
    cfg.test_count = 100;
    cfg.sigma2_values = {std::pow(10.0, -0.5), 1.0, std::pow(10.0, 0.5)};
    cfg.estimators = {Estimator::CADMM, Estimator::ADMM, Estimator::LMMSE};
    experiment = "scale-once";
  } else if (preset == "ktest-desk") {
    cfg.train_count = 100;
    cfg.test_count = 100;
    cfg.sigma2_values = {10.0};
    experiment = "ktest";
  } else {
    std::cerr << "error: unknown preset '" << preset << "'\n";
    return 1;
  }
  if (train_count > 0) cfg.train_count = train_count;
  if (test_count > 0) cfg.test_count = test_count;
  if (!sigma2_override.empty()) cfg.sigma2_values = sigma2_override;
  if (!estimators_csv.empty()) {
    cfg.estimators.clear();
    std::stringstream ss(estimators_csv);
    std::string item;
    while (std::getline(ss, item, ','))
      cfg.estimators.push_back(estimator_from_name(item));
  }

  OutputDir dir(out_dir);
  if (experiment == "ktest") {
    const KtestCurves curves = run_ktest_stability(cfg, 2, 10.0, 2, 50);
    json j;
    j["k_test"] = curves.k_test;
    j["constrained_db"] = curves.constrained_db;
    j["unconstrained_db"] = curves.unconstrained_db;
    dir.write("ktest.json", j.dump(2) + "\n");
    std::ostringstream csv;
    csv.precision(17);
    csv << "k_test,constrained_db,unconstrained_db\n";
    for (std::size_t i = 0; i < curves.k_test.size(); ++i)
      csv << curves.k_test[i] << ',' << curves.constrained_db[i] << ','
          << curves.unconstrained_db[i] << '\n';
    dir.write("ktest.csv", csv.str());
  } else {
    const ExperimentReport report = experiment == "scale-once"
                                        ? run_scale_once(cfg, 1.0)
                                        : run_noise_sweep(cfg);
    json echo = report_to_json(report);
    echo["config"] = {{"preset", preset},
                      {"train_count", cfg.train_count},
                      {"test_count", cfg.test_count},
                      {"gamma", cfg.train.gamma},
                      {"iters", cfg.train.outer_iterations},
                      {"K", cfg.train.admm.iterations},
                      {"mu", cfg.train.admm.mu},
                      {"seed", cfg.seed}};
    dir.write("report.json", echo.dump(2) + "\n");
    dir.write("report.csv", report_to_csv(report));
    for (const ReportCell& c : report.cells)
      std::cout << "sigma2 " << c.sigma2 << "  " << c.estimator << "  mean "
                << c.mean_db << " dB  (std " << c.std_db << ")\n";
  }
  dir.finish();
  return 0;
}

int cmd_selftest() {
  int failures = 0;
  const auto report = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };

  {  // kernel partition of unity and derivative identity
    Rng rng(1);
    bool ok = true;
    for (int order = 0; order <= 3 && ok; ++order)
      for (int i = 0; i < 50; ++i) {
        const double x = 12.0 * (rng.uniform01() - 0.5);
        double sum = 0.0;
        for (int m = -10; m <= 10; ++m) sum += kernel_eval(order, x - m);
        ok = ok && std::abs(sum - 1.0) < 1e-12;
        if (order >= 1) {
          const double lhs = kernel_deriv(order, x);
          const double rhs = kernel_eval(order - 1, x + 0.5) -
                             kernel_eval(order - 1, x - 0.5);
          ok = ok && std::abs(lhs - rhs) < 1e-13;
        }
      }
    report("bspline kernels (partition of unity, derivative identity)", ok);
  }

  {  // adjoint identity
    Rng rng(2);
    bool ok = true;
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> x(40), u(40);
      for (auto& v : x) v = rng.gaussian();
      for (auto& v : u) v = rng.gaussian();
      const auto lx = apply_L(x);
      const auto ltu = apply_Lt(u);
      double a = 0.0, b = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        a += lx[i] * u[i];
        b += x[i] * ltu[i];
      }
      ok = ok && std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b));
    }
    report("difference operator adjoint identity", ok);
  }

  {  // tridiagonal residual
    Rng rng(3);
    const TridiagFactorization fact = factorize(128, 2.0);
    bool ok = true;
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> b(128);
      double b_inf = 0.0;
      for (auto& v : b) {
        v = rng.gaussian();
        b_inf = std::max(b_inf, std::abs(v));
      }
      const auto x = fact.solve(b);
      const auto ltlx = apply_Lt(apply_L(x));
      for (std::size_t i = 0; i < b.size(); ++i)
        ok = ok && std::abs(x[i] + 2.0 * ltlx[i] - b[i]) < 1e-10 * b_inf;
    }
    report("tridiagonal solver residual", ok);
  }

  {  // gradient vs finite differences, both modes
    bool ok = true;
    for (const SplineMode mode :
         {SplineMode::General, SplineMode::Antisymmetric}) {
      const LevyModel model{LevyKind::BrownianMotion, 0.0};
      const SignalBatch batch = make_batch(model, 16, 1, 1.0, 5);
      const double delta = 0.5;
      const int m_half = knot_range_from_data(batch, delta, 8);
      ShrinkageSpline spline = identity_spline(3, delta, m_half, mode);
      Rng rng(6);
      std::vector<double> c = spline.coeffs();
      for (double& ci : c) ci += 0.1 * delta * (rng.uniform01() - 0.5);
      spline = spline.with_coeffs(c);
      const AdmmConfig admm{2.0, 3, false, false};
      const TridiagFactorization fact = factorize(16, 2.0);
      const GradientResult g =
          backprop_gradient(spline, batch.clean[0], batch.noisy[0], admm, fact);

      const double h = 1e-5;
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i) {
        const auto loss_at = [&](double ci) {
          std::vector<double> cc = spline.coeffs();
          cc[i] = ci;
          const SplineShrinkage sh(spline.with_coeffs(cc));
          const AdmmTrace tr = admm_run(batch.noisy[0], sh, admm, fact);
          double loss = 0.0;
          for (std::size_t k = 0; k < tr.x_final.size(); ++k) {
            const double d = tr.x_final[k] - batch.clean[0][k];
            loss += d * d;
          }
          return 0.5 * loss;
        };
        const double fd =
            (loss_at(spline.coeffs()[i] + h) - loss_at(spline.coeffs()[i] - h)) /
            (2.0 * h);
        num += (g.grad[i] - fd) * (g.grad[i] - fd);
        den += fd * fd;
      }
      ok = ok && std::sqrt(num) < 1e-5 * std::max(std::sqrt(den), 1e-12);
    }
    report("backpropagated gradient vs finite differences", ok);
  }

  {  // projection feasibility and idempotence
    Rng rng(7);
    bool ok = true;
    const ConstraintSet S{0.5, 8, SplineMode::Antisymmetric};
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> z(8);
      for (auto& v : z) v = 4.0 * (rng.uniform01() - 0.5);
      const auto p = project_to_S(z, S, 1e-12);
      ok = ok && satisfies_constraints(p, S, 1e-10);
      const auto p2 = project_to_S(p, S, 1e-12);
      for (std::size_t i = 0; i < p.size(); ++i)
        ok = ok && std::abs(p2[i] - p[i]) < 1e-9;
    }
    report("Dykstra projection feasibility and idempotence", ok);
  }

  {  // scaling identities and soft-threshold closed form
    const ShrinkageSpline st =
        soft_threshold_spline(3, 0.05, 200, 1.0, SplineMode::Antisymmetric);
    bool ok = true;
    for (const double y : {-5.0, 0.0, 3.0}) {
      ok = ok && scale_operator(st, 1.0, y) == st.eval(y);
      ok = ok && scale_operator(st, 0.0, y) == y;
      const double want = std::abs(y) > 2.0 ? (y > 0 ? y - 2.0 : y + 2.0) : 0.0;
      ok = ok && std::abs(scale_operator(st, 2.0, y) - want) < 1e-6;
    }
    report("operator scaling identities", ok);
  }

  std::cout << (failures == 0 ? "selftest OK\n" : "selftest FAILED\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"learned convex-regularizer shrinkage for ADMM denoising"};
  app.require_subcommand(1);

  // generate
  std::string g_model, g_out = "batch.json", g_dir = ".";
  double g_lambda = 0.6, g_sigma2 = 1.0;
  std::size_t g_n = 100, g_count = 100;
  std::uint64_t g_seed = 0;
  auto* gen = app.add_subcommand("generate", "generate a signal batch");
  gen->add_option("--model", g_model, "brownian-motion | compound-poisson")
      ->required();
  gen->add_option("--lambda", g_lambda, "Poisson rate (compound-poisson)");
  gen->add_option("--n", g_n, "signal length");
  gen->add_option("--count", g_count, "number of signals");
  gen->add_option("--sigma2", g_sigma2, "noise variance");
  gen->add_option("--seed", g_seed, "master seed");
  gen->add_option("--out", g_out, "output file name");
  gen->add_option("--out-dir", g_dir, "output directory");

  // train
  std::string t_mode, t_batch, t_out = "spline.json",
              t_report = "training_report.json", t_dir = ".";
  int t_K = 10, t_iters = 1000, t_order = 3, t_mhalf = 0, t_margin = 4,
      t_threads = 0;
  double t_mu = 2.0, t_gamma = 2e-4, t_delta = 0.0;
  bool t_verbose = false;
  auto* tr = app.add_subcommand("train", "learn a shrinkage spline");
  tr->add_option("--mode", t_mode, "constrained | unconstrained")
      ->required()
      ->check(CLI::IsMember({"constrained", "unconstrained"}));
  tr->add_option("--batch", t_batch, "training batch file")->required();
  tr->add_option("--K", t_K, "unrolled ADMM iterations");
  tr->add_option("--mu", t_mu, "ADMM penalty parameter");
  tr->add_option("--gamma", t_gamma, "learning rate");
  tr->add_option("--iters", t_iters, "gradient steps")
      ->check(CLI::PositiveNumber);
  tr->add_option("--kernel-order", t_order, "B-spline order");
  tr->add_option("--delta", t_delta, "knot step (default sigma/2)");
  tr->add_option("--m-half", t_mhalf, "knot half-range (default from data)");
  tr->add_option("--margin-knots", t_margin, "extra knots beyond data range");
  tr->add_option("--threads", t_threads, "worker threads (0 = all cores)");
  tr->add_option("--out", t_out, "spline artifact file name");
  tr->add_option("--report", t_report, "training report file name");
  tr->add_option("--out-dir", t_dir, "output directory");
  tr->add_flag("-v,--verbose", t_verbose, "per-iteration loss logging");

  // denoise
  std::string d_spline, d_in, d_out = "xhat.json", d_dir = ".";
  int d_K = 0;
  auto* dn = app.add_subcommand("denoise", "denoise a batch with a spline");
  dn->add_option("--spline", d_spline, "spline artifact")->required();
  dn->add_option("--in", d_in, "input batch file")->required();
  dn->add_option("--K", d_K, "override ADMM iterations");
  dn->add_option("--out", d_out, "output file name");
  dn->add_option("--out-dir", d_dir, "output directory");

  // evaluate
  std::string e_preset, e_model = "compound-poisson", e_estimators, e_dir = ".";
  double e_lambda = 0.6;
  std::size_t e_train = 0, e_test = 0;
  std::vector<double> e_sigma2;
  std::uint64_t e_seed = 0;
  int e_threads = 0;
  auto* ev = app.add_subcommand("evaluate", "run an experiment preset");
  ev->add_option("--preset", e_preset,
                 "desk | paper-fig2 | paper-fig3 | scale-once-desk | ktest-desk")
      ->required();
  ev->add_option("--model", e_model, "model override");
  ev->add_option("--lambda", e_lambda, "Poisson rate");
  ev->add_option("--train-count", e_train, "training signals override");
  ev->add_option("--test-count", e_test, "test signals override");
  ev->add_option("--sigma2", e_sigma2, "explicit sigma2 list override");
  ev->add_option("--estimators", e_estimators,
                 "comma list: cadmm,admm,mmse,lmmse,tv");
  ev->add_option("--seed", e_seed, "master seed");
  ev->add_option("--threads", e_threads, "worker threads (0 = all cores)");
  ev->add_option("--out-dir", e_dir, "output directory");

  // scale
  std::string s_spline, s_out = "scaled_spline.json", s_dir = ".";
  double s_lambda = 1.0;
  auto* sc = app.add_subcommand("scale", "scale a constrained operator");
  sc->add_option("--spline", s_spline, "spline artifact")->required();
  sc->add_option("--lambda", s_lambda, "sigma2_new / sigma2_train")->required();
  sc->add_option("--out", s_out, "output file name");
  sc->add_option("--out-dir", s_dir, "output directory");

  // penalty
  std::string p_spline, p_out = "phi.csv", p_dir = ".";
  double p_vmax = 0.0, p_vstep = 1e-3;
  auto* pe = app.add_subcommand("penalty", "recover the convex penalty");
  pe->add_option("--spline", p_spline, "spline artifact")->required();
  pe->add_option("--v-max", p_vmax, "sampling range (default knot range + 2)");
  pe->add_option("--v-step", p_vstep, "sampling step");
  pe->add_option("--out", p_out, "output CSV name");
  pe->add_option("--out-dir", p_dir, "output directory");

  auto* st = app.add_subcommand("selftest", "run the built-in oracle checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_generate(g_model, g_lambda, g_n, g_count, g_sigma2, g_seed,
                          g_out, g_dir);
    if (tr->parsed())
      return cmd_train(t_mode, t_batch, t_K, t_mu, t_gamma, t_iters, t_order,
                       t_delta, t_mhalf, t_margin, t_threads, t_out, t_report,
                       t_dir, t_verbose);
    if (dn->parsed()) return cmd_denoise(d_spline, d_in, d_out, d_dir, d_K);
    if (ev->parsed())
      return cmd_evaluate(e_preset, e_model, e_lambda, e_train, e_test,
                          e_sigma2, e_estimators, e_seed, e_threads, e_dir);
    if (sc->parsed()) return cmd_scale(s_spline, s_lambda, s_out, s_dir);
    if (pe->parsed())
      return cmd_penalty(p_spline, p_out, p_dir, p_vmax, p_vstep);
    if (st->parsed()) return cmd_selftest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
