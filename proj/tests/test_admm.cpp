#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "proxlearn/admm.hpp"
#include "proxlearn/learning.hpp"
#include "proxlearn/rng.hpp"
#include "proxlearn/signal_model.hpp"

using namespace proxlearn;

TEST_CASE("tridiagonal factorization") {
  SUBCASE("n=3, mu=2 against dense elimination") {
    const std::vector<double> b{1.0, -2.0, 0.5};
    const std::vector<double> got = factorize(3, 2.0).solve(b);
    const std::vector<double> want = oracles::dense_solve_reference(b, 2.0);
    for (std::size_t i = 0; i < b.size(); ++i)
      CHECK(std::abs(got[i] - want[i]) <= 1e-12 * std::abs(want[i]));
  }

  SUBCASE("mu = 0 gives the identity") {
    Rng rng(1);
    std::vector<double> b(40);
    for (double& v : b) v = rng.gaussian();
    const std::vector<double> x = factorize(b.size(), 0.0).solve(b);
    for (std::size_t i = 0; i < b.size(); ++i)
      CHECK(std::abs(x[i] - b[i]) < 1e-12);
  }

  SUBCASE("residual bound on random right-hand sides") {
    Rng rng(2);
    const double mu = 2.0;
    const TridiagFactorization fact = factorize(100, mu);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> b(100);
      double b_inf = 0.0;
      for (double& v : b) {
        v = rng.gaussian();
        b_inf = std::max(b_inf, std::abs(v));
      }
      const std::vector<double> x = fact.solve(b);
      // residual = (I + mu L^T L) x - b
      const std::vector<double> lx = apply_L(x);
      const std::vector<double> ltlx = apply_Lt(lx);
      double r_inf = 0.0;
      for (std::size_t i = 0; i < b.size(); ++i)
        r_inf = std::max(r_inf, std::abs(x[i] + mu * ltlx[i] - b[i]));
      CHECK(r_inf < 1e-10 * b_inf);
    }
  }

  SUBCASE("input validation") {
    CHECK_THROWS_AS(factorize(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(factorize(4, -1.0), std::invalid_argument);
    const TridiagFactorization f = factorize(4, 1.0);
    std::vector<double> wrong(3, 0.0);
    CHECK_THROWS_AS(f.solve(wrong), std::invalid_argument);
  }
}

TEST_CASE("admm fixed points and contracts") {
  const LevyModel model{LevyKind::BrownianMotion, 0.0};
  const SignalBatch batch = make_batch(model, 50, 1, 1.0, 77);
  const std::vector<double>& y = batch.noisy[0];

  SUBCASE("identity shrinkage converges to y") {
    const AdmmConfig cfg{2.0, 500, false, false};
    const TridiagFactorization fact = factorize(y.size(), cfg.mu);
    const AdmmTrace tr = admm_run(y, IdentityShrinkage{}, cfg, fact);
    double err = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
      err = std::max(err, std::abs(tr.x_final[i] - y[i]));
    CHECK(err < 1e-6);
  }

  SUBCASE("exactly K iterations are recorded") {
    const AdmmConfig cfg{2.0, 1, true, true};
    const TridiagFactorization fact = factorize(y.size(), cfg.mu);
    const AdmmTrace tr = admm_run(y, IdentityShrinkage{}, cfg, fact);
    CHECK(tr.v_per_iter.size() == 1);
    CHECK(tr.x_per_iter.size() == 1);
  }

  SUBCASE("identical runs are bit-identical") {
    const AdmmConfig cfg{2.0, 50, true, false};
    const TridiagFactorization fact = factorize(y.size(), cfg.mu);
    const SoftThreshold shrink(0.4);
    const AdmmTrace a = admm_run(y, shrink, cfg, fact);
    const AdmmTrace b = admm_run(y, shrink, cfg, fact);
    CHECK(a.x_final == b.x_final);
    CHECK(a.v_per_iter == b.v_per_iter);
  }

  SUBCASE("dimension and mu mismatches throw") {
    const AdmmConfig cfg{2.0, 10, false, false};
    CHECK_THROWS_AS(admm_run(y, IdentityShrinkage{}, cfg, factorize(10, 2.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        admm_run(y, IdentityShrinkage{}, cfg, factorize(y.size(), 1.0)),
        std::invalid_argument);
    const AdmmConfig bad{2.0, 0, false, false};
    CHECK_THROWS_AS(
        admm_run(y, IdentityShrinkage{}, bad, factorize(y.size(), 2.0)),
        std::invalid_argument);
  }
}

TEST_CASE("admm with soft threshold matches the dual reference solver") {
  const LevyModel model{LevyKind::CompoundPoisson, 0.6};
  const SignalBatch batch = make_batch(model, 60, 3, 1.0, 13);
  const double mu = 2.0;
  const double lam = 1.3;
  const AdmmConfig cfg{mu, 2000, false, false};
  const TridiagFactorization fact = factorize(60, mu);
  for (std::size_t s = 0; s < batch.count(); ++s) {
    const std::vector<double>& y = batch.noisy[s];
    const AdmmTrace tr = admm_run(y, SoftThreshold(lam / mu), cfg, fact);
    const std::vector<double> ref = oracles::tv_reference(y, lam);
    CHECK(oracles::rel_l2_error(tr.x_final, ref) < 1e-6);
  }
}

TEST_CASE("cost evaluation") {
  PenaltyCurve zero;
  zero.u_grid = {-10.0, 0.0, 10.0};
  zero.phi_values = {0.0, 0.0, 0.0};
  zero.phi_prime_values = {0.0, 0.0, 0.0};

  Rng rng(3);
  std::vector<double> y(30);
  for (double& v : y) v = rng.gaussian();

  SUBCASE("x = y with zero penalty") {
    CHECK(cost_eval(y, y, zero) == 0.0);
  }

  SUBCASE("x = 0 gives half the squared norm") {
    const std::vector<double> x(y.size(), 0.0);
    double want = 0.0;
    for (const double v : y) want += v * v;
    CHECK(cost_eval(x, y, zero) == doctest::Approx(0.5 * want).epsilon(1e-14));
  }

  SUBCASE("absolute-value penalty reproduces the TV objective") {
    PenaltyCurve abs_curve;
    for (double u = -30.0; u <= 30.0 + 1e-9; u += 0.001) {
      abs_curve.u_grid.push_back(u);
      abs_curve.phi_values.push_back(std::abs(u));
      abs_curve.phi_prime_values.push_back(u < 0.0 ? -1.0 : 1.0);
    }
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> x(y.size());
      for (double& v : x) v = 3.0 * rng.gaussian();
      double want = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i)
        want += 0.5 * (y[i] - x[i]) * (y[i] - x[i]);
      const std::vector<double> lx = apply_L(x);
      for (const double u : lx) want += std::abs(u);
      CHECK(cost_eval(x, y, abs_curve) ==
            doctest::Approx(want).epsilon(1e-8));
    }
  }
}

TEST_CASE("convergence of the generalized ADMM with a constrained spline") {
  // Any firmly nonexpansive shrinkage makes the cost
  // under the recovered penalty eventually non-increasing, and iterates
  // contract.
  const LevyModel model{LevyKind::CompoundPoisson, 0.6};
  const SignalBatch batch = make_batch(model, 100, 1, 1.0, 15);
  const std::vector<double>& y = batch.noisy[0];

  Rng rng(16);
  const int m_half = 24;
  const double delta = 0.5;
  std::vector<double> z(m_half);
  for (double& zi : z) zi = 6.0 * (rng.uniform01() - 0.5);
  const ConstraintSet S{delta, m_half, SplineMode::Antisymmetric};
  const ShrinkageSpline spline(3, delta, m_half, SplineMode::Antisymmetric,
                               project_to_S(z, S, 1e-12));
  REQUIRE(check_firmly_nonexpansive(spline, 2048).ok);

  std::vector<double> grid;
  for (double v = -14.0; v <= 14.0 + 1e-9; v += 1e-3) grid.push_back(v);
  const PenaltyCurve phi = recover_penalty(spline, grid);

  const AdmmConfig cfg{2.0, 2000, false, true};
  const TridiagFactorization fact = factorize(y.size(), cfg.mu);
  const AdmmTrace tr = admm_run(y, SplineShrinkage(spline), cfg, fact);

  std::vector<double> costs;
  costs.reserve(tr.x_per_iter.size());
  for (const auto& x : tr.x_per_iter) costs.push_back(cost_eval(x, y, phi));

  for (std::size_t k = 21; k < costs.size(); ++k)
    CHECK(costs[k] <= costs[k - 1] + 1e-8);

  double step_norm = 0.0;
  const auto& last = tr.x_per_iter.back();
  const auto& prev = tr.x_per_iter[tr.x_per_iter.size() - 2];
  for (std::size_t i = 0; i < last.size(); ++i)
    step_norm += (last[i] - prev[i]) * (last[i] - prev[i]);
  CHECK(std::sqrt(step_norm) < 1e-8);
}
