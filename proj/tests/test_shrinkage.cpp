#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "proxlearn/admm.hpp"
#include "proxlearn/rng.hpp"
#include "proxlearn/shrinkage_spline.hpp"

using namespace proxlearn;

namespace {
double soft(double x, double tau) {
  const double a = std::abs(x) - tau;
  return a > 0.0 ? (x < 0.0 ? -a : a) : 0.0;
}
}  // namespace

TEST_CASE("identity coefficients reproduce the identity line") {
  for (const double delta : {0.5, 0.7}) {
    const ShrinkageSpline T = identity_spline(3, delta, 10, SplineMode::General);
    Rng rng(1);
    const double lim = T.knot_limit();
    for (int i = 0; i < 200; ++i) {
      const double x = 2.0 * lim * (rng.uniform01() - 0.5) * 0.999;
      CHECK(std::abs(T.eval(x) - x) < 1e-10);
    }
    CHECK(T.eval(2.0 * lim) == doctest::Approx(lim).epsilon(1e-12));  // clamp
  }
}

TEST_CASE("antisymmetric mode is bit-exact odd") {
  Rng rng(2);
  std::vector<double> c(8);
  for (double& ci : c) ci = rng.gaussian();
  const ShrinkageSpline T(3, 0.5, 8, SplineMode::Antisymmetric, c);
  CHECK(T.eval(0.0) == 0.0);
  CHECK(T.eval(-1.3) == -T.eval(1.3));
  for (int i = 0; i < 100; ++i) {
    const double x = 6.0 * (rng.uniform01() - 0.5);
    CHECK(T.eval(-x) == -T.eval(x));
    CHECK(T.deriv(-x) == T.deriv(x));
  }
}

TEST_CASE("spline derivative against central differences") {
  Rng rng(3);
  for (const SplineMode mode : {SplineMode::General, SplineMode::Antisymmetric}) {
    std::vector<double> c(mode == SplineMode::General ? 21 : 10);
    for (double& ci : c) ci = rng.gaussian();
    const ShrinkageSpline T(3, 0.4, 10, mode, c);
    const double lim = T.knot_limit() - 0.01;
    for (int i = 0; i < 100; ++i) {
      const double x = 2.0 * lim * (rng.uniform01() - 0.5);
      const double h = 1e-6;
      const double fd = (T.eval(x + h) - T.eval(x - h)) / (2.0 * h);
      CHECK(T.deriv(x) == doctest::Approx(fd).epsilon(1e-6));
    }
    // constant extension has zero derivative
    CHECK(T.deriv(T.knot_limit() + 1.0) == 0.0);
    CHECK(T.deriv(-T.knot_limit() - 1.0) == 0.0);
  }
}

TEST_CASE("basis matrix") {
  Rng rng(4);
  const ShrinkageSpline T = identity_spline(3, 0.5, 8, SplineMode::General);
  std::vector<double> v(40);
  const double lim = T.knot_limit();
  for (double& vi : v) vi = 2.0 * lim * (rng.uniform01() - 0.5) * 0.98;
  v.push_back(lim * 1.5);   // extension region
  v.push_back(-lim * 1.5);
  const DenseMatrix psi = basis_matrix(T, v);
  REQUIRE(psi.rows == static_cast<std::size_t>(T.coeff_count()));
  REQUIRE(psi.cols == v.size());

  SUBCASE("interior columns sum to one, extension columns are zero") {
    for (std::size_t j = 0; j < v.size(); ++j) {
      double sum = 0.0;
      for (std::size_t i = 0; i < psi.rows; ++i) sum += psi.at(i, j);
      if (std::abs(v[j]) <= lim)
        CHECK(std::abs(sum - 1.0) < 1e-12);
      else
        CHECK(sum == 0.0);
    }
  }

  SUBCASE("Psi^T c reproduces the spline values") {
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (std::abs(v[j]) > lim) continue;
      double acc = 0.0;
      for (std::size_t i = 0; i < psi.rows; ++i)
        acc += psi.at(i, j) * T.coeffs()[i];
      CHECK(std::abs(acc - T.eval(v[j])) < 1e-12);
    }
  }

  SUBCASE("columns have at most order+1 nonzeros") {
    for (std::size_t j = 0; j < v.size(); ++j) {
      int nonzeros = 0;
      for (std::size_t i = 0; i < psi.rows; ++i)
        if (psi.at(i, j) != 0.0) ++nonzeros;
      CHECK(nonzeros <= T.kernel_order() + 1);
    }
  }

  SUBCASE("antisymmetric basis matches the tilde expansion") {
    std::vector<double> c(8);
    for (double& ci : c) ci = rng.gaussian();
    const ShrinkageSpline A(3, 0.5, 8, SplineMode::Antisymmetric, c);
    std::vector<double> pts(30);
    for (double& p : pts) p = 2.0 * A.knot_limit() * (rng.uniform01() - 0.5) * 0.95;
    const DenseMatrix tilde = basis_matrix(A, pts);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < tilde.rows; ++i) {
        const double t = pts[j] / A.delta();
        const double want = kernel_eval(3, t - static_cast<int>(i) - 1) -
                            kernel_eval(3, t + static_cast<int>(i) + 1);
        CHECK(std::abs(tilde.at(i, j) - want) < 1e-13);
        acc += tilde.at(i, j) * c[i];
      }
      CHECK(std::abs(acc - A.eval(pts[j])) < 1e-12);
    }
  }
}

TEST_CASE("firm nonexpansiveness check") {
  const double delta = 0.5;
  const int m_half = 8;

  SUBCASE("soft-threshold-like coefficients pass") {
    std::vector<double> c(2 * m_half + 1);
    for (int m = -m_half; m <= m_half; ++m)
      c[static_cast<std::size_t>(m + m_half)] = std::max(0, m - 2) * delta;
    const ShrinkageSpline T(3, delta, m_half, SplineMode::General, c);
    const FirmReport rep = check_firmly_nonexpansive(T, 2048);
    CHECK(rep.ok);
  }

  SUBCASE("increment 2*delta fails") {
    const ShrinkageSpline T(1, delta, 2, SplineMode::Antisymmetric,
                            std::vector<double>{0.0, 2.0 * delta});
    const FirmReport rep = check_firmly_nonexpansive(T, 2048);
    CHECK_FALSE(rep.ok);
    CHECK(rep.max_increment == doctest::Approx(2.0 * delta));
  }

  SUBCASE("identity spline passes with unit slopes") {
    const ShrinkageSpline T = identity_spline(3, delta, m_half, SplineMode::General);
    const FirmReport rep = check_firmly_nonexpansive(T, 2048);
    CHECK(rep.ok);
    CHECK(rep.max_slope == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.min_slope >= -1e-9);
  }

  SUBCASE("grid_points < 2 throws") {
    const ShrinkageSpline T = identity_spline(3, delta, m_half, SplineMode::General);
    CHECK_THROWS_AS(check_firmly_nonexpansive(T, 1), std::invalid_argument);
  }
}

TEST_CASE("scale_operator") {
  const double tau = 1.0;
  const ShrinkageSpline T =
      soft_threshold_spline(3, 0.05, 200, tau, SplineMode::Antisymmetric);
  REQUIRE(check_firmly_nonexpansive(T, 4096).ok);

  SUBCASE("lambda = 1 returns T") {
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
      const double y = 12.0 * (rng.uniform01() - 0.5);
      CHECK(scale_operator(T, 1.0, y) == T.eval(y));
    }
  }

  SUBCASE("lambda = 0 is the identity") {
    Rng rng(6);
    for (int i = 0; i < 50; ++i) {
      const double y = 12.0 * (rng.uniform01() - 0.5);
      CHECK(scale_operator(T, 0.0, y) == y);
    }
  }

  SUBCASE("lambda = 2 reproduces soft threshold 2*tau") {
    for (const double y : {-5.0 * tau, 0.0, 3.0 * tau}) {
      CHECK(std::abs(scale_operator(T, 2.0, y, 1e-10) - soft(y, 2.0 * tau)) <
            1e-6);
    }
  }

  SUBCASE("negative lambda throws") {
    CHECK_THROWS_AS(scale_operator(T, -0.5, 1.0), std::invalid_argument);
  }

  SUBCASE("scaling composes multiplicatively") {
    const double root_tol = 1e-10;
    const ScaledShrinkage first(T, 1.7, root_tol);
    Rng rng(7);
    for (int i = 0; i < 25; ++i) {
      const double y = 10.0 * (rng.uniform01() - 0.5);
      // solve lambda2*v + (1-lambda2)*T_{1.7}(v) = y, then T_{1.7}(v)
      const double lambda2 = 1.9;
      double lo = y, hi = y, step = 1.0;
      const auto h = [&](double v) {
        return lambda2 * v + (1.0 - lambda2) * first.value(v);
      };
      while (h(lo) > y) { lo -= step; step *= 2.0; }
      step = 1.0;
      while (h(hi) < y) { hi += step; step *= 2.0; }
      double mid = 0.5 * (lo + hi);
      for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        if (std::abs(h(mid) - y) <= root_tol) break;
        (h(mid) < y ? lo : hi) = mid;
      }
      const double twice = first.value(mid);
      const double direct = scale_operator(T, 1.7 * 1.9, y, root_tol);
      CHECK(std::abs(twice - direct) < 10.0 * root_tol + 1e-8);
    }
  }
}

TEST_CASE("penalty recovery") {
  SUBCASE("identity spline has zero penalty") {
    const ShrinkageSpline T = identity_spline(3, 0.5, 10, SplineMode::General);
    std::vector<double> grid;
    for (double v = -3.0; v <= 3.0; v += 0.01) grid.push_back(v);
    const PenaltyCurve phi = recover_penalty(T, grid);
    for (const double p : phi.phi_values) CHECK(std::abs(p) < 1e-10);
  }

  SUBCASE("soft threshold recovers the absolute value") {
    // order-1 spline with knots on the kinks represents soft-thresholding
    // exactly; a tight cubic approximation is checked alongside.
    const ShrinkageSpline exact =
        soft_threshold_spline(1, 0.25, 40, 1.0, SplineMode::Antisymmetric);
    const ShrinkageSpline smooth =
        soft_threshold_spline(3, 2.5e-4, 14000, 1.0, SplineMode::Antisymmetric);
    std::vector<double> grid;
    for (double v = -3.0; v <= 3.0 + 1e-12; v += 1e-3) grid.push_back(v);
    for (const ShrinkageSpline* T : {&exact, &smooth}) {
      const PenaltyCurve phi = recover_penalty(*T, grid);
      for (std::size_t i = 0; i < phi.u_grid.size(); ++i) {
        CHECK(std::abs(phi.phi_values[i] - std::abs(phi.u_grid[i])) < 1e-3);
      }
    }
  }

  SUBCASE("antisymmetric splines give symmetric convex penalties") {
    Rng rng(8);
    std::vector<double> inc(10);
    std::vector<double> c(10);
    double acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      acc += 0.5 * rng.uniform01();  // increments in [0, delta]
      c[i] = acc;
    }
    const ShrinkageSpline T(3, 0.5, 10, SplineMode::Antisymmetric, c);
    REQUIRE(check_firmly_nonexpansive(T, 2048).ok);
    std::vector<double> grid;  // multiplicative, exactly mirror-symmetric
    for (int j = -4000; j <= 4000; ++j) grid.push_back(j * 1e-3);
    const PenaltyCurve phi = recover_penalty(T, grid);

    // symmetry: mirror grid points pair up exactly
    const std::size_t n = phi.u_grid.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double u = phi.u_grid[i];
      const double mirrored = phi.u_grid[n - 1 - i];
      CHECK(std::abs(u + mirrored) < 1e-9);
      CHECK(std::abs(phi.phi_values[i] - phi.phi_values[n - 1 - i]) < 1e-6);
    }

    // convexity: slopes nondecreasing
    for (std::size_t i = 2; i < n; ++i) {
      const double s1 = (phi.phi_values[i - 1] - phi.phi_values[i - 2]) /
                        (phi.u_grid[i - 1] - phi.u_grid[i - 2]);
      const double s2 = (phi.phi_values[i] - phi.phi_values[i - 1]) /
                        (phi.u_grid[i] - phi.u_grid[i - 1]);
      CHECK(s2 >= s1 - 1e-9);
    }
  }

  SUBCASE("anchored at zero") {
    const ShrinkageSpline T =
        soft_threshold_spline(3, 0.05, 100, 0.7, SplineMode::Antisymmetric);
    std::vector<double> grid;
    for (double v = -2.0; v <= 2.0 + 1e-12; v += 1e-3) grid.push_back(v);
    const PenaltyCurve phi = recover_penalty(T, grid);
    std::size_t nearest = 0;
    for (std::size_t i = 1; i < phi.u_grid.size(); ++i)
      if (std::abs(phi.u_grid[i]) < std::abs(phi.u_grid[nearest])) nearest = i;
    CHECK(phi.phi_values[nearest] == 0.0);
  }
}
