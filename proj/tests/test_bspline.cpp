#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "proxlearn/bspline.hpp"
#include "proxlearn/rng.hpp"

using namespace proxlearn;

TEST_CASE("cubic kernel values") {
  CHECK(kernel_eval(3, 0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(kernel_eval(3, 1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(kernel_eval(3, -1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(kernel_eval(3, 2.0) == 0.0);
  CHECK(kernel_eval(3, -2.0) == 0.0);
  CHECK(kernel_eval(3, 5.0) == 0.0);

  // closed form 2/3 - |x|^2 + |x|^3/2 on [0,1), 1/6 (2-|x|)^3 on [1,2)
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const double x = 4.0 * (rng.uniform01() - 0.5);
    const double a = std::abs(x);
    const double want = a < 1.0 ? 2.0 / 3.0 - a * a + a * a * a / 2.0
                      : a < 2.0 ? std::pow(2.0 - a, 3) / 6.0
                                : 0.0;
    CHECK(kernel_eval(3, x) == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("partition of unity") {
  Rng rng(2);
  for (const int order : {0, 1, 2, 3}) {
    for (int i = 0; i < 100; ++i) {
      const double x = 20.0 * (rng.uniform01() - 0.5);
      double sum = 0.0;
      const int lo = static_cast<int>(std::floor(x - kernel_support_radius(order))) - 1;
      const int hi = static_cast<int>(std::ceil(x + kernel_support_radius(order))) + 1;
      for (int m = lo; m <= hi; ++m) sum += kernel_eval(order, x - m);
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
    // knots and half-knots included
    for (const double x : {-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5}) {
      double sum = 0.0;
      for (int m = -6; m <= 6; ++m) sum += kernel_eval(order, x - m);
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("derivative equals finite difference of the lower order") {
  Rng rng(3);
  for (const int order : {1, 2, 3, 4}) {
    for (int i = 0; i < 100; ++i) {
      const double x = (order + 1.5) * (rng.uniform01() - 0.5);
      const double lhs = kernel_deriv(order, x);
      const double rhs =
          kernel_eval(order - 1, x + 0.5) - kernel_eval(order - 1, x - 0.5);
      CHECK(std::abs(lhs - rhs) < 1e-13);
    }
  }
}

TEST_CASE("derivative against central differences") {
  Rng rng(4);
  for (const int order : {2, 3}) {
    for (int i = 0; i < 100; ++i) {
      const double x = (order + 1.0) * (rng.uniform01() - 0.5);
      const double h = 1e-6;
      const double fd = (kernel_eval(order, x + h) - kernel_eval(order, x - h)) / (2.0 * h);
      CHECK(kernel_deriv(order, x) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("invalid orders throw") {
  CHECK_THROWS_AS(kernel_eval(-1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(kernel_deriv(0, 0.0), std::invalid_argument);
}
