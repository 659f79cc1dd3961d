#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "manifold_approx/kernel.hpp"

using namespace mfa;
using std::numbers::pi;

TEST_CASE("Clenshaw matches the naive sum") {
  for (int q = 1; q <= 4; ++q) {
    for (int n : {1, 2, 3, 8, 33, 128, 256}) {
      const LocalizedKernel kernel(n, q);
      const auto c = kernel.coefficients();
      REQUIRE(c.size() == static_cast<std::size_t>(n + 1));
      CHECK(c[n] == 0.0);
      for (int i = 0; i <= 1000; ++i) {
        const double t = -1.0 + 2.0 * i / 1000.0;
        const std::vector<double> p = kernel.family().eval_batch(n, t);
        double naive = 0.0;
        for (int l = 0; l <= n; ++l) naive += c[l] * p[l];
        CAPTURE(q);
        CAPTURE(n);
        CAPTURE(t);
        CHECK(std::abs(kernel(t) - naive) <= 1e-12 * std::max(1.0, kernel.peak()));
      }
    }
  }
}

TEST_CASE("known values") {
  CHECK(LocalizedKernel(4, 1)(1.0) == doctest::Approx(6.0));
  CHECK(LocalizedKernel(4, 1).peak() == doctest::Approx(6.0));
  const LocalizedKernel k(64, 2);
  CHECK(k.peak() == doctest::Approx(k(1.0)));
  CHECK(k.peak() == doctest::Approx(2362.39).epsilon(1e-5));
  const LocalizedKernel s = k.scaled(0.5);
  CHECK(s(0.3) == doctest::Approx(0.5 * k(0.3)));
}

// Tolerance pinned from an oracle run: max |Phi|/Phi(1) on [0.5, pi] is
// 3.75e-3 for n = 64, q = 2, attained at the band edge.
TEST_CASE("localization") {
  const LocalizedKernel k(64, 2);
  double worst = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double th = 0.5 + (pi - 0.5) * i / 4000.0;
    worst = std::max(worst, std::abs(k(std::cos(th))) / k.peak());
  }
  CHECK(worst <= 4e-3);

  double prev = INFINITY;
  for (int n : {16, 32, 64, 128}) {
    const double v = std::abs(LocalizedKernel(n, 2)(std::cos(0.4))) / (double(n) * n);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("Lipschitz bound scales like n^{q+1}") {
  for (int n : {8, 16, 32}) {
    const LocalizedKernel k(n, 1);
    double lip = 0.0;
    const int m = 20000;
    double prev = k(1.0);
    for (int i = 1; i <= m; ++i) {
      const double th = pi * i / m;
      const double v = k(std::cos(th));
      lip = std::max(lip, std::abs(v - prev) / (pi / m));
      prev = v;
    }
    CHECK(lip / (double(n) * n) <= 10.0);
  }
}

TEST_CASE("argument checking") {
  const LocalizedKernel k(8, 2);
  CHECK_THROWS_AS(k(1.5), std::domain_error);
  CHECK_THROWS_AS(kernel_eval(k, -1.01), std::domain_error);
  CHECK_THROWS_AS(LocalizedKernel(0, 2), std::invalid_argument);
  const std::vector<double> unsorted{0.5, 0.1};
  CHECK_THROWS_AS(kernel_profile(k, unsorted), std::invalid_argument);
  const std::vector<double> outside{0.0, 4.0};
  CHECK_THROWS_AS(kernel_profile(k, outside), std::domain_error);
  const std::vector<double> good{0.0, 1.0, pi};
  const std::vector<double> prof = kernel_profile(k, good);
  CHECK(prof[0] == doctest::Approx(k.peak()));
  CHECK(prof[2] == doctest::Approx(k(-1.0)));
}
