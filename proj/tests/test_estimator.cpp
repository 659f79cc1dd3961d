#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <random>

#include "manifold_approx/errors.hpp"
#include "manifold_approx/estimator.hpp"

using namespace mfa;
using std::numbers::pi;

namespace {

RowMatrix circle_points_at(const std::vector<double>& angles) {
  RowMatrix pts(static_cast<Eigen::Index>(angles.size()), 2);
  for (std::size_t j = 0; j < angles.size(); ++j) pts.row(j) << std::cos(angles[j]), std::sin(angles[j]);
  return pts;
}

LabeledDataset random_circle_data(int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0 * pi);
  std::vector<double> t(m);
  for (double& v : t) v = u(rng);
  RowMatrix labels(m, 2);
  for (int j = 0; j < m; ++j) labels.row(j) << std::sin(t[j]), 1.0 + std::cos(2.0 * t[j]);
  return LabeledDataset(circle_points_at(t), labels);
}

}  // namespace

TEST_CASE("dataset validation") {
  RowMatrix pts(2, 3);
  pts << 1, 0, 0, 0, 1, 0;
  CHECK_NOTHROW(LabeledDataset::unlabeled(pts));
  RowMatrix off = pts;
  off(1, 1) = 1.001;
  CHECK_THROWS_AS(LabeledDataset::unlabeled(off), std::invalid_argument);
  CHECK_THROWS_AS(LabeledDataset(pts, RowMatrix(3, 1)), std::invalid_argument);
  CHECK_THROWS_AS(LabeledDataset::unlabeled(RowMatrix(0, 3)), std::invalid_argument);
  const LabeledDataset d = LabeledDataset::unlabeled(pts);
  CHECK(d.ambient_dimension() == 2);
  CHECK(d.label_width() == 1);
  CHECK(d.labels()(1, 0) == 1.0);
}

TEST_CASE("f_hat equals the direct kernel sum") {
  const LabeledDataset data = random_circle_data(200, 3);
  const EstimatorConfig cfg{LocalizedKernel(12, 1), false};
  const double x[2] = {std::cos(0.7), std::sin(0.7)};
  const Eigen::VectorXd got = f_hat(data, cfg, x);
  REQUIRE(got.size() == 2);
  for (int c = 0; c < 2; ++c) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < data.size(); ++j) {
      const double t = data.points()(j, 0) * x[0] + data.points()(j, 1) * x[1];
      s += data.labels()(j, c) * cfg.kernel(std::clamp(t, -1.0, 1.0));
    }
    CHECK(got(c) == doctest::Approx(s / data.size()).epsilon(1e-13));
  }
  CHECK_THROWS_AS(f_hat(data, EstimatorConfig{cfg.kernel, true}, x), std::invalid_argument);
  const double bad[2] = {1.0, 0.1};
  CHECK_THROWS_AS(f_hat(data, cfg, bad), std::invalid_argument);
}

TEST_CASE("quotient of constant labels is the constant") {
  const std::vector<double> t{0.1, 0.4, 0.5, 1.1, 2.0, 3.0};
  RowMatrix labels = RowMatrix::Constant(6, 1, 2.5);
  const LabeledDataset data(circle_points_at(t), labels);
  const EstimatorConfig cfg{LocalizedKernel(4, 1), true};
  const double x[2] = {std::cos(0.3), std::sin(0.3)};
  CHECK(quotient_estimate(data, cfg, x)(0) == doctest::Approx(2.5));
  CHECK_THROWS_AS(quotient_estimate(data, EstimatorConfig{cfg.kernel, false}, x),
                  std::invalid_argument);
}

TEST_CASE("density estimate is |mean Phi|") {
  const LabeledDataset data = random_circle_data(50, 9);
  const EstimatorConfig cfg{LocalizedKernel(6, 1), false};
  const double x[2] = {0.0, 1.0};
  double s = 0.0;
  for (Eigen::Index j = 0; j < data.size(); ++j) s += cfg.kernel(std::clamp(data.points()(j, 1), -1.0, 1.0));
  CHECK(density_estimate(data, cfg, x) == doctest::Approx(std::abs(s / 50)));
}

TEST_CASE("degenerate denominator") {
  const LabeledDataset data(circle_points_at({0.0}), RowMatrix::Constant(1, 1, 1.0));
  const EstimatorConfig cfg{LocalizedKernel(64, 1), true};
  const double x[2] = {std::cos(3.0), std::sin(3.0)};
  CHECK_THROWS_AS(quotient_estimate(data, cfg, x), DegenerateDenominatorError);
  try {
    quotient_estimate(data, cfg, x);
  } catch (const DegenerateDenominatorError& e) {
    CHECK(std::abs(e.denominator()) < 1e-8 * cfg.kernel.peak());
  }

  RowMatrix xs(2, 2);
  xs << std::cos(3.0), std::sin(3.0), 1.0, 0.0;
  const GridEstimate g = estimate_grid(data, cfg, xs, 1);
  CHECK(g.degenerate_count == 1);
  CHECK(g.degenerate[0]);
  CHECK(std::isnan(g.values(0, 0)));
  CHECK(g.values(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("threaded grid evaluation is bitwise identical") {
  const LabeledDataset data = random_circle_data(3000, 5);
  RowMatrix xs(257, 2);
  for (int i = 0; i < 257; ++i) xs.row(i) << std::cos(0.03 * i), std::sin(0.03 * i);
  for (bool normalize : {false, true}) {
    const EstimatorConfig cfg{LocalizedKernel(20, 1), normalize};
    const GridEstimate serial = estimate_grid(data, cfg, xs, 1);
    for (unsigned th : {2u, 3u, 8u}) {
      const GridEstimate par = estimate_grid(data, cfg, xs, th);
      CHECK(std::memcmp(serial.values.data(), par.values.data(),
                        sizeof(double) * serial.values.size()) == 0);
    }
  }
}

TEST_CASE("error utilities") {
  const std::vector<double> est{1.0, 2.0, 4.0};
  const std::vector<double> truth{1.0, 2.5, 3.0};
  CHECK(sup_error(est, truth) == 1.0);
  CHECK_THROWS_AS(sup_error(est, std::vector<double>{1.0}), std::length_error);
  const SortedErrors s = sorted_log_errors(est, truth);
  CHECK(s.errors == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(s.log10_errors[0] == std::log10(std::numeric_limits<double>::denorm_min()));
  CHECK(s.log10_errors[2] == 0.0);
}
