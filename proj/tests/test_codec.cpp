#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "manifold_approx/codec.hpp"
#include "oracles.hpp"

using namespace mfa;
using std::numbers::pi;

namespace {

LabeledDataset sphere_data(int m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  RowMatrix pts(m, 3), labels(m, 1);
  for (int j = 0; j < m; ++j) {
    const double a = g(rng), b = g(rng), c = g(rng);
    const double r = std::sqrt(a * a + b * b + c * c);
    pts.row(j) << a / r, b / r, c / r;
    labels(j, 0) = std::cos(3.0 * a / r) + c / r;
  }
  return LabeledDataset(pts, labels);
}

}  // namespace

TEST_CASE("harmonics are orthonormal for the normalized measure") {
  const int L = 9;
  const HarmonicBasis basis(L);
  const SphericalRule rule = oracle::sphere(L + 2, 2 * L + 2);
  const int size = HarmonicBasis::flat_size(L);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(size, size);
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const std::vector<double> y = basis.eval(rule.point(k), L);
    const Eigen::Map<const Eigen::VectorXd> v(y.data(), size);
    g.noalias() += rule.weights[k] * v * v.transpose();
  }
  CHECK((g - Eigen::MatrixXd::Identity(size, size)).cwiseAbs().maxCoeff() < 1e-12);
  const double north[3] = {0.0, 0.0, 1.0};
  CHECK(basis.eval(north, 1)[0] == doctest::Approx(1.0));
}

TEST_CASE("ordering of orders within a degree") {
  const HarmonicBasis basis(3);
  CHECK(HarmonicBasis::flat_index(0, 1) == 0);
  CHECK(HarmonicBasis::flat_index(1, 1) == 1);
  CHECK(HarmonicBasis::flat_index(2, 5) == 8);
  // k = l + 1 is the zonal member; it depends on z alone.
  const double a[3] = {1.0, 0.0, 0.0};
  const double b[3] = {0.0, 1.0, 0.0};
  const auto ya = basis.eval(a, 3);
  const auto yb = basis.eval(b, 3);
  CHECK(ya[HarmonicBasis::flat_index(2, 3)] == doctest::Approx(yb[HarmonicBasis::flat_index(2, 3)]));
  // Negative orders are sine harmonics and vanish on the plane y = 0.
  CHECK(ya[HarmonicBasis::flat_index(1, 1)] == doctest::Approx(0.0).scale(1.0));
  CHECK(ya[HarmonicBasis::flat_index(2, 1)] == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("Gram rank of a great circle is 2L - 1") {
  for (int L : {2, 4, 7}) {
    RowMatrix pts(400, 3);
    for (int j = 0; j < 400; ++j) {
      const double t = 2.0 * pi * j / 400.0 + 0.01;
      pts.row(j) << std::cos(t), std::sin(t), 0.0;
    }
    const LabeledDataset data = LabeledDataset::unlabeled(pts);
    const Eigen::MatrixXd g = gram_matrix(data, HarmonicBasis(L), L);
    CHECK(static_cast<int>(parsimonious_basis(g).size()) == 2 * L - 1);
  }
  const LabeledDataset full = sphere_data(500, 1);
  const Eigen::MatrixXd g = gram_matrix(full, HarmonicBasis(5), 5);
  CHECK(parsimonious_basis(g).size() == 25u);
}

TEST_CASE("connection coefficients") {
  const int n = 20;
  const ConnectionTable t = connection_coeffs(2, 1, n);
  for (int i = 0; i <= n; ++i) {
    for (int l = 0; l <= n; ++l) {
      if (l > i || (i - l) % 2 == 1) CHECK(t.coeffs(l, i) == 0.0);
    }
  }
  const ConnectionTable same = connection_coeffs(3, 3, 10);
  CHECK((same.coeffs - Eigen::MatrixXd::Identity(11, 11)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("decoder weights for matching dimensions are the cutoff") {
  const GammaTable g = gamma_coeffs(16, 2, 2);
  for (int l = 0; l <= 16; ++l) CHECK(g.at(l) == doctest::Approx(cutoff_eval(l / 16.0)).scale(1.0));
  CHECK(g.at(17) == 0.0);
  CHECK_THROWS_AS(gamma_coeffs(16, 3, 2), std::invalid_argument);
}

TEST_CASE("encode, decode and JSON") {
  const LabeledDataset data = sphere_data(64, 2);
  const HarmonicBasis basis(9);
  const HarmonicEncoding enc = encode(data, basis, 9);
  CHECK(enc.coefficients.size() == 81u);
  CHECK(enc.samples == 64);
  double mean = 0.0;
  for (Eigen::Index j = 0; j < 64; ++j) mean += data.labels()(j, 0) / 64.0;
  CHECK(enc.at(0, 1) == doctest::Approx(mean));

  EncodingDocument doc{2, 1, 8, enc};
  const std::string text = to_json(doc);
  const EncodingDocument back = encoding_from_json(text);
  CHECK(back.encoding.coefficients == enc.coefficients);
  CHECK(to_json(back) == text);

  const GammaTable gamma = gamma_coeffs(12, 1, 2);
  const double x[3] = {0.0, 0.6, 0.8};
  CHECK_THROWS_AS(decode(enc, gamma, basis, x), std::invalid_argument);

  CHECK_THROWS_AS(encoding_from_json("{"), std::invalid_argument);
  CHECK_THROWS_AS(encoding_from_json("[1,2]"), std::invalid_argument);
  CHECK_THROWS_AS(encoding_from_json(R"({"Q":2,"q":1,"n":2,"L":2,"coefficients":[1]})"),
                  std::invalid_argument);
  RowMatrix wide(1, 2);
  wide << 1.0, 2.0;
  RowMatrix p(1, 3);
  p << 0, 0, 1;
  CHECK_THROWS_AS(encode(LabeledDataset(p, wide), basis, 3), std::invalid_argument);
}
