#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "manifold_approx/cli.hpp"
#include "manifold_approx/codec.hpp"
#include "manifold_approx/estimator.hpp"
#include "manifold_approx/kernel.hpp"
#include "manifold_approx/numerics.hpp"

namespace mfa::cli {

namespace {

CheckResult check(std::string name, double measured, double tolerance) {
  return {std::move(name), std::isfinite(measured) && measured <= tolerance, measured, tolerance};
}

double orthonormality_defect() {
  constexpr int kDegree = 32;
  double worst = 0.0;
  for (int q = 1; q <= 4; ++q) {
    const UltrasphericalFamily fam(q);
    const QuadratureRule rule = gauss_jacobi_rule(q, kDegree + 1);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(kDegree + 1, kDegree + 1);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const std::vector<double> p = fam.eval_batch(kDegree, rule.nodes[k]);
      const Eigen::Map<const Eigen::VectorXd> v(p.data(), kDegree + 1);
      g.noalias() += rule.weights[k] * v * v.transpose();
    }
    g -= Eigen::MatrixXd::Identity(kDegree + 1, kDegree + 1);
    worst = std::max(worst, g.cwiseAbs().maxCoeff());
  }
  return worst;
}

double endpoint_defect() {
  double worst = 0.0;
  for (int q = 1; q <= 6; ++q) {
    const UltrasphericalFamily fam(q);
    const std::vector<double> p = fam.eval_batch(200, 1.0);
    for (int l = 0; l <= 200; ++l) {
      const double exact = ultra_at_one(q, l);
      worst = std::max(worst, std::abs(p[l] - exact) / std::abs(exact));
    }
  }
  return worst;
}

double kernel_mass_defect() {
  double worst = 0.0;
  for (int q = 1; q <= 4; ++q) {
    for (int n : {8, 32, 128}) {
      const LocalizedKernel kernel(n, q);
      const QuadratureRule rule = gauss_jacobi_rule(q, n + 1);
      double mass = 0.0;
      for (std::size_t k = 0; k < rule.size(); ++k) mass += rule.weights[k] * kernel(rule.nodes[k]);
      worst = std::max(worst, std::abs(mass / surface_volume_ratio(q) - 1.0));
    }
  }
  return worst;
}

double circle_reproduction_defect() {
  constexpr int n = 16;
  const LocalizedKernel kernel(n, 1);
  const SphericalRule rule = circle_points(2 * n + 1);
  auto f = [](double t) { return 0.5 - std::cos(3.0 * t) + 0.25 * std::sin(8.0 * t); };
  std::vector<double> values(rule.size());
  for (std::size_t k = 0; k < rule.size(); ++k) {
    values[k] = f(std::atan2(rule.point(k)[1], rule.point(k)[0]));
  }
  double worst = 0.0;
  for (int i = 0; i < 97; ++i) {
    const double t = 2.0 * std::numbers::pi * i / 97.0;
    const std::array<double, 2> x{std::cos(t), std::sin(t)};
    worst = std::max(worst, std::abs(integral_operator(values, rule, kernel, x) - f(t)));
  }
  return worst;
}

double sphere_reproduction_defect() {
  constexpr int n = 12;
  const LocalizedKernel kernel(n, 2);
  const SphericalRule rule = sphere2_rule(n + 2, 2 * n + 2);
  auto f = [](std::span<const double> y) {
    return 1.0 + y[0] * y[1] - 2.0 * y[2] * y[2] * y[2] + y[0] * y[0] * y[1] * y[2];
  };
  std::vector<double> values(rule.size());
  for (std::size_t k = 0; k < rule.size(); ++k) values[k] = f(rule.point(k));
  double worst = 0.0;
  for (int i = 0; i < 40; ++i) {
    const double z = -0.95 + 1.9 * i / 39.0;
    const double phi = 0.7 * i;
    const double r = std::sqrt(1.0 - z * z);
    const std::array<double, 3> x{r * std::cos(phi), r * std::sin(phi), z};
    worst = std::max(worst, std::abs(integral_operator(values, rule, kernel, x) - f(x)));
  }
  return worst;
}

double codec_roundtrip_defect() {
  RowMatrix points(64, 3);
  RowMatrix labels(64, 1);
  for (int j = 0; j < 64; ++j) {
    const double z = -1.0 + (2.0 * j + 1.0) / 64.0;
    const double phi = 2.399963229728653 * j;
    const double r = std::sqrt(1.0 - z * z);
    points.row(j) << r * std::cos(phi), r * std::sin(phi), z;
    labels(j, 0) = std::sin(3.0 * z) + r * std::cos(phi);
  }
  const LabeledDataset data(std::move(points), std::move(labels));
  const HarmonicBasis basis(9);
  EncodingDocument doc;
  doc.q = 2;
  doc.n = 8;
  doc.encoding = encode(data, basis, 9);
  const EncodingDocument back = encoding_from_json(to_json(doc));
  if (back.q != doc.q || back.n != doc.n || back.encoding.degrees != doc.encoding.degrees ||
      back.encoding.coefficients.size() != doc.encoding.coefficients.size()) {
    return std::numeric_limits<double>::infinity();
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < doc.encoding.coefficients.size(); ++i) {
    worst = std::max(worst, std::abs(back.encoding.coefficients[i] - doc.encoding.coefficients[i]));
  }
  return worst;
}

double connection_defect() {
  constexpr int n = 24;
  double worst = 0.0;
  for (auto [d2, d1] : {std::pair{2, 1}, std::pair{2, 4}, std::pair{3, 1}}) {
    const ConnectionTable table = connection_coeffs(d2, d1, n);
    const UltrasphericalFamily from(d1);
    const UltrasphericalFamily to(d2);
    for (double t : {-0.9, -0.31, 0.0, 0.42, 0.77, 1.0}) {
      const std::vector<double> p1 = from.eval_batch(n, t);
      const std::vector<double> p2 = to.eval_batch(n, t);
      for (int i = 0; i <= n; ++i) {
        double sum = 0.0;
        for (int l = 0; l <= i; ++l) sum += table.coeffs(l, i) * p2[l];
        worst = std::max(worst, std::abs(sum - p1[i]) / std::max(1.0, std::abs(p1[i])));
      }
    }
  }
  return worst;
}

double quadrature_mass_defect() {
  double worst = 0.0;
  for (int q = 1; q <= 8; ++q) {
    for (int m : {1, 5, 40}) {
      const QuadratureRule rule = gauss_jacobi_rule(q, m);
      double mass = 0.0;
      for (double w : rule.weights) mass += w;
      worst = std::max(worst, std::abs(mass / surface_volume_ratio(q) - 1.0));
    }
  }
  for (const SphericalRule& rule : {circle_points(17), sphere2_rule(9, 18)}) {
    double mass = 0.0;
    for (double w : rule.weights) mass += w;
    worst = std::max(worst, std::abs(mass - 1.0));
  }
  return worst;
}

}  // namespace

std::vector<CheckResult> run_validation() {
  return {
      check("orthonormality", orthonormality_defect(), 1e-12),
      check("endpoint_closed_form", endpoint_defect(), 1e-10),
      check("kernel_mass", kernel_mass_defect(), 1e-11),
      check("circle_reproduction", circle_reproduction_defect(), 1e-12),
      check("sphere_reproduction", sphere_reproduction_defect(), 1e-12),
      check("codec_json_roundtrip", codec_roundtrip_defect(), 0.0),
      check("connection_reconstruction", connection_defect(), 1e-11),
      check("quadrature_mass", quadrature_mass_defect(), 1e-13),
  };
}

}  // namespace mfa::cli
