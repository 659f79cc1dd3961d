#include "manifold_approx/codec.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <stdexcept>

#include "manifold_approx/numerics.hpp"

namespace mfa {

namespace {

void check_degrees(const HarmonicBasis& basis, int L) {
  if (L < 1 || L > basis.max_degree()) {
    throw std::invalid_argument("requested " + std::to_string(L) +
                                " degrees from a basis with " +
                                std::to_string(basis.max_degree()));
  }
}

void check_sphere2(const LabeledDataset& data) {
  if (data.ambient_dimension() != 2) {
    throw std::invalid_argument("harmonic codec needs data on S^2, got S^" +
                                std::to_string(data.ambient_dimension()));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// HarmonicBasis

HarmonicBasis::HarmonicBasis(int max_degree) : max_degree_(max_degree) {
  if (max_degree < 1) throw std::invalid_argument("HarmonicBasis: max_degree must be >= 1");
}

void HarmonicBasis::eval_into(std::span<const double> x, int degrees,
                              std::span<double> out) const {
  if (x.size() != 3) throw std::invalid_argument("HarmonicBasis: points must be in R^3");
  if (degrees < 0 || degrees > max_degree_) {
    throw std::invalid_argument("HarmonicBasis: degree count out of range");
  }
  if (out.size() != static_cast<std::size_t>(flat_size(degrees))) {
    throw std::invalid_argument("HarmonicBasis: output size mismatch");
  }
  if (degrees == 0) return;

  const double z = std::clamp(x[2], -1.0, 1.0);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double phi = std::atan2(x[1], x[0]);
  const int lmax = degrees - 1;

  // Fully normalized associated Legendre values, pbar(l, m) with
  // mean-square 1 over the sphere for m = 0 and 1/2 for m > 0.
  std::vector<double> pbar(static_cast<std::size_t>(degrees) * degrees, 0.0);
  auto P = [&](int l, int m) -> double& { return pbar[l * degrees + m]; };
  P(0, 0) = 1.0;
  for (int m = 1; m <= lmax; ++m) {
    P(m, m) = s * std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * P(m - 1, m - 1);
  }
  for (int m = 0; m < lmax; ++m) P(m + 1, m) = std::sqrt(2.0 * m + 3.0) * z * P(m, m);
  for (int m = 0; m <= lmax; ++m) {
    for (int l = m + 2; l <= lmax; ++l) {
      const double ll = l, mm = m;
      const double a = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - mm * mm));
      const double b = std::sqrt(((ll - 1.0) * (ll - 1.0) - mm * mm) /
                                 (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
      P(l, m) = a * (z * P(l - 1, m) - b * P(l - 2, m));
    }
  }

  const double root2 = std::sqrt(2.0);
  for (int l = 0; l <= lmax; ++l) {
    for (int m = -l; m <= l; ++m) {
      const int am = std::abs(m);
      double v = P(l, am);
      if (m > 0) v *= root2 * std::cos(am * phi);
      if (m < 0) v *= root2 * std::sin(am * phi);
      out[flat_index(l, m + l + 1)] = v;
    }
  }
}

std::vector<double> HarmonicBasis::eval(std::span<const double> x, int degrees) const {
  std::vector<double> out(static_cast<std::size_t>(flat_size(degrees)));
  eval_into(x, degrees, out);
  return out;
}

// ---------------------------------------------------------------------------
// Connection coefficients and decoder weights

ConnectionTable connection_coeffs(int d2, int d1, int n) {
  if (d1 < 1 || d2 < 1) throw std::invalid_argument("connection_coeffs: dimensions must be >= 1");
  if (n < 0) throw std::invalid_argument("connection_coeffs: n must be >= 0");

  const QuadratureRule rule = gauss_jacobi_rule(d2, n + 2);
  const UltrasphericalFamily target(d1, n + 1);
  const UltrasphericalFamily base(d2, n + 1);

  ConnectionTable table;
  table.d1 = d1;
  table.d2 = d2;
  table.coeffs = Eigen::MatrixXd::Zero(n + 1, n + 1);

  std::vector<double> pt(static_cast<std::size_t>(n) + 1), pb(static_cast<std::size_t>(n) + 1);
  for (std::size_t k = 0; k < rule.size(); ++k) {
    target.eval_into(rule.nodes[k], pt);
    base.eval_into(rule.nodes[k], pb);
    for (int i = 0; i <= n; ++i) {
      for (int l = i % 2; l <= i; l += 2) {
        table.coeffs(l, i) += rule.weights[k] * pt[i] * pb[l];
      }
    }
  }
  return table;
}

GammaTable gamma_coeffs(int n, int q, int ambient) {
  if (n < 1) throw std::invalid_argument("gamma_coeffs: n must be >= 1");
  if (q < 1 || q > ambient) throw std::invalid_argument("gamma_coeffs: need 1 <= q <= Q");

  const ConnectionTable c = connection_coeffs(ambient, q, n);
  const double prefactor = surface_volume_ratio(q) / surface_volume_ratio(ambient);

  GammaTable table;
  table.n = n;
  table.q = q;
  table.ambient = ambient;
  table.values.assign(static_cast<std::size_t>(n) + 1, 0.0);
  for (int l = 0; l <= n; ++l) {
    double sum = 0.0;
    for (int i = l; i <= n; ++i) {
      const double h = cutoff_eval(static_cast<double>(i) / n);
      if (h == 0.0) continue;
      sum += h * ultra_at_one(q, i) * c.coeffs(l, i);
    }
    table.values[l] = prefactor * sum / ultra_at_one(ambient, l);
  }
  return table;
}

// ---------------------------------------------------------------------------
// Encode / decode

HarmonicEncoding encode(const LabeledDataset& data, const HarmonicBasis& basis, int L) {
  check_sphere2(data);
  check_degrees(basis, L);
  if (data.label_width() != 1) throw std::invalid_argument("encode expects scalar labels");

  const int size = HarmonicBasis::flat_size(L);
  std::vector<double> sum(static_cast<std::size_t>(size), 0.0);
  std::vector<double> carry(sum.size(), 0.0);
  std::vector<double> y(sum.size());
  for (Eigen::Index j = 0; j < data.size(); ++j) {
    basis.eval_into(std::span<const double>(data.points().data() + 3 * j, 3), L, y);
    const double z = data.labels()(j, 0);
    for (int i = 0; i < size; ++i) {
      const double v = z * y[i];
      const double t = sum[i] + v;
      carry[i] += std::abs(sum[i]) >= std::abs(v) ? (sum[i] - t) + v : (v - t) + sum[i];
      sum[i] = t;
    }
  }

  HarmonicEncoding enc;
  enc.degrees = L;
  enc.samples = data.size();
  enc.coefficients.resize(sum.size());
  const double inv_m = 1.0 / static_cast<double>(data.size());
  for (int i = 0; i < size; ++i) enc.coefficients[i] = (sum[i] + carry[i]) * inv_m;
  return enc;
}

double decode(const HarmonicEncoding& enc, const GammaTable& gamma,
              const HarmonicBasis& basis, std::span<const double> x) {
  if (gamma.ambient != basis.ambient_dimension()) {
    throw std::invalid_argument("decode: decoder weights built for another ambient sphere");
  }
  if (enc.coefficients.size() != static_cast<std::size_t>(HarmonicBasis::flat_size(enc.degrees))) {
    throw std::invalid_argument("decode: encoding table has the wrong size");
  }
  if (enc.degrees < gamma.n) {
    throw std::invalid_argument("decode: encoding has " + std::to_string(enc.degrees) +
                                " degrees, decoder needs " + std::to_string(gamma.n));
  }
  const int degrees = std::min(enc.degrees, gamma.n + 1);
  const std::vector<double> y = basis.eval(x, degrees);
  double total = 0.0;
  for (int l = 0; l < degrees; ++l) {
    double inner = 0.0;
    for (int k = 1; k <= HarmonicBasis::degree_dimension(l); ++k) {
      const int idx = HarmonicBasis::flat_index(l, k);
      inner += enc.coefficients[idx] * y[idx];
    }
    total += gamma.at(l) * inner;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Gram matrix and parsimony

Eigen::MatrixXd gram_matrix(const LabeledDataset& data, const HarmonicBasis& basis, int L,
                            std::span<const double> weights) {
  check_sphere2(data);
  check_degrees(basis, L);
  const Eigen::Index m = data.size();
  if (!weights.empty() && static_cast<Eigen::Index>(weights.size()) != m) {
    throw std::invalid_argument("gram_matrix: one weight per sample required");
  }
  const int size = HarmonicBasis::flat_size(L);
  Eigen::MatrixXd values(m, size);
  std::vector<double> y(static_cast<std::size_t>(size));
  for (Eigen::Index j = 0; j < m; ++j) {
    basis.eval_into(std::span<const double>(data.points().data() + 3 * j, 3), L, y);
    const double w = weights.empty() ? 1.0 / static_cast<double>(m) : weights[j];
    const double root = std::sqrt(std::abs(w));
    for (int i = 0; i < size; ++i) values(j, i) = root * y[i];
  }
  Eigen::MatrixXd g = values.transpose() * values;
  // Exact symmetry regardless of the product's summation order.
  return 0.5 * (g + g.transpose());
}

std::vector<int> parsimonious_basis(const Eigen::MatrixXd& gram, double threshold) {
  if (gram.rows() != gram.cols()) throw std::invalid_argument("Gram matrix must be square");
  if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be positive");
  const Eigen::Index size = gram.rows();
  if (size == 0) return {};

  const double cutoff = threshold * gram.diagonal().maxCoeff();
  std::vector<int> kept;
  // Rows of the partial Cholesky factor for the kept indices.
  std::vector<Eigen::VectorXd> factor;
  for (Eigen::Index i = 0; i < size; ++i) {
    Eigen::VectorXd row(static_cast<Eigen::Index>(kept.size()));
    double residual = gram(i, i);
    for (std::size_t s = 0; s < kept.size(); ++s) {
      double v = gram(i, kept[s]);
      for (std::size_t t = 0; t < s; ++t) v -= row[t] * factor[s][t];
      v /= factor[s][s];
      row[s] = v;
      residual -= v * v;
    }
    if (residual > cutoff) {
      row.conservativeResize(row.size() + 1);
      row[row.size() - 1] = std::sqrt(residual);
      factor.push_back(std::move(row));
      kept.push_back(static_cast<int>(i));
    }
  }
  return kept;
}

// ---------------------------------------------------------------------------
// JSON

std::string to_json(const EncodingDocument& doc) {
  nlohmann::ordered_json j;
  j["Q"] = doc.ambient;
  j["q"] = doc.q;
  j["n"] = doc.n;
  j["L"] = doc.encoding.degrees;
  j["coefficients"] = doc.encoding.coefficients;
  return j.dump(2) + "\n";
}

EncodingDocument encoding_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("encoding JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("encoding JSON: expected an object");
  for (const char* key : {"Q", "q", "n", "L", "coefficients"}) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("encoding JSON: missing ") + key);
  }
  EncodingDocument doc;
  try {
    doc.ambient = j.at("Q").get<int>();
    doc.q = j.at("q").get<int>();
    doc.n = j.at("n").get<int>();
    doc.encoding.degrees = j.at("L").get<int>();
    doc.encoding.coefficients = j.at("coefficients").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("encoding JSON: ") + e.what());
  }
  if (doc.ambient != 2) throw std::invalid_argument("encoding JSON: only Q = 2 is supported");
  if (doc.q < 1 || doc.q > doc.ambient || doc.n < 1 || doc.encoding.degrees < 1) {
    throw std::invalid_argument("encoding JSON: parameters out of range");
  }
  if (doc.encoding.coefficients.size() !=
      static_cast<std::size_t>(HarmonicBasis::flat_size(doc.encoding.degrees))) {
    throw std::invalid_argument("encoding JSON: coefficient count does not match L");
  }
  return doc;
}

}  // namespace mfa
