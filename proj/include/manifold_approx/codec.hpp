#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

#include "manifold_approx/estimator.hpp"

namespace mfa {

/// Real spherical harmonics on S^2, orthonormal with respect to the
/// normalized surface measure (so Y_{0,1} == 1).
///
/// Degree l has 2l + 1 members indexed k = 1..2l+1, mapped to the order
/// m = k - l - 1 in -l..l: negative m are sin(|m| phi) harmonics, positive m
/// cos(m phi). The flattened index of (l, k) is l^2 + k - 1.
class HarmonicBasis {
 public:
  /// Basis for degrees l < max_degree.
  explicit HarmonicBasis(int max_degree);

  int ambient_dimension() const { return 2; }
  int max_degree() const { return max_degree_; }

  static int degree_dimension(int l) { return 2 * l + 1; }
  static int flat_size(int degrees) { return degrees * degrees; }
  static int flat_index(int l, int k) { return l * l + k - 1; }

  /// Y_{l,k}(x) for all l < degrees, in flattened order. `x` is a unit
  /// vector in R^3.
  std::vector<double> eval(std::span<const double> x, int degrees) const;
  void eval_into(std::span<const double> x, int degrees, std::span<double> out) const;

 private:
  int max_degree_;
};

/// Coefficients zhat(l, k) = (1/M) sum_j z_j Y_{l,k}(y_j), flattened.
struct HarmonicEncoding {
  int degrees = 0;  ///< L: number of degrees encoded (l < L)
  Eigen::Index samples = 0;
  std::vector<double> coefficients;

  double at(int l, int k) const { return coefficients[HarmonicBasis::flat_index(l, k)]; }
};

/// C(l, i) with p_{d1,i} = sum_{l <= i} C(l, i) p_{d2,l}.
struct ConnectionTable {
  int d1 = 0;
  int d2 = 0;
  Eigen::MatrixXd coeffs;  ///< (n+1) x (n+1), upper triangular
};

/// Decoder weights Gamma_{l,n}, l = 0..n.
struct GammaTable {
  int n = 0;
  int q = 0;
  int ambient = 0;
  std::vector<double> values;

  /// Gamma_{l,n}; zero for l > n.
  double at(int l) const {
    return l >= 0 && l < static_cast<int>(values.size()) ? values[l] : 0.0;
  }
};

/// Projection coefficients of the dimension-d1 family on the dimension-d2
/// family, computed with an (n+2)-point Gauss rule for d2. Entries of
/// opposite parity vanish identically and are stored as exact zeros.
ConnectionTable connection_coeffs(int d2, int d1, int n);

/// Encodes scalar labels of a dataset on S^2 against degrees l < L.
/// Throws std::invalid_argument on dimension or width mismatch.
HarmonicEncoding encode(const LabeledDataset& data, const HarmonicBasis& basis, int L);

/// Decoder weights for a kernel Phi_{n,q} and ambient sphere S^Q.
GammaTable gamma_coeffs(int n, int q, int ambient);

/// sum_l Gamma_{l,n} sum_k zhat(l, k) Y_{l,k}(x). Requires enc.degrees >= n
/// (the l = n weight is zero) and gamma.ambient == 2.
double decode(const HarmonicEncoding& enc, const GammaTable& gamma,
              const HarmonicBasis& basis, std::span<const double> x);

/// G_{ij} = sum_k w_k Y_i(y_k) Y_j(y_k) over the flattened basis of degrees
/// l < L. With no weights, w_k = 1/M.
Eigen::MatrixXd gram_matrix(const LabeledDataset& data, const HarmonicBasis& basis, int L,
                            std::span<const double> weights = {});

/// Greedy Gram-Schmidt on G in natural index order: index i is retained when
/// its residual diagonal after projecting out the retained set exceeds
/// threshold * max_i G_ii.
std::vector<int> parsimonious_basis(const Eigen::MatrixXd& gram, double threshold = 1e-8);

/// Flat JSON document {Q, q, n, L, coefficients} for an encoding together
/// with the kernel parameters needed to decode it.
struct EncodingDocument {
  int ambient = 2;
  int q = 0;
  int n = 0;
  HarmonicEncoding encoding;
};

std::string to_json(const EncodingDocument& doc);

/// Throws std::invalid_argument on malformed or inconsistent documents.
EncodingDocument encoding_from_json(const std::string& text);

}  // namespace mfa
