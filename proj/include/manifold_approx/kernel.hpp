#pragma once

#include <span>
#include <vector>

#include "manifold_approx/numerics.hpp"

namespace mfa {

/// Localized spherical-polynomial kernel
///
///     Phi_{n,q}(t) = sum_{l=0}^{n} c_l p_{q,l}(t),
///     c_l = (omega_q / omega_{q-1}) h(l/n) p_{q,l}(1),
///
/// a filtered sum of the reproducing kernels of the degree-l harmonic spaces
/// on S^q. Since h(1) = 0 the top coefficient is identically zero and the
/// polynomial has degree < n. Coefficients are fixed at construction and
/// evaluation uses Clenshaw's backward recurrence (O(n) per point).
class LocalizedKernel {
 public:
  LocalizedKernel(int n, int q);

  int degree_bound() const { return n_; }
  int dimension() const { return q_; }

  /// c_0 .. c_n (c_n == 0).
  std::span<const double> coefficients() const { return coeffs_; }

  /// Phi(t) via Clenshaw. Throws std::domain_error if |t| > 1.
  double operator()(double t) const;

  /// Phi(t) for t already known to lie in [-1, 1]; no range check.
  double eval_unchecked(double t) const;

  /// Phi(1), the peak value.
  double peak() const { return peak_; }

  /// Kernel with every coefficient multiplied by `factor`.
  LocalizedKernel scaled(double factor) const;

  const UltrasphericalFamily& family() const { return family_; }

 private:
  int n_;
  int q_;
  UltrasphericalFamily family_;
  std::vector<double> coeffs_;
  // Clenshaw factors: alpha_[l] = 1 / a_{l+1}, beta_[l] = a_l / a_{l+1}.
  std::vector<double> alpha_;
  std::vector<double> beta_;
  double peak_ = 0.0;
};

LocalizedKernel build_kernel(int n, int q);

/// Phi(t) with argument checking; thin alias for kernel(t).
double kernel_eval(const LocalizedKernel& kernel, double t);

/// Phi(cos theta) for each angle (ascending, in [0, pi]).
std::vector<double> kernel_profile(const LocalizedKernel& kernel,
                                   std::span<const double> angles);

}  // namespace mfa
