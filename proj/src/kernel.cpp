#include "manifold_approx/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mfa {

LocalizedKernel::LocalizedKernel(int n, int q)
    : n_(n), q_(q), family_(q, n + 2) {
  if (n < 1) throw std::invalid_argument("LocalizedKernel: n must be >= 1");
  if (q < 1) throw std::invalid_argument("LocalizedKernel: q must be >= 1");

  const double ratio = surface_volume_ratio(q);
  coeffs_.assign(static_cast<std::size_t>(n) + 1, 0.0);
  // l = n carries h(1) = 0 and is left at zero.
  for (int l = 0; l < n; ++l) {
    coeffs_[l] = ratio * cutoff_eval(static_cast<double>(l) / n) * ultra_at_one(q, l);
  }

  alpha_.resize(static_cast<std::size_t>(n) + 1);
  beta_.resize(static_cast<std::size_t>(n) + 1);
  for (int l = 0; l <= n; ++l) {
    const double next = family_.recurrence(l + 1);
    alpha_[l] = 1.0 / next;
    beta_[l] = l > 0 ? family_.recurrence(l) / next : 0.0;
  }
  peak_ = eval_unchecked(1.0);
}

double LocalizedKernel::eval_unchecked(double t) const {
  // b_l = c_l + t alpha_l b_{l+1} - beta_{l+1} b_{l+2}, result p_0 b_0.
  double b1 = 0.0;  // b_{l+1}
  double b2 = 0.0;  // b_{l+2}
  for (int l = n_ - 1; l >= 0; --l) {
    const double b0 = coeffs_[l] + t * alpha_[l] * b1 - beta_[l + 1] * b2;
    b2 = b1;
    b1 = b0;
  }
  return family_.seed() * b1;
}

double LocalizedKernel::operator()(double t) const {
  if (!(std::abs(t) <= 1.0)) {
    throw std::domain_error("kernel evaluation requires |t| <= 1, got " +
                            std::to_string(t));
  }
  return eval_unchecked(t);
}

LocalizedKernel LocalizedKernel::scaled(double factor) const {
  LocalizedKernel out = *this;
  for (double& c : out.coeffs_) c *= factor;
  out.peak_ *= factor;
  return out;
}

LocalizedKernel build_kernel(int n, int q) { return LocalizedKernel(n, q); }

double kernel_eval(const LocalizedKernel& kernel, double t) { return kernel(t); }

std::vector<double> kernel_profile(const LocalizedKernel& kernel,
                                   std::span<const double> angles) {
  if (!std::is_sorted(angles.begin(), angles.end())) {
    throw std::invalid_argument("kernel_profile: angles must be sorted ascending");
  }
  std::vector<double> out;
  out.reserve(angles.size());
  for (double theta : angles) {
    if (theta < 0.0 || theta > std::numbers::pi) {
      throw std::domain_error("kernel_profile: angle outside [0, pi]");
    }
    out.push_back(kernel.eval_unchecked(std::cos(theta)));
  }
  return out;
}

}  // namespace mfa
