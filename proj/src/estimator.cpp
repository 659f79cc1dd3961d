#include "manifold_approx/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "manifold_approx/errors.hpp"

namespace mfa {

namespace {

constexpr double kUnitTolerance = 1e-9;
constexpr double kDenominatorFactor = 1e-8;

/// Neumaier-compensated running sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

void check_unit(std::span<const double> x, Eigen::Index dim) {
  if (static_cast<Eigen::Index>(x.size()) != dim) {
    throw std::invalid_argument("evaluation point has dimension " +
                                std::to_string(x.size()) + ", dataset expects " +
                                std::to_string(dim));
  }
  double norm2 = 0.0;
  for (double v : x) norm2 += v * v;
  if (std::abs(std::sqrt(norm2) - 1.0) > kUnitTolerance) {
    throw std::invalid_argument("evaluation point is not a unit vector");
  }
}

double clamped_dot(const double* a, const double* b, Eigen::Index dim) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) s += a[i] * b[i];
  return std::clamp(s, -1.0, 1.0);
}

/// Kernel-weighted label sums and the plain kernel sum at x.
struct KernelSums {
  std::vector<CompensatedSum> weighted;
  CompensatedSum mass;
};

KernelSums kernel_sums(const LabeledDataset& data, const LocalizedKernel& kernel,
                       const double* x, bool with_labels) {
  const Eigen::Index m = data.size();
  const Eigen::Index dim = data.points().cols();
  const Eigen::Index w = data.label_width();
  KernelSums sums;
  if (with_labels) sums.weighted.resize(static_cast<std::size_t>(w));
  const double* pts = data.points().data();
  const double* lab = data.labels().data();
  for (Eigen::Index j = 0; j < m; ++j) {
    const double phi = kernel.eval_unchecked(clamped_dot(x, pts + j * dim, dim));
    sums.mass.add(phi);
    if (with_labels) {
      for (Eigen::Index c = 0; c < w; ++c) sums.weighted[c].add(lab[j * w + c] * phi);
    }
  }
  return sums;
}

Eigen::VectorXd quotient_at(const LabeledDataset& data, const LocalizedKernel& kernel,
                            const double* x) {
  const KernelSums sums = kernel_sums(data, kernel, x, true);
  const double den = sums.mass.value();
  const double threshold =
      kDenominatorFactor * static_cast<double>(data.size()) * std::abs(kernel.peak());
  if (!(std::abs(den) >= threshold)) throw DegenerateDenominatorError(den);
  Eigen::VectorXd out(data.label_width());
  for (Eigen::Index c = 0; c < out.size(); ++c) out[c] = sums.weighted[c].value() / den;
  return out;
}

Eigen::VectorXd f_hat_at(const LabeledDataset& data, const LocalizedKernel& kernel,
                         const double* x) {
  const KernelSums sums = kernel_sums(data, kernel, x, true);
  Eigen::VectorXd out(data.label_width());
  const double inv_m = 1.0 / static_cast<double>(data.size());
  for (Eigen::Index c = 0; c < out.size(); ++c) out[c] = sums.weighted[c].value() * inv_m;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// LabeledDataset

LabeledDataset::LabeledDataset(RowMatrix points, RowMatrix labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
  if (points_.rows() < 1) throw std::invalid_argument("dataset needs at least one sample");
  if (points_.cols() < 2) {
    throw std::invalid_argument("points must live in R^{Q+1} with Q >= 1");
  }
  if (labels_.rows() != points_.rows()) {
    throw std::invalid_argument("points and labels disagree on sample count");
  }
  if (labels_.cols() < 1) throw std::invalid_argument("labels need width >= 1");
  for (Eigen::Index j = 0; j < points_.rows(); ++j) {
    if (std::abs(points_.row(j).norm() - 1.0) > kUnitTolerance) {
      throw std::invalid_argument("sample " + std::to_string(j) +
                                  " is not on the unit sphere");
    }
  }
}

LabeledDataset LabeledDataset::unlabeled(RowMatrix points) {
  const Eigen::Index m = points.rows();
  return LabeledDataset(std::move(points), RowMatrix::Ones(m, 1));
}

// ---------------------------------------------------------------------------
// Estimators

Eigen::VectorXd f_hat(const LabeledDataset& data, const EstimatorConfig& cfg,
                      std::span<const double> x) {
  if (cfg.normalize) {
    throw std::invalid_argument("f_hat requires a raw (non-normalized) configuration");
  }
  check_unit(x, data.points().cols());
  return f_hat_at(data, cfg.kernel, x.data());
}

double density_estimate(const LabeledDataset& data, const EstimatorConfig& cfg,
                        std::span<const double> x) {
  check_unit(x, data.points().cols());
  const KernelSums sums = kernel_sums(data, cfg.kernel, x.data(), false);
  return std::abs(sums.mass.value() / static_cast<double>(data.size()));
}

Eigen::VectorXd quotient_estimate(const LabeledDataset& data, const EstimatorConfig& cfg,
                                  std::span<const double> x) {
  if (!cfg.normalize) {
    throw std::invalid_argument("quotient_estimate requires a normalized configuration");
  }
  check_unit(x, data.points().cols());
  return quotient_at(data, cfg.kernel, x.data());
}

GridEstimate estimate_grid(const LabeledDataset& data, const EstimatorConfig& cfg,
                           const RowMatrix& xs, unsigned threads) {
  if (xs.cols() != data.points().cols()) {
    throw std::invalid_argument("evaluation points have the wrong dimension");
  }
  for (Eigen::Index i = 0; i < xs.rows(); ++i) {
    check_unit(std::span<const double>(xs.data() + i * xs.cols(),
                                       static_cast<std::size_t>(xs.cols())),
               xs.cols());
  }

  const Eigen::Index rows = xs.rows();
  GridEstimate out;
  out.values = RowMatrix::Constant(rows, data.label_width(),
                                   std::numeric_limits<double>::quiet_NaN());
  std::vector<char> flags(static_cast<std::size_t>(rows), 0);

  auto work = [&](Eigen::Index begin, Eigen::Index end) {
    for (Eigen::Index i = begin; i < end; ++i) {
      const double* x = xs.data() + i * xs.cols();
      if (cfg.normalize) {
        try {
          out.values.row(i) = quotient_at(data, cfg.kernel, x).transpose();
        } catch (const DegenerateDenominatorError&) {
          flags[i] = 1;
        }
      } else {
        out.values.row(i) = f_hat_at(data, cfg.kernel, x).transpose();
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<Eigen::Index>(threads, std::max<Eigen::Index>(rows, 1)));
  if (threads <= 1) {
    work(0, rows);
  } else {
    std::vector<std::thread> pool;
    const Eigen::Index chunk = (rows + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const Eigen::Index begin = t * chunk;
      const Eigen::Index end = std::min(rows, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  out.degenerate.assign(flags.begin(), flags.end());
  out.degenerate_count = static_cast<std::size_t>(std::count(flags.begin(), flags.end(), 1));
  return out;
}

double integral_operator(std::span<const double> values, const SphericalRule& rule,
                         const LocalizedKernel& kernel, std::span<const double> x) {
  if (values.size() != rule.size()) {
    throw std::invalid_argument("integral_operator: one value per rule node required");
  }
  if (static_cast<int>(x.size()) != rule.dim) {
    throw std::invalid_argument("integral_operator: point dimension mismatch");
  }
  CompensatedSum acc;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const double t = clamped_dot(x.data(), rule.point(k).data(), rule.dim);
    acc.add(rule.weights[k] * kernel.eval_unchecked(t) * values[k]);
  }
  return acc.value();
}

double sup_error(std::span<const double> estimates, std::span<const double> truth) {
  if (estimates.size() != truth.size()) {
    throw std::length_error("sup_error: length mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    worst = std::max(worst, std::abs(estimates[i] - truth[i]));
  }
  return worst;
}

SortedErrors sorted_log_errors(std::vector<double> errors) {
  std::sort(errors.begin(), errors.end());
  SortedErrors out;
  out.log10_errors.reserve(errors.size());
  for (double e : errors) {
    out.log10_errors.push_back(
        std::log10(std::max(e, std::numeric_limits<double>::denorm_min())));
  }
  out.errors = std::move(errors);
  return out;
}

SortedErrors sorted_log_errors(std::span<const double> estimates,
                               std::span<const double> truth) {
  if (estimates.size() != truth.size()) {
    throw std::length_error("sorted_log_errors: length mismatch");
  }
  std::vector<double> errors(estimates.size());
  for (std::size_t i = 0; i < errors.size(); ++i) {
    errors[i] = std::abs(estimates[i] - truth[i]);
  }
  return sorted_log_errors(std::move(errors));
}

}  // namespace mfa
