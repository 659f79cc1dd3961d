#pragma once

#include <Eigen/Core>
#include <functional>
#include <span>
#include <vector>

#include "manifold_approx/kernel.hpp"
#include "manifold_approx/numerics.hpp"

namespace mfa {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Samples y_j on S^Q (one unit vector per row) with labels z_j (one label
/// vector per row, common width).
class LabeledDataset {
 public:
  /// Throws std::invalid_argument if shapes disagree, M == 0, or any point
  /// is off the unit sphere by more than 1e-9.
  LabeledDataset(RowMatrix points, RowMatrix labels);

  /// Dataset with every label equal to 1 (density estimation).
  static LabeledDataset unlabeled(RowMatrix points);

  Eigen::Index size() const { return points_.rows(); }
  int ambient_dimension() const { return static_cast<int>(points_.cols()) - 1; }
  Eigen::Index label_width() const { return labels_.cols(); }

  const RowMatrix& points() const { return points_; }
  const RowMatrix& labels() const { return labels_; }

 private:
  RowMatrix points_;
  RowMatrix labels_;
};

struct EstimatorConfig {
  LocalizedKernel kernel;
  bool normalize = false;  ///< true selects the quotient form
};

/// Raw one-shot estimate (1/M) sum_j z_j Phi(x . y_j) of f * f0.
/// Requires cfg.normalize == false and |x| == 1 within 1e-9.
Eigen::VectorXd f_hat(const LabeledDataset& data, const EstimatorConfig& cfg,
                      std::span<const double> x);

/// |(1/M) sum_j Phi(x . y_j)|, the density estimate of f0. Labels are ignored.
double density_estimate(const LabeledDataset& data, const EstimatorConfig& cfg,
                        std::span<const double> x);

/// sum_j z_j Phi(x . y_j) / sum_j Phi(x . y_j), an estimate of f itself.
/// Requires cfg.normalize == true. Throws DegenerateDenominatorError when
/// |sum_j Phi| < 1e-8 * M * Phi(1).
Eigen::VectorXd quotient_estimate(const LabeledDataset& data, const EstimatorConfig& cfg,
                                  std::span<const double> x);

/// Outcome of evaluating an estimator over many points.
struct GridEstimate {
  RowMatrix values;            ///< one row per evaluation point
  std::vector<bool> degenerate;  ///< quotient points whose denominator was rejected
  std::size_t degenerate_count = 0;
};

/// Evaluates f_hat or quotient_estimate (per cfg.normalize) at each row of
/// `xs`, splitting the rows over `threads` workers (0 = hardware count).
/// Results are identical to sequential evaluation. Degenerate quotient
/// points are flagged and their row left as NaN instead of throwing.
GridEstimate estimate_grid(const LabeledDataset& data, const EstimatorConfig& cfg,
                           const RowMatrix& xs, unsigned threads = 0);

/// Quadrature image of the integral reconstruction operator,
/// sum_k w_k Phi(x . y_k) f(y_k). `values[k]` is f at rule node k.
double integral_operator(std::span<const double> values, const SphericalRule& rule,
                         const LocalizedKernel& kernel, std::span<const double> x);

/// max_i |estimates_i - truth_i|.
double sup_error(std::span<const double> estimates, std::span<const double> truth);

/// Absolute per-point errors sorted ascending, and their log10.
struct SortedErrors {
  std::vector<double> errors;
  std::vector<double> log10_errors;
};

/// Sorts |estimates - truth| ascending and takes log10 (the floor for an
/// exact zero is log10 of the smallest positive double).
SortedErrors sorted_log_errors(std::span<const double> estimates,
                               std::span<const double> truth);

/// Sorts the given nonnegative errors and takes log10.
SortedErrors sorted_log_errors(std::vector<double> errors);

}  // namespace mfa
