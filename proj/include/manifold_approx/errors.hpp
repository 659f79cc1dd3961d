#pragma once

#include <stdexcept>
#include <string>

namespace mfa {

/// A numerical procedure failed (solver non-convergence, degenerate
/// quotient). Distinct from argument errors, which use the std:: types.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The kernel-weighted denominator of the quotient estimator is too close
/// to zero at the requested point.
class DegenerateDenominatorError : public NumericalError {
 public:
  explicit DegenerateDenominatorError(double denominator)
      : NumericalError("degenerate quotient denominator: " +
                       std::to_string(denominator)),
        denominator_(denominator) {}

  double denominator() const { return denominator_; }

 private:
  double denominator_;
};

}  // namespace mfa
