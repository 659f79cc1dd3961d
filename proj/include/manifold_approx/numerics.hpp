#pragma once

#include <span>
#include <vector>

namespace mfa {

/// Surface area of the unit sphere S^q embedded in R^{q+1}.
///
/// surface_volume(0) == 2 (two points), surface_volume(1) == 2*pi,
/// surface_volume(2) == 4*pi.
double surface_volume(int q);

/// Ratio omega_q / omega_{q-1}, i.e. the total mass of the weight
/// (1 - x^2)^{q/2 - 1} on [-1, 1].
double surface_volume_ratio(int q);

/// Closed form of p_{q,n}(1) for the orthonormal ultraspherical family.
double ultra_at_one(int q, int n);

/// Orthonormal ultraspherical polynomials p_{q,l} on [-1, 1] with respect
/// to the weight (1 - x^2)^{q/2 - 1}.
///
/// The family satisfies the symmetric three-term recurrence
///
///     x p_l = a_{l+1} p_{l+1} + a_l p_{l-1},
///
/// seeded with the constant p_{q,0} and p_{q,-1} = 0. The q = 1 member
/// (Chebyshev of the first kind) is evaluated in closed trigonometric form
/// since the generic coefficient formula degenerates at l = 1.
///
/// Coefficients up to `cached_degree` are tabulated at construction; higher
/// degrees are computed on demand without touching the table.
class UltrasphericalFamily {
 public:
  explicit UltrasphericalFamily(int q, int cached_degree = 64);

  int dimension() const { return q_; }

  /// p_{q,0}, the constant member.
  double seed() const { return seed_; }

  /// Off-diagonal recurrence coefficient a_l for l >= 1.
  double recurrence(int l) const;

  /// p_{q,l}(t) for l = 0..nmax.
  std::vector<double> eval_batch(int nmax, double t) const;

  /// Same as eval_batch, writing into `out` (size nmax + 1).
  void eval_into(double t, std::span<double> out) const;

  /// p_{q,n}(t) for a single degree.
  double eval(int n, double t) const;

 private:
  static double coefficient(int q, int l);

  int q_;
  double seed_;
  std::vector<double> a_;  // a_[l] for l = 0..cached_degree, a_[0] unused
};

/// Infinitely smooth cutoff: 1 on [0, 1/2], 0 on [1, inf), monotone
/// transition in between built from exp(-1/s) bumps. h(3/4) == 1/2.
double cutoff_eval(double t);

/// Interval quadrature rule on [-1, 1] (or angles on the circle, see
/// circle_rule). Weights integrate against the documented measure.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int exactness = 0;  ///< highest polynomial degree integrated exactly

  std::size_t size() const { return nodes.size(); }
};

/// Gauss rule with m nodes for the weight (1 - x^2)^{q/2 - 1} on [-1, 1];
/// exact for polynomials of degree <= 2m - 1. Built by the Golub-Welsch
/// eigenvalue method on the Jacobi matrix of the orthonormal family, with
/// weights taken from the Christoffel function.
///
/// Throws mfa::NumericalError if the eigen-solver fails.
QuadratureRule gauss_jacobi_rule(int q, int m);

/// Equispaced rule on the circle. Nodes are angles 2*pi*k/m, weights 1/m
/// (normalized measure); exact for trigonometric polynomials of degree < m.
QuadratureRule circle_rule(int m);

/// Rule on a sphere S^Q given as unit vectors (one per row) with weights
/// summing to the measure's total mass.
struct SphericalRule {
  std::vector<double> points;  ///< row-major, size() * dim entries
  std::vector<double> weights;
  int dim = 0;                 ///< ambient dimension Q + 1
  int exactness = 0;

  std::size_t size() const { return weights.size(); }
  std::span<const double> point(std::size_t k) const {
    return {points.data() + k * static_cast<std::size_t>(dim),
            static_cast<std::size_t>(dim)};
  }
};

/// Circle rule as points (cos t, sin t) on S^1, normalized mass 1.
SphericalRule circle_points(int m);

/// Product rule on S^2 normalized to total mass 1: Gauss-Legendre in
/// z = cos(theta) with m_theta nodes, equispaced azimuth with m_phi nodes.
/// Exact for spherical polynomials of degree < min(2 m_theta, m_phi).
SphericalRule sphere2_rule(int m_theta, int m_phi);

}  // namespace mfa
