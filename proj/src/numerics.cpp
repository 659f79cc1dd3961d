#include "manifold_approx/numerics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "manifold_approx/errors.hpp"

namespace mfa {

namespace {

constexpr double kPi = std::numbers::pi;

double log_ultra_at_one(int q, int n) {
  // lgamma(n + q - 1) + log(2n + q - 1) at n = 0 collapses to lgamma(q),
  // which stays finite for every q >= 2.
  double inner = 0.0;
  if (n == 0) {
    inner = std::lgamma(static_cast<double>(q));
  } else {
    inner = std::lgamma(static_cast<double>(n + q - 1)) +
            std::log(static_cast<double>(2 * n + q - 1)) -
            std::lgamma(static_cast<double>(n + 1));
  }
  return 0.5 * (1.0 - q) * std::numbers::ln2 -
         std::lgamma(0.5 * q) + 0.5 * inner;
}

}  // namespace

double surface_volume(int q) {
  if (q < 0) throw std::invalid_argument("surface_volume: q must be >= 0");
  const double a = 0.5 * (q + 1);
  return 2.0 * std::exp(a * std::log(kPi) - std::lgamma(a));
}

double surface_volume_ratio(int q) {
  if (q < 1) throw std::invalid_argument("surface_volume_ratio: q must be >= 1");
  // sqrt(pi) * Gamma(q/2) / Gamma((q+1)/2)
  return std::exp(0.5 * std::log(kPi) + std::lgamma(0.5 * q) -
                  std::lgamma(0.5 * (q + 1)));
}

double ultra_at_one(int q, int n) {
  if (q < 1) throw std::invalid_argument("ultra_at_one: q must be >= 1");
  if (n < 0) throw std::invalid_argument("ultra_at_one: n must be >= 0");
  if (q == 1) return n == 0 ? 1.0 / std::sqrt(kPi) : std::sqrt(2.0 / kPi);
  return std::exp(log_ultra_at_one(q, n));
}

// ---------------------------------------------------------------------------
// UltrasphericalFamily

UltrasphericalFamily::UltrasphericalFamily(int q, int cached_degree) : q_(q) {
  if (q < 1) throw std::invalid_argument("UltrasphericalFamily: q must be >= 1");
  if (cached_degree < 0) cached_degree = 0;
  seed_ = ultra_at_one(q, 0);
  a_.resize(static_cast<std::size_t>(cached_degree) + 1, 0.0);
  for (int l = 1; l <= cached_degree; ++l) a_[l] = coefficient(q, l);
}

double UltrasphericalFamily::coefficient(int q, int l) {
  if (q == 1) return l == 1 ? std::sqrt(0.5) : 0.5;
  const double num = static_cast<double>(l) * (l + q - 2);
  const double den = static_cast<double>(2 * l + q - 1) * (2 * l + q - 3);
  return std::sqrt(num / den);
}

double UltrasphericalFamily::recurrence(int l) const {
  if (l < 1) throw std::invalid_argument("recurrence coefficient needs l >= 1");
  if (static_cast<std::size_t>(l) < a_.size()) return a_[l];
  return coefficient(q_, l);
}

void UltrasphericalFamily::eval_into(double t, std::span<double> out) const {
  if (!(std::abs(t) <= 1.0)) {
    throw std::domain_error("ultraspherical evaluation requires |t| <= 1, got " +
                            std::to_string(t));
  }
  if (out.empty()) return;
  const std::size_t nmax = out.size() - 1;

  if (q_ == 1) {
    const double theta = std::acos(t);
    const double c = std::sqrt(2.0 / kPi);
    out[0] = seed_;
    for (std::size_t l = 1; l <= nmax; ++l) {
      out[l] = c * std::cos(static_cast<double>(l) * theta);
    }
    return;
  }

  out[0] = seed_;
  if (nmax == 0) return;
  out[1] = t * seed_ / recurrence(1);
  for (std::size_t l = 1; l < nmax; ++l) {
    const int li = static_cast<int>(l);
    out[l + 1] = (t * out[l] - recurrence(li) * out[l - 1]) / recurrence(li + 1);
  }
}

std::vector<double> UltrasphericalFamily::eval_batch(int nmax, double t) const {
  if (nmax < 0) throw std::invalid_argument("eval_batch: nmax must be >= 0");
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1);
  eval_into(t, out);
  return out;
}

double UltrasphericalFamily::eval(int n, double t) const {
  return eval_batch(n, t).back();
}

// ---------------------------------------------------------------------------
// Cutoff

double cutoff_eval(double t) {
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  const auto bump = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; };
  const double up = bump(1.0 - t);
  const double down = bump(t - 0.5);
  return up / (up + down);
}

// ---------------------------------------------------------------------------
// Quadrature

QuadratureRule gauss_jacobi_rule(int q, int m) {
  if (q < 1) throw std::invalid_argument("gauss_jacobi_rule: q must be >= 1");
  if (m < 1) throw std::invalid_argument("gauss_jacobi_rule: m must be >= 1");

  UltrasphericalFamily family(q, m + 1);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd sub(std::max(m - 1, 0));
  for (int l = 1; l < m; ++l) sub[l - 1] = family.recurrence(l);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("gauss_jacobi_rule: eigen-solver did not converge (q=" +
                         std::to_string(q) + ", m=" + std::to_string(m) + ")");
  }

  QuadratureRule rule;
  rule.exactness = 2 * m - 1;
  rule.nodes.resize(m);
  rule.weights.resize(m);

  // Polish each node with Newton steps on p_m, using the recurrence for both
  // the value and the derivative.
  for (int i = 0; i < m; ++i) {
    double x = solver.eigenvalues()[i];
    for (int it = 0; it < 3; ++it) {
      double p_prev = 0.0, p = family.seed();
      double d_prev = 0.0, d = 0.0;
      for (int l = 0; l < m; ++l) {
        const double a_next = family.recurrence(l + 1);
        const double a_cur = l > 0 ? family.recurrence(l) : 0.0;
        const double p_next = (x * p - a_cur * p_prev) / a_next;
        const double d_next = (p + x * d - a_cur * d_prev) / a_next;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
      }
      if (d == 0.0) break;
      const double step = p / d;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    rule.nodes[i] = x;
  }
  // Enforce the symmetry of the weight exactly.
  for (int i = 0; i < m / 2; ++i) {
    const double s = 0.5 * (rule.nodes[m - 1 - i] - rule.nodes[i]);
    rule.nodes[i] = -s;
    rule.nodes[m - 1 - i] = s;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.0;

  std::vector<double> p(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    // Recurrence (not the q = 1 trig form) keeps this consistent with the
    // Jacobi matrix above.
    p[0] = family.seed();
    double sum = p[0] * p[0];
    if (m > 1) {
      p[1] = rule.nodes[i] * p[0] / family.recurrence(1);
      sum += p[1] * p[1];
    }
    for (int l = 1; l + 1 < m; ++l) {
      p[l + 1] = (rule.nodes[i] * p[l] - family.recurrence(l) * p[l - 1]) /
                 family.recurrence(l + 1);
      sum += p[l + 1] * p[l + 1];
    }
    rule.weights[i] = 1.0 / sum;
  }
  return rule;
}

QuadratureRule circle_rule(int m) {
  if (m < 1) throw std::invalid_argument("circle_rule: m must be >= 1");
  QuadratureRule rule;
  rule.exactness = m - 1;
  rule.nodes.resize(m);
  rule.weights.assign(m, 1.0 / m);
  for (int k = 0; k < m; ++k) rule.nodes[k] = 2.0 * kPi * k / m;
  return rule;
}

SphericalRule circle_points(int m) {
  const QuadratureRule angles = circle_rule(m);
  SphericalRule rule;
  rule.dim = 2;
  rule.exactness = angles.exactness;
  rule.weights = angles.weights;
  rule.points.reserve(2 * angles.size());
  for (double theta : angles.nodes) {
    rule.points.push_back(std::cos(theta));
    rule.points.push_back(std::sin(theta));
  }
  return rule;
}

SphericalRule sphere2_rule(int m_theta, int m_phi) {
  if (m_theta < 1 || m_phi < 1) {
    throw std::invalid_argument("sphere2_rule: node counts must be >= 1");
  }
  const QuadratureRule polar = gauss_jacobi_rule(2, m_theta);
  SphericalRule rule;
  rule.dim = 3;
  rule.exactness = std::min(2 * m_theta, m_phi) - 1;
  rule.points.reserve(static_cast<std::size_t>(3) * m_theta * m_phi);
  rule.weights.reserve(static_cast<std::size_t>(m_theta) * m_phi);
  for (int i = 0; i < m_theta; ++i) {
    const double z = polar.nodes[i];
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double w = polar.weights[i] / (2.0 * m_phi);
    for (int j = 0; j < m_phi; ++j) {
      const double phi = 2.0 * kPi * j / m_phi;
      rule.points.push_back(r * std::cos(phi));
      rule.points.push_back(r * std::sin(phi));
      rule.points.push_back(z);
      rule.weights.push_back(w);
    }
  }
  return rule;
}

}  // namespace mfa
