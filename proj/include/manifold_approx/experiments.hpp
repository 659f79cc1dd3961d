#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "manifold_approx/estimator.hpp"

namespace mfa {

// ---------------------------------------------------------------------------
// Noise

/// 20 log10(|signal| / |noise|). Throws std::domain_error for zero noise.
double snr_db(std::span<const double> signal, std::span<const double> noise);

struct NoisyValues {
  std::vector<double> values;
  std::vector<double> noise;
  double achieved_snr_db = 0.0;
};

/// Adds standard normal deviates rescaled so that the noise norm is
/// |values| * 10^(-target_db / 20). Throws std::domain_error if every value
/// is zero.
NoisyValues apply_noise_at_snr(std::span<const double> values, double target_db,
                               std::mt19937_64& rng);

/// Per-run generator seeded from the user seed and a hash of the run's
/// parameters, so parallel and serial sweeps draw identical streams.
std::mt19937_64 run_rng(std::uint64_t seed, std::string_view config_key);

// ---------------------------------------------------------------------------
// Ellipse experiment: a piecewise smooth function on a projected ellipse.

struct EllipseConfig {
  Eigen::Index M = 8192;
  int n = 32;
  std::optional<double> snr_db;
  std::uint64_t seed = 0;
  int grid = 1024;

  /// Canonical parameter string used for hashing and file names.
  std::string key() const;
};

/// 1 + |cos t|^{1/2} sin(cos t + sin t) / 2.
double ellipse_target(double theta);

/// (v, 1) / |(v, 1)|.
std::array<double, 3> inverse_stereographic(double v1, double v2);

/// Image of (3 cos t, 6 sin t) on S^2.
std::array<double, 3> ellipse_point(double theta);

struct EllipseDataset {
  LabeledDataset data;
  std::vector<double> thetas;
  std::vector<double> clean_labels;
  std::optional<double> achieved_snr_db;
};

EllipseDataset gen_ellipse_dataset(const EllipseConfig& cfg);

/// Evaluation of one ellipse run on the uniform test grid.
struct EllipseRun {
  std::vector<double> thetas;     ///< test angles 2 pi i / grid
  std::vector<double> truth;
  std::vector<double> estimates;  ///< NaN at skipped points
  std::vector<double> errors;     ///< |F - f|, NaN at skipped points
  std::size_t skipped = 0;
};

EllipseRun run_ellipse(const EllipseConfig& cfg, unsigned threads = 0);

// ---------------------------------------------------------------------------
// Bi-exponential relaxometry experiment.

inline constexpr double kBiexpAmplitude1 = 0.7;
inline constexpr double kBiexpAmplitude2 = 0.3;
inline constexpr int kBiexpSamples = 100;
inline constexpr std::array<double, 2> kLambda1Range{0.1, 0.7};
inline constexpr std::array<double, 2> kLambda2Range{1.1, 1.7};

struct BiexpConfig {
  Eigen::Index M = 8192;
  int n = 32;
  std::optional<double> snr_db;
  std::uint64_t seed = 0;
  int tests = 512;

  std::string key() const;
};

/// (f(1), ..., f(100)) with f(j) = 0.7 e^{-l1 j} + 0.3 e^{-l2 j}.
std::vector<double> biexp_signal(double lambda1, double lambda2);

/// Same curve with additive Gaussian noise at the given SNR.
NoisyValues biexp_signal(double lambda1, double lambda2, double target_db,
                         std::mt19937_64& rng);

/// P(T(y)): shift-and-scale, append 100, normalize onto S^100.
std::vector<double> biexp_embed(std::span<const double> curve);

/// 100 * sum_j |true_j - est_j| / true_j, in percent.
double combined_error(const std::array<double, 2>& truth,
                      const std::array<double, 2>& estimate);

struct BiexpRun {
  std::vector<std::array<double, 2>> truth;
  std::vector<std::array<double, 2>> estimates;
  std::vector<double> errors;  ///< combined error, NaN at skipped points
  std::size_t skipped = 0;
};

BiexpRun run_biexp(const BiexpConfig& cfg, unsigned threads = 0);

// ---------------------------------------------------------------------------
// Sweeps

struct SweepResult {
  std::string experiment;
  int n = 0;
  Eigen::Index M = 0;
  std::optional<double> snr_db;
  std::uint64_t seed = 0;
  std::vector<double> errors;        ///< ascending, skipped points removed
  std::vector<double> log10_errors;
  std::size_t skipped = 0;

  double median_log10() const;
  double median() const;
};

/// One result per config, in order. Each run draws from its own stream and
/// parallelizes its evaluation grid over `threads` workers.
std::vector<SweepResult> run_ellipse_sweep(std::span<const EllipseConfig> configs,
                                           unsigned threads = 0);
std::vector<SweepResult> run_biexp_sweep(std::span<const BiexpConfig> configs,
                                         unsigned threads = 0);

// ---------------------------------------------------------------------------
// Geodesic distance on the projected ellipse against the sphere's arccos.

struct GeodesicOptions {
  int resolution = 1 << 16;  ///< curve samples for arc-length integration
  int anchors = 128;
  double max_rho = 0.5;
  double ratio_radius = 0.2;
  double min_rho = 0.01;
};

struct GeodesicStats {
  std::size_t pairs = 0;
  double ratio_min = 0.0;  ///< arccos / rho over pairs with rho <= ratio_radius
  double ratio_max = 0.0;
  double cubic_constant = 0.0;  ///< max |rho - arccos| / rho^3, rho in [min_rho, max_rho]
  /// Same maximum restricted to [min_rho, 0.05], [0.05, 0.2], [0.2, max_rho].
  std::array<double, 3> cubic_by_band{};
};

GeodesicStats geodesic_vs_arccos(const GeodesicOptions& opts = {});

}  // namespace mfa
