#include "manifold_approx/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace mfa {

namespace {

constexpr double kPi = std::numbers::pi;

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string snr_label(const std::optional<double>& snr) {
  if (!snr) return "none";
  std::ostringstream os;
  os << *snr;
  return os.str();
}

double median_sorted(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

SweepResult make_result(std::string experiment, int n, Eigen::Index m,
                        std::optional<double> snr, std::uint64_t seed,
                        const std::vector<double>& errors, std::size_t skipped) {
  std::vector<double> kept;
  kept.reserve(errors.size());
  for (double e : errors) {
    if (!std::isnan(e)) kept.push_back(e);
  }
  SortedErrors sorted = sorted_log_errors(std::move(kept));
  SweepResult r;
  r.experiment = std::move(experiment);
  r.n = n;
  r.M = m;
  r.snr_db = snr;
  r.seed = seed;
  r.errors = std::move(sorted.errors);
  r.log10_errors = std::move(sorted.log10_errors);
  r.skipped = skipped;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Noise

double snr_db(std::span<const double> signal, std::span<const double> noise) {
  const double n = norm2(noise);
  if (n == 0.0) throw std::domain_error("SNR undefined for a zero noise vector");
  return 20.0 * std::log10(norm2(signal) / n);
}

NoisyValues apply_noise_at_snr(std::span<const double> values, double target_db,
                               std::mt19937_64& rng) {
  const double signal = norm2(values);
  if (signal == 0.0) throw std::domain_error("cannot set an SNR for an all-zero signal");
  std::normal_distribution<double> normal(0.0, 1.0);
  NoisyValues out;
  out.noise.resize(values.size());
  for (double& e : out.noise) e = normal(rng);
  const double raw = norm2(out.noise);
  const double scale = signal * std::pow(10.0, -target_db / 20.0) / raw;
  out.values.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    out.noise[i] *= scale;
    out.values[i] = values[i] + out.noise[i];
  }
  out.achieved_snr_db = snr_db(values, out.noise);
  return out;
}

std::mt19937_64 run_rng(std::uint64_t seed, std::string_view config_key) {
  const std::uint64_t h = fnv1a(config_key);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

// ---------------------------------------------------------------------------
// Ellipse

std::string EllipseConfig::key() const {
  std::ostringstream os;
  os << "ellipse:n=" << n << ":M=" << M << ":snr=" << snr_label(snr_db) << ":grid=" << grid;
  return os.str();
}

double ellipse_target(double theta) {
  const double c = std::cos(theta);
  return 1.0 + std::sqrt(std::abs(c)) * std::sin(c + std::sin(theta)) / 2.0;
}

std::array<double, 3> inverse_stereographic(double v1, double v2) {
  const double r = std::sqrt(v1 * v1 + v2 * v2 + 1.0);
  return {v1 / r, v2 / r, 1.0 / r};
}

std::array<double, 3> ellipse_point(double theta) {
  return inverse_stereographic(3.0 * std::cos(theta), 6.0 * std::sin(theta));
}

EllipseDataset gen_ellipse_dataset(const EllipseConfig& cfg) {
  if (cfg.M < 1) throw std::invalid_argument("ellipse: M must be >= 1");
  std::mt19937_64 rng = run_rng(cfg.seed, cfg.key());
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);

  std::vector<double> thetas(static_cast<std::size_t>(cfg.M));
  std::vector<double> clean(thetas.size());
  RowMatrix points(cfg.M, 3);
  for (Eigen::Index j = 0; j < cfg.M; ++j) {
    thetas[j] = angle(rng);
    const auto p = ellipse_point(thetas[j]);
    points.row(j) << p[0], p[1], p[2];
    clean[j] = ellipse_target(thetas[j]);
  }

  RowMatrix labels(cfg.M, 1);
  std::optional<double> achieved;
  if (cfg.snr_db) {
    const NoisyValues noisy = apply_noise_at_snr(clean, *cfg.snr_db, rng);
    for (Eigen::Index j = 0; j < cfg.M; ++j) labels(j, 0) = noisy.values[j];
    achieved = noisy.achieved_snr_db;
  } else {
    for (Eigen::Index j = 0; j < cfg.M; ++j) labels(j, 0) = clean[j];
  }
  return EllipseDataset{LabeledDataset(std::move(points), std::move(labels)),
                        std::move(thetas), std::move(clean), achieved};
}

EllipseRun run_ellipse(const EllipseConfig& cfg, unsigned threads) {
  if (cfg.n < 1) throw std::invalid_argument("ellipse: n must be >= 1");
  if (cfg.grid < 2) throw std::invalid_argument("ellipse: grid must be >= 2");
  const EllipseDataset ds = gen_ellipse_dataset(cfg);
  // The data lie on a curve, so the kernel uses manifold dimension 1.
  const EstimatorConfig est{build_kernel(cfg.n, 1), true};

  EllipseRun run;
  run.thetas.resize(cfg.grid);
  run.truth.resize(cfg.grid);
  RowMatrix xs(cfg.grid, 3);
  for (int i = 0; i < cfg.grid; ++i) {
    run.thetas[i] = 2.0 * kPi * i / cfg.grid;
    run.truth[i] = ellipse_target(run.thetas[i]);
    const auto p = ellipse_point(run.thetas[i]);
    xs.row(i) << p[0], p[1], p[2];
  }
  const GridEstimate g = estimate_grid(ds.data, est, xs, threads);
  run.estimates.resize(cfg.grid);
  run.errors.resize(cfg.grid);
  for (int i = 0; i < cfg.grid; ++i) {
    run.estimates[i] = g.values(i, 0);
    run.errors[i] = std::abs(run.estimates[i] - run.truth[i]);
  }
  run.skipped = g.degenerate_count;
  return run;
}

// ---------------------------------------------------------------------------
// Bi-exponential

std::string BiexpConfig::key() const {
  std::ostringstream os;
  os << "biexp:n=" << n << ":M=" << M << ":snr=" << snr_label(snr_db) << ":tests=" << tests;
  return os.str();
}

std::vector<double> biexp_signal(double lambda1, double lambda2) {
  std::vector<double> out(kBiexpSamples);
  for (int j = 1; j <= kBiexpSamples; ++j) {
    out[j - 1] = kBiexpAmplitude1 * std::exp(-lambda1 * j) +
                 kBiexpAmplitude2 * std::exp(-lambda2 * j);
  }
  return out;
}

NoisyValues biexp_signal(double lambda1, double lambda2, double target_db,
                         std::mt19937_64& rng) {
  const std::vector<double> clean = biexp_signal(lambda1, lambda2);
  return apply_noise_at_snr(clean, target_db, rng);
}

std::vector<double> biexp_embed(std::span<const double> curve) {
  if (curve.size() != static_cast<std::size_t>(kBiexpSamples)) {
    throw std::invalid_argument("biexp_embed: expected a curve of length 100");
  }
  static constexpr std::array<double, 3> kShift{380.0, 189.0, 116.0};
  std::vector<double> out(kBiexpSamples + 1);
  for (int i = 0; i < kBiexpSamples; ++i) {
    out[i] = 1000.0 * curve[i] - (i < 3 ? kShift[i] : 0.0);
  }
  out[kBiexpSamples] = 100.0;
  const double r = norm2(out);
  for (double& v : out) v /= r;
  return out;
}

double combined_error(const std::array<double, 2>& truth,
                      const std::array<double, 2>& estimate) {
  if (truth[0] == 0.0 || truth[1] == 0.0) {
    throw std::domain_error("combined_error: true decay rates must be nonzero");
  }
  return 100.0 * (std::abs(truth[0] - estimate[0]) / std::abs(truth[0]) +
                  std::abs(truth[1] - estimate[1]) / std::abs(truth[1]));
}

BiexpRun run_biexp(const BiexpConfig& cfg, unsigned threads) {
  if (cfg.M < 1) throw std::invalid_argument("biexp: M must be >= 1");
  if (cfg.n < 1) throw std::invalid_argument("biexp: n must be >= 1");
  if (cfg.tests < 1) throw std::invalid_argument("biexp: tests must be >= 1");
  std::mt19937_64 rng = run_rng(cfg.seed, cfg.key());
  std::uniform_real_distribution<double> l1(kLambda1Range[0], kLambda1Range[1]);
  std::uniform_real_distribution<double> l2(kLambda2Range[0], kLambda2Range[1]);

  auto curve = [&](double a, double b) {
    return cfg.snr_db ? biexp_signal(a, b, *cfg.snr_db, rng).values : biexp_signal(a, b);
  };

  RowMatrix points(cfg.M, kBiexpSamples + 1);
  RowMatrix labels(cfg.M, 2);
  for (Eigen::Index j = 0; j < cfg.M; ++j) {
    const double a = l1(rng);
    const double b = l2(rng);
    const std::vector<double> y = biexp_embed(curve(a, b));
    points.row(j) = Eigen::Map<const Eigen::RowVectorXd>(y.data(), kBiexpSamples + 1);
    labels.row(j) << a, b;
  }
  const LabeledDataset data(std::move(points), std::move(labels));

  // Test pairs come from a stream that ignores n and M, so every run of a
  // sweep is scored on the same inputs.
  std::ostringstream test_key;
  test_key << "biexp-test:snr=" << snr_label(cfg.snr_db) << ":tests=" << cfg.tests;
  rng = run_rng(cfg.seed, test_key.str());

  BiexpRun run;
  run.truth.resize(cfg.tests);
  RowMatrix xs(cfg.tests, kBiexpSamples + 1);
  for (int i = 0; i < cfg.tests; ++i) {
    const double a = l1(rng);
    const double b = l2(rng);
    run.truth[i] = {a, b};
    const std::vector<double> x = biexp_embed(curve(a, b));
    xs.row(i) = Eigen::Map<const Eigen::RowVectorXd>(x.data(), kBiexpSamples + 1);
  }

  // The noiseless curves form a two-parameter family.
  const EstimatorConfig est{build_kernel(cfg.n, 2), true};
  const GridEstimate g = estimate_grid(data, est, xs, threads);
  run.estimates.resize(cfg.tests);
  run.errors.resize(cfg.tests);
  for (int i = 0; i < cfg.tests; ++i) {
    run.estimates[i] = {g.values(i, 0), g.values(i, 1)};
    run.errors[i] = g.degenerate[i] ? std::numeric_limits<double>::quiet_NaN()
                                    : combined_error(run.truth[i], run.estimates[i]);
  }
  run.skipped = g.degenerate_count;
  return run;
}

// ---------------------------------------------------------------------------
// Sweeps

double SweepResult::median_log10() const { return median_sorted(log10_errors); }
double SweepResult::median() const { return median_sorted(errors); }

std::vector<SweepResult> run_ellipse_sweep(std::span<const EllipseConfig> configs,
                                           unsigned threads) {
  std::vector<SweepResult> out;
  out.reserve(configs.size());
  for (const EllipseConfig& cfg : configs) {
    const EllipseRun run = run_ellipse(cfg, threads);
    out.push_back(make_result("ellipse", cfg.n, cfg.M, cfg.snr_db, cfg.seed, run.errors,
                              run.skipped));
  }
  return out;
}

std::vector<SweepResult> run_biexp_sweep(std::span<const BiexpConfig> configs,
                                         unsigned threads) {
  std::vector<SweepResult> out;
  out.reserve(configs.size());
  for (const BiexpConfig& cfg : configs) {
    const BiexpRun run = run_biexp(cfg, threads);
    out.push_back(make_result("biexp", cfg.n, cfg.M, cfg.snr_db, cfg.seed, run.errors,
                              run.skipped));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Geodesic check

GeodesicStats geodesic_vs_arccos(const GeodesicOptions& opts) {
  if (opts.resolution < 1000) {
    throw std::invalid_argument("geodesic_vs_arccos: resolution must be >= 1000");
  }
  if (opts.anchors < 1) throw std::invalid_argument("geodesic_vs_arccos: anchors must be >= 1");
  const int n = opts.resolution;
  std::vector<std::array<double, 3>> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = ellipse_point(2.0 * kPi * i / n);

  // Great-circle angle, accurate for nearly parallel vectors.
  auto angle = [&](int i, int j) {
    const auto& x = pts[i];
    const auto& y = pts[j];
    const double c0 = x[1] * y[2] - x[2] * y[1], c1 = x[2] * y[0] - x[0] * y[2],
                 c2 = x[0] * y[1] - x[1] * y[0];
    return std::atan2(std::sqrt(c0 * c0 + c1 * c1 + c2 * c2),
                      x[0] * y[0] + x[1] * y[1] + x[2] * y[2]);
  };

  std::vector<double> segment(static_cast<std::size_t>(n));
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    segment[i] = angle(i, (i + 1) % n);
    total += segment[i];
  }

  GeodesicStats stats;
  stats.ratio_min = std::numeric_limits<double>::infinity();
  stats.ratio_max = 0.0;
  const int stride = std::max(1, n / opts.anchors);
  for (int a = 0; a < n; a += stride) {
    // Arc length accumulated from the anchor, free of cancellation.
    double along = 0.0;
    for (int step = 1; step < n; ++step) {
      const int b = (a + step) % n;
      along += segment[(b + n - 1) % n];
      const double rho = std::min(along, total - along);
      if (along > opts.max_rho) break;
      if (rho <= 0.0) continue;
      const double ac = angle(a, b);
      ++stats.pairs;
      if (rho <= opts.ratio_radius) {
        const double r = ac / rho;
        stats.ratio_min = std::min(stats.ratio_min, r);
        stats.ratio_max = std::max(stats.ratio_max, r);
      }
      if (rho >= opts.min_rho) {
        const double c = std::abs(rho - ac) / (rho * rho * rho);
        stats.cubic_constant = std::max(stats.cubic_constant, c);
        const int band = rho < 0.05 ? 0 : (rho < 0.2 ? 1 : 2);
        stats.cubic_by_band[band] = std::max(stats.cubic_by_band[band], c);
      }
    }
  }
  return stats;
}

}  // namespace mfa
