#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "manifold_approx/cli.hpp"
#include "manifold_approx/codec.hpp"
#include "manifold_approx/errors.hpp"
#include "manifold_approx/experiments.hpp"

namespace mfa::cli {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kMaxSkippedFraction = 0.01;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string snr_tag(const std::optional<double>& snr) {
  if (!snr) return "none";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", *snr);
  return buf;
}

ordered_json snr_json(const std::optional<double>& snr) {
  return snr ? ordered_json(*snr) : ordered_json(nullptr);
}

/// Files written by one invocation; removed unless the run completes.
class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) {}
  Artifacts(const Artifacts&) = delete;
  Artifacts& operator=(const Artifacts&) = delete;
  ~Artifacts() {
    if (committed_) return;
    for (const fs::path& p : written_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }

  void write(const std::string& name, const std::string& contents) {
    const fs::path path = dir_ / name;
    write_atomic(path, contents);
    written_.push_back(path);
  }
  void commit() { committed_ = true; }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
  bool committed_ = false;
};

struct Csv {
  std::ostringstream body;

  Csv(const std::string& hash, const std::string& header) {
    body << "# config_hash=" << hash << "\n" << header << "\n";
  }
  template <typename... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((body << (first ? "" : ",") << cell(cells), first = false), ...);
    body << "\n";
  }

 private:
  static std::string cell(double v) { return format_double(v); }
  static std::string cell(long long v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(int v) { return std::to_string(v); }
};

std::string sidecar(const ordered_json& record, const std::string& hash) {
  ordered_json j = record;
  j["config_hash"] = hash;
  return j.dump(2) + "\n";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_skipped(std::size_t skipped, std::size_t total) {
  if (static_cast<double>(skipped) > kMaxSkippedFraction * static_cast<double>(total)) {
    throw NumericalError(std::to_string(skipped) + " of " + std::to_string(total) +
                         " evaluation points had a degenerate denominator");
  }
}

void write_sweep(Artifacts& files, const SweepResult& r, const ordered_json& record) {
  const std::string hash = config_hash(record);
  Csv csv(hash, "rank,error,log10_error");
  for (std::size_t i = 0; i < r.errors.size(); ++i) {
    csv.row(i + 1, r.errors[i], r.log10_errors[i]);
  }
  const std::string stem = r.experiment + "_" + std::to_string(r.n) + "_" +
                           std::to_string(r.M) + "_" + snr_tag(r.snr_db);
  files.write(stem + ".csv", csv.body.str());
  files.write(stem + ".json", sidecar(record, hash));
}

void print_sweep_summary(std::ostream& out, const SweepResult& r, double secs) {
  out << r.experiment << " n=" << r.n << " M=" << r.M << " snr_db=" << snr_tag(r.snr_db)
      << " median_error=" << format_double(r.median()) << " skipped=" << r.skipped
      << " runtime_s=" << secs << "\n";
}

void run_ellipse_cmd(const RunConfig& cfg, Artifacts& files, std::ostream& out) {
  for (int n : cfg.n) {
    for (long long m : cfg.M) {
      for (const auto& snr : cfg.snr_db) {
        const auto t0 = std::chrono::steady_clock::now();
        EllipseConfig ec;
        ec.n = n;
        ec.M = m;
        ec.snr_db = snr;
        ec.seed = cfg.seed;
        ec.grid = cfg.grid;
        const std::vector<SweepResult> r = run_ellipse_sweep(std::span(&ec, 1), cfg.threads);
        check_skipped(r[0].skipped, static_cast<std::size_t>(cfg.grid));
        ordered_json record{{"experiment", "ellipse"}, {"n", n},       {"M", m},
                            {"snr_db", snr_json(snr)}, {"seed", cfg.seed}, {"grid", cfg.grid}};
        write_sweep(files, r[0], record);
        print_sweep_summary(out, r[0], seconds_since(t0));
      }
    }
  }
}

void run_biexp_cmd(const RunConfig& cfg, Artifacts& files, std::ostream& out) {
  for (int n : cfg.n) {
    for (long long m : cfg.M) {
      for (const auto& snr : cfg.snr_db) {
        const auto t0 = std::chrono::steady_clock::now();
        BiexpConfig bc;
        bc.n = n;
        bc.M = m;
        bc.snr_db = snr;
        bc.seed = cfg.seed;
        bc.tests = cfg.tests;
        const std::vector<SweepResult> r = run_biexp_sweep(std::span(&bc, 1), cfg.threads);
        check_skipped(r[0].skipped, static_cast<std::size_t>(cfg.tests));
        ordered_json record{{"experiment", "biexp"}, {"n", n},       {"M", m},
                            {"snr_db", snr_json(snr)}, {"seed", cfg.seed}, {"tests", cfg.tests}};
        write_sweep(files, r[0], record);
        print_sweep_summary(out, r[0], seconds_since(t0));
      }
    }
  }
}

void run_density_cmd(const RunConfig& cfg, Artifacts& files, std::ostream& out) {
  constexpr double kPi = std::numbers::pi;
  for (int n : cfg.n) {
    for (long long m : cfg.M) {
      const auto t0 = std::chrono::steady_clock::now();
      ordered_json record{{"experiment", "density"}, {"n", n},          {"M", m},
                          {"q", cfg.q},              {"seed", cfg.seed}, {"grid", cfg.grid}};
      const std::string hash = config_hash(record);

      // Uniform samples on the great circle z = 0 of S^2.
      std::mt19937_64 rng = run_rng(cfg.seed, record.dump());
      std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
      RowMatrix points(m, 3);
      for (long long j = 0; j < m; ++j) {
        const double t = angle(rng);
        points.row(j) << std::cos(t), std::sin(t), 0.0;
      }
      const LabeledDataset data = LabeledDataset::unlabeled(std::move(points));
      const EstimatorConfig est{build_kernel(n, cfg.q), false};

      Csv csv(hash, "theta,density");
      double worst = 0.0;
      for (int i = 0; i < cfg.grid; ++i) {
        const double t = 2.0 * kPi * i / cfg.grid;
        const std::array<double, 3> x{std::cos(t), std::sin(t), 0.0};
        const double d = density_estimate(data, est, x);
        worst = std::max(worst, std::abs(d - 1.0));
        csv.row(t, d);
      }
      const std::string stem = "density_" + std::to_string(n) + "_" + std::to_string(m) + "_none";
      files.write(stem + ".csv", csv.body.str());
      files.write(stem + ".json", sidecar(record, hash));
      out << "density n=" << n << " M=" << m << " q=" << cfg.q
          << " max_deviation=" << format_double(worst)
          << " runtime_s=" << seconds_since(t0) << "\n";
    }
  }
}

void run_kernel_dump_cmd(const RunConfig& cfg, Artifacts& files, std::ostream& out) {
  for (int n : cfg.n) {
    const auto t0 = std::chrono::steady_clock::now();
    ordered_json record{{"experiment", "kernel-dump"}, {"n", n}, {"q", cfg.q}, {"grid", cfg.grid}};
    const std::string hash = config_hash(record);
    const LocalizedKernel kernel = build_kernel(n, cfg.q);
    std::vector<double> angles(static_cast<std::size_t>(cfg.grid));
    for (int i = 0; i < cfg.grid; ++i) angles[i] = std::numbers::pi * i / (cfg.grid - 1);
    angles.back() = std::numbers::pi;
    const std::vector<double> phi = kernel_profile(kernel, angles);
    Csv csv(hash, "theta,phi");
    for (std::size_t i = 0; i < angles.size(); ++i) csv.row(angles[i], phi[i]);
    const std::string stem = "kernel-dump_" + std::to_string(n) + "_" + std::to_string(cfg.q);
    files.write(stem + ".csv", csv.body.str());
    files.write(stem + ".json", sidecar(record, hash));
    out << "kernel-dump n=" << n << " q=" << cfg.q << " peak=" << format_double(kernel.peak())
        << " rows=" << angles.size() << " runtime_s=" << seconds_since(t0) << "\n";
  }
}

void run_encode_cmd(const RunConfig& cfg, Artifacts& files, std::ostream& out) {
  for (int n : cfg.n) {
    for (long long m : cfg.M) {
      for (const auto& snr : cfg.snr_db) {
        const auto t0 = std::chrono::steady_clock::now();
        EllipseConfig ec;
        ec.n = n;
        ec.M = m;
        ec.snr_db = snr;
        ec.seed = cfg.seed;
        const EllipseDataset ds = gen_ellipse_dataset(ec);
        const HarmonicBasis basis(n + 1);
        EncodingDocument doc;
        doc.q = cfg.q;
        doc.n = n;
        doc.encoding = encode(ds.data, basis, n + 1);
        const std::string stem = "encode_" + std::to_string(n) + "_" + std::to_string(m) + "_" +
                                 snr_tag(snr);
        files.write(stem + ".json", to_json(doc));
        out << "encode n=" << n << " M=" << m << " q=" << cfg.q << " snr_db=" << snr_tag(snr)
            << " coefficients=" << doc.encoding.coefficients.size()
            << " runtime_s=" << seconds_since(t0) << "\n";
      }
    }
  }
}

void run_decode_cmd(const RunConfig& cfg, Artifacts& files, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  std::ifstream in(cfg.encoding);
  if (!in) throw IoError("cannot read encoding " + cfg.encoding.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const EncodingDocument doc = encoding_from_json(buf.str());
  const GammaTable gamma = gamma_coeffs(doc.n, doc.q, doc.ambient);
  const HarmonicBasis basis(doc.encoding.degrees);

  ordered_json record{{"experiment", "decode"}, {"encoding_n", doc.n}, {"encoding_q", doc.q},
                      {"encoding_L", doc.encoding.degrees}, {"grid", cfg.grid}};
  const std::string hash = config_hash(record);
  Csv csv(hash, "theta,value");
  for (int i = 0; i < cfg.grid; ++i) {
    const double t = 2.0 * std::numbers::pi * i / cfg.grid;
    const std::array<double, 3> x = ellipse_point(t);
    csv.row(t, decode(doc.encoding, gamma, basis, x));
  }
  const std::string stem = "decode_" + std::to_string(doc.n) + "_" + std::to_string(cfg.grid);
  files.write(stem + ".csv", csv.body.str());
  files.write(stem + ".json", sidecar(record, hash));
  out << "decode n=" << doc.n << " q=" << doc.q << " points=" << cfg.grid
      << " runtime_s=" << seconds_since(t0) << "\n";
}

int run_validate_cmd(std::ostream& out) {
  bool ok = true;
  for (const CheckResult& c : run_validation()) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " measured=" << c.measured
        << " tolerance=" << c.tolerance << "\n";
    ok = ok && c.passed;
  }
  return ok ? kOk : kNumericalError;
}

}  // namespace

std::string config_hash(const nlohmann::json& run_config) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : run_config.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_atomic(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
    f << contents;
    f.flush();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " to " + path.string());
  }
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.experiment == Experiment::Validate) return run_validate_cmd(out);

    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec || !fs::is_directory(cfg.out_dir)) {
      throw IoError("cannot create output directory " + cfg.out_dir.string());
    }
    Artifacts files(cfg.out_dir);
    switch (cfg.experiment) {
      case Experiment::Ellipse: run_ellipse_cmd(cfg, files, out); break;
      case Experiment::Biexp: run_biexp_cmd(cfg, files, out); break;
      case Experiment::Density: run_density_cmd(cfg, files, out); break;
      case Experiment::KernelDump: run_kernel_dump_cmd(cfg, files, out); break;
      case Experiment::Encode: run_encode_cmd(cfg, files, out); break;
      case Experiment::Decode: run_decode_cmd(cfg, files, out); break;
      case Experiment::Validate: break;
    }
    files.commit();
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return e.code();
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const fs::filesystem_error& e) {
    err << "I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::domain_error& e) {
    err << "invalid input: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace mfa::cli
