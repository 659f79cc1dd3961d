#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfa::cli {

enum class Experiment { Ellipse, Biexp, Density, KernelDump, Encode, Decode, Validate };

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,     ///< out-of-range value, unknown key, bad type
  kNumericalError = 3,  ///< solver failure, too many degenerate points, failed check
  kIoError = 4,
  kMissingField = 5,
  kMalformedJson = 6,
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string experiment_name(Experiment e);

/// Throws ConfigError(kConfigError) for unknown names.
Experiment parse_experiment(const std::string& name);

/// Validated parameters for one invocation. Sweep axes (n, M, snr_db) hold
/// one entry per value; runs cover their cartesian product.
struct RunConfig {
  Experiment experiment = Experiment::Validate;
  std::vector<int> n;
  std::vector<long long> M;
  std::vector<std::optional<double>> snr_db{std::nullopt};
  std::uint64_t seed = 0;
  int grid = 0;
  int q = 1;
  int tests = 512;
  unsigned threads = 0;
  std::filesystem::path out_dir = ".";
  std::filesystem::path encoding;
};

/// Command-line values that override keys of the config file.
struct FlagOverrides {
  std::optional<int> n;
  std::optional<long long> M;
  std::optional<double> snr_db;
  std::optional<std::uint64_t> seed;
  std::optional<int> grid;
  std::optional<int> q;
  std::optional<std::string> out_dir;
  std::optional<std::string> encoding;
  std::optional<unsigned> threads;
};

/// Reads a JSON config file. Throws IoError if unreadable and
/// ConfigError(kMalformedJson) if it does not parse to an object.
nlohmann::json load_config_file(const std::filesystem::path& path);

/// Merges flags over the file object, fills defaults, and validates every
/// parameter against the target experiment's preconditions.
RunConfig parse_config(Experiment experiment, const nlohmann::json& file,
                       const FlagOverrides& flags = {});

/// Runs the configured experiment, writing artifacts into cfg.out_dir and a
/// one-line summary per run to `out`. Returns the process exit code; files
/// written before a failure are removed.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// One named invariant check for the `validate` subcommand.
struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
};

std::vector<CheckResult> run_validation();

/// Writes `contents` to `path` via a temporary file and rename.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

/// 64-bit FNV-1a of a resolved per-run configuration, as 16 hex digits.
std::string config_hash(const nlohmann::json& run_config);

}  // namespace mfa::cli
