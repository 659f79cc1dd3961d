#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "manifold_approx/cli.hpp"

namespace mfa::cli {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "experiment", "n", "M", "snr_db", "seed", "grid", "q", "tests", "out_dir", "encoding", "threads"};

[[noreturn]] void fail(ExitCode code, const std::string& msg) { throw ConfigError(code, msg); }

long long as_integer(const json& v, const std::string& key) {
  if (v.is_number_integer() || v.is_number_unsigned()) return v.get<long long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.0e15) {
      return static_cast<long long>(d);
    }
  }
  fail(kConfigError, "'" + key + "' must be an integer");
}

/// Accepts a scalar or an array of integers.
std::vector<long long> integer_axis(const json& v, const std::string& key) {
  std::vector<long long> out;
  if (v.is_array()) {
    if (v.empty()) fail(kConfigError, "'" + key + "' must not be an empty list");
    for (const auto& e : v) out.push_back(as_integer(e, key));
  } else {
    out.push_back(as_integer(v, key));
  }
  return out;
}

std::optional<double> as_snr(const json& v) {
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) fail(kConfigError, "'snr_db' must be a number or null");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(kConfigError, "'snr_db' must be finite");
  return d;
}

bool uses_snr(Experiment e) {
  return e == Experiment::Ellipse || e == Experiment::Biexp || e == Experiment::Encode;
}

bool uses_q(Experiment e) {
  return e == Experiment::KernelDump || e == Experiment::Density || e == Experiment::Encode;
}

int default_grid(Experiment e) {
  switch (e) {
    case Experiment::Density: return 512;
    case Experiment::KernelDump: return 2048;
    default: return 1024;
  }
}

std::vector<std::string> required_keys(Experiment e) {
  switch (e) {
    case Experiment::Ellipse:
    case Experiment::Biexp:
    case Experiment::Density:
    case Experiment::Encode: return {"n", "M"};
    case Experiment::KernelDump: return {"n", "q"};
    case Experiment::Decode: return {"encoding"};
    case Experiment::Validate: return {};
  }
  return {};
}

}  // namespace

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::Ellipse: return "ellipse";
    case Experiment::Biexp: return "biexp";
    case Experiment::Density: return "density";
    case Experiment::KernelDump: return "kernel-dump";
    case Experiment::Encode: return "encode";
    case Experiment::Decode: return "decode";
    case Experiment::Validate: return "validate";
  }
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  for (Experiment e : {Experiment::Ellipse, Experiment::Biexp, Experiment::Density,
                       Experiment::KernelDump, Experiment::Encode, Experiment::Decode,
                       Experiment::Validate}) {
    if (experiment_name(e) == name) return e;
  }
  fail(kConfigError, "unknown experiment '" + name + "'");
}

json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    fail(kMalformedJson, "malformed JSON in " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) fail(kMalformedJson, "config file must hold a JSON object");
  return j;
}

RunConfig parse_config(Experiment experiment, const json& file, const FlagOverrides& flags) {
  if (!file.is_null() && !file.is_object()) fail(kMalformedJson, "config must be a JSON object");
  json merged = file.is_null() ? json::object() : file;

  for (const auto& [key, value] : merged.items()) {
    if (!kKnownKeys.contains(key)) fail(kConfigError, "unknown config key '" + key + "'");
  }
  if (merged.contains("experiment")) {
    if (!merged["experiment"].is_string()) fail(kConfigError, "'experiment' must be a string");
    if (parse_experiment(merged["experiment"].get<std::string>()) != experiment) {
      fail(kConfigError, "config is for '" + merged["experiment"].get<std::string>() +
                             "', not '" + experiment_name(experiment) + "'");
    }
  }

  if (flags.n) merged["n"] = *flags.n;
  if (flags.M) merged["M"] = *flags.M;
  if (flags.snr_db) merged["snr_db"] = *flags.snr_db;
  if (flags.seed) merged["seed"] = *flags.seed;
  if (flags.grid) merged["grid"] = *flags.grid;
  if (flags.q) merged["q"] = *flags.q;
  if (flags.out_dir) merged["out_dir"] = *flags.out_dir;
  if (flags.encoding) merged["encoding"] = *flags.encoding;
  if (flags.threads) merged["threads"] = *flags.threads;

  for (const std::string& key : required_keys(experiment)) {
    if (!merged.contains(key)) {
      fail(kMissingField, "missing required field '" + key + "' for " +
                              experiment_name(experiment));
    }
  }

  RunConfig cfg;
  cfg.experiment = experiment;
  cfg.grid = default_grid(experiment);

  if (merged.contains("n")) {
    for (long long v : integer_axis(merged["n"], "n")) {
      if (v < 1 || v > 100000) fail(kConfigError, "'n' must be in [1, 100000]");
      cfg.n.push_back(static_cast<int>(v));
    }
  }
  if (merged.contains("M")) {
    for (long long v : integer_axis(merged["M"], "M")) {
      if (v < 1) fail(kConfigError, "'M' must be >= 1");
      cfg.M.push_back(v);
    }
  }
  if (merged.contains("snr_db")) {
    if (!uses_snr(experiment)) {
      fail(kConfigError, "'snr_db' does not apply to " + experiment_name(experiment));
    }
    const json& v = merged["snr_db"];
    cfg.snr_db.clear();
    if (v.is_array()) {
      if (v.empty()) fail(kConfigError, "'snr_db' must not be an empty list");
      for (const auto& e : v) cfg.snr_db.push_back(as_snr(e));
    } else {
      cfg.snr_db.push_back(as_snr(v));
    }
  }
  if (merged.contains("seed")) {
    const json& v = merged["seed"];
    if (v.is_number_unsigned()) {
      cfg.seed = v.get<std::uint64_t>();
    } else {
      const long long s = as_integer(v, "seed");
      if (s < 0) fail(kConfigError, "'seed' must be >= 0");
      cfg.seed = static_cast<std::uint64_t>(s);
    }
  }
  if (merged.contains("grid")) {
    const long long g = as_integer(merged["grid"], "grid");
    if (g < 2 || g > 10'000'000) fail(kConfigError, "'grid' must be in [2, 1e7]");
    cfg.grid = static_cast<int>(g);
  }
  if (merged.contains("q")) {
    if (!uses_q(experiment)) {
      fail(kConfigError, "'q' does not apply to " + experiment_name(experiment));
    }
    const long long q = as_integer(merged["q"], "q");
    if (q < 1 || q > 1000) fail(kConfigError, "'q' must be in [1, 1000]");
    if (experiment == Experiment::Encode && q > 2) {
      fail(kConfigError, "'q' must be 1 or 2 for encode (data live on S^2)");
    }
    if (experiment == Experiment::Density && q > 2) {
      fail(kConfigError, "'q' must be 1 or 2 for density (data live on S^2)");
    }
    cfg.q = static_cast<int>(q);
  }
  if (merged.contains("tests")) {
    const long long t = as_integer(merged["tests"], "tests");
    if (t < 1) fail(kConfigError, "'tests' must be >= 1");
    cfg.tests = static_cast<int>(t);
  }
  if (merged.contains("threads")) {
    const long long t = as_integer(merged["threads"], "threads");
    if (t < 0 || t > 1024) fail(kConfigError, "'threads' must be in [0, 1024]");
    cfg.threads = static_cast<unsigned>(t);
  }
  if (merged.contains("out_dir")) {
    if (!merged["out_dir"].is_string()) fail(kConfigError, "'out_dir' must be a string");
    cfg.out_dir = merged["out_dir"].get<std::string>();
  }
  if (merged.contains("encoding")) {
    if (!merged["encoding"].is_string()) fail(kConfigError, "'encoding' must be a string");
    cfg.encoding = merged["encoding"].get<std::string>();
  }
  return cfg;
}

}  // namespace mfa::cli
