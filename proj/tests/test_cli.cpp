#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "manifold_approx/cli.hpp"

using namespace mfa::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

ExitCode code_of(Experiment e, const json& j, const FlagOverrides& f = {}) {
  try {
    parse_config(e, j, f);
  } catch (const ConfigError& err) {
    return err.code();
  }
  return kOk;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mfa-test-" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("config validation exit codes") {
  CHECK(code_of(Experiment::Ellipse, {{"n", 8}, {"M", 100}}) == kOk);
  CHECK(code_of(Experiment::Ellipse, {{"M", 100}}) == kMissingField);
  CHECK(code_of(Experiment::Decode, json::object()) == kMissingField);
  CHECK(code_of(Experiment::Ellipse, {{"n", 0}, {"M", 100}}) == kConfigError);
  CHECK(code_of(Experiment::Ellipse, {{"n", 8}, {"M", 0}}) == kConfigError);
  CHECK(code_of(Experiment::Ellipse, {{"n", 8}, {"M", 9}, {"bogus", 1}}) == kConfigError);
  CHECK(code_of(Experiment::Ellipse, {{"n", "8"}, {"M", 9}}) == kConfigError);
  CHECK(code_of(Experiment::Ellipse, {{"n", 8.5}, {"M", 9}}) == kConfigError);
  CHECK(code_of(Experiment::Ellipse, {{"n", 8}, {"M", 9}, {"q", 2}}) == kConfigError);
  CHECK(code_of(Experiment::Density, {{"n", 8}, {"M", 9}, {"snr_db", 2}}) == kConfigError);
  CHECK(code_of(Experiment::Encode, {{"n", 8}, {"M", 9}, {"q", 3}}) == kConfigError);
  CHECK(code_of(Experiment::Biexp, {{"experiment", "ellipse"}, {"n", 8}, {"M", 9}}) == kConfigError);
  CHECK(code_of(Experiment::KernelDump, {{"n", 8}, {"q", 3}, {"grid", 1}}) == kConfigError);
  CHECK(code_of(Experiment::Ellipse, json::array()) == kMalformedJson);
}

TEST_CASE("flags override file values and axes expand") {
  FlagOverrides f;
  f.n = 12;
  f.snr_db = -3.0;
  const RunConfig c = parse_config(Experiment::Ellipse,
                                   {{"n", {1, 2}}, {"M", {10, 20, 30}}, {"snr_db", {nullptr, 5}}}, f);
  CHECK(c.n == std::vector<int>{12});
  CHECK(c.M.size() == 3u);
  REQUIRE(c.snr_db.size() == 1u);
  CHECK(*c.snr_db[0] == -3.0);
  CHECK(c.grid == 1024);
  CHECK(parse_config(Experiment::KernelDump, {{"n", 3}, {"q", 2}}).grid == 2048);
}

TEST_CASE("config files") {
  const fs::path dir = scratch("cfg");
  std::ofstream(dir / "bad.json") << "{\"n\": ";
  std::ofstream(dir / "good.json") << R"({"experiment": "biexp", "n": 4, "M": 8})";
  try {
    load_config_file(dir / "bad.json");
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(e.code() == kMalformedJson);
  }
  CHECK_THROWS_AS(load_config_file(dir / "missing.json"), IoError);
  CHECK(load_config_file(dir / "good.json")["n"] == 4);
  fs::remove_all(dir.parent_path());
}

TEST_CASE("hash and atomic writes") {
  const json a = {{"n", 4}, {"M", 8}};
  const json b = {{"M", 8}, {"n", 4}};
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16u);
  CHECK(config_hash(a) != config_hash({{"n", 5}, {"M", 8}}));

  const fs::path dir = scratch("atomic");
  write_atomic(dir / "x.txt", "hello\n");
  std::ifstream in(dir / "x.txt");
  std::string s;
  std::getline(in, s);
  CHECK(s == "hello");
  CHECK_THROWS_AS(write_atomic(dir / "no" / "x.txt", "z"), IoError);
  fs::remove_all(dir.parent_path());
}

TEST_CASE("execute writes artifacts and cleans up on failure") {
  const fs::path dir = scratch("run");
  std::ostringstream out, err;
  RunConfig c = parse_config(Experiment::KernelDump, {{"n", 8}, {"q", 2}, {"grid", 16}});
  c.out_dir = dir;
  CHECK(execute(c, out, err) == kOk);
  CHECK(fs::exists(dir / "kernel-dump_8_2.csv"));
  CHECK(fs::exists(dir / "kernel-dump_8_2.json"));
  std::ifstream csv(dir / "kernel-dump_8_2.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line.rfind("# config_hash=", 0) == 0);
  std::getline(csv, line);
  CHECK(line == "theta,phi");

  // The second run degenerates everywhere away from the single sample.
  const fs::path fail_dir = dir / "fail";
  RunConfig bad = parse_config(Experiment::Ellipse, {{"n", {8, 64}}, {"M", 1}, {"grid", 64}});
  bad.out_dir = fail_dir;
  CHECK(execute(bad, out, err) == kNumericalError);
  CHECK(fs::is_empty(fail_dir));

  RunConfig dec = parse_config(Experiment::Decode, {{"encoding", (dir / "none.json").string()}});
  dec.out_dir = dir;
  CHECK(execute(dec, out, err) == kIoError);

  std::ofstream(dir / "junk.json") << "{\"Q\": 2}";
  dec.encoding = dir / "junk.json";
  CHECK(execute(dec, out, err) == kConfigError);
  fs::remove_all(dir.parent_path());
}

TEST_CASE("validate subcommand") {
  bool all = true;
  for (const CheckResult& c : run_validation()) all = all && c.passed;
  CHECK(all);
}
