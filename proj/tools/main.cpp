#include <CLI11.hpp>
#include <iostream>

#include "manifold_approx/cli.hpp"

namespace cli = mfa::cli;

namespace {

struct Options {
  std::string config;
  cli::FlagOverrides flags;
};

void add_common(CLI::App* sub, Options& o, bool sweep, bool q, bool encoding) {
  sub->add_option("--config", o.config, "JSON config file");
  sub->add_option("--out-dir", o.flags.out_dir, "Output directory");
  sub->add_option("--threads", o.flags.threads, "Worker threads (0 = all cores)");
  if (sweep) {
    sub->add_option("--n", o.flags.n, "Kernel degree");
    sub->add_option("--M", o.flags.M, "Number of samples");
    sub->add_option("--seed", o.flags.seed, "Random seed");
    sub->add_option("--grid", o.flags.grid, "Evaluation grid size");
  }
  if (q) sub->add_option("--q", o.flags.q, "Manifold dimension of the kernel");
  if (encoding) sub->add_option("--encoding", o.flags.encoding, "Encoding JSON file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Localized kernel approximation on data-defined manifolds"};
  app.require_subcommand(1);

  Options o;
  struct Sub {
    cli::Experiment experiment;
    CLI::App* app;
  };
  std::vector<Sub> subs;
  auto add = [&](cli::Experiment e, const std::string& help, bool sweep, bool snr, bool q,
                 bool encoding) {
    CLI::App* sub = app.add_subcommand(cli::experiment_name(e), help);
    add_common(sub, o, sweep, q, encoding);
    if (snr) sub->add_option("--snr-db", o.flags.snr_db, "Signal-to-noise ratio in dB");
    subs.push_back({e, sub});
  };
  add(cli::Experiment::Ellipse, "Piecewise smooth function on a projected ellipse", true, true,
      false, false);
  add(cli::Experiment::Biexp, "Bi-exponential parameter recovery", true, true, false, false);
  add(cli::Experiment::Density, "Density estimate from uniform samples", true, false, true, false);
  add(cli::Experiment::KernelDump, "Tabulate the kernel profile", true, false, true, false);
  add(cli::Experiment::Encode, "Encode ellipse data as harmonic coefficients", true, true, true,
      false);
  add(cli::Experiment::Decode, "Evaluate an encoding on the ellipse", true, false, false, true);
  add(cli::Experiment::Validate, "Run internal consistency checks", false, false, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kConfigError;
  }

  for (const Sub& s : subs) {
    if (!s.app->parsed()) continue;
    try {
      nlohmann::json file;
      if (!o.config.empty()) file = cli::load_config_file(o.config);
      const cli::RunConfig cfg = cli::parse_config(s.experiment, file, o.flags);
      return cli::execute(cfg, std::cout, std::cerr);
    } catch (const cli::ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return e.code();
    } catch (const cli::IoError& e) {
      std::cerr << "I/O error: " << e.what() << "\n";
      return cli::kIoError;
    }
  }
  return cli::kConfigError;
}
