// holderlab: run experiments described by JSON configs.
//
//   holderlab <subcommand> --config FILE [--out DIR] [--seed N] [--jobs N]
//
// Exit status: 0 success, 1 invalid input, 2 numerical failure.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "holderlab/config.hpp"
#include "holderlab/run.hpp"

namespace {

using namespace holderlab::io;

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
};

void add_flags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", flags.out, "output directory (default: $HOLDERLAB_OUT_DIR or ./holderlab-out)");
  cmd->add_option("--seed", flags.seed, "override the config seed");
  cmd->add_option("--jobs", flags.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
}

RunOptions options_from(const Flags& flags) {
  RunOptions options;
  options.out_dir = flags.out;
  options.seed = flags.seed;
  return options;
}

int print(const RunReport& report) {
  if (report.status == kSuccess) {
    std::cout << report.kind << " '" << report.name << "': ok (" << report.wall_time << " s)\n";
  } else {
    std::cerr << "error: " << report.error << '\n';
  }
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& o : report.outputs) std::cout << "  wrote " << o << '\n';
  return report.status;
}

int run_kind(ExperimentKind kind, const Flags& flags) {
  ExperimentConfig config;
  try {
    config = load_config(flags.config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationFailure;
  }
  if (config.kind != kind) {
    std::cerr << "error: config kind '" << to_string(config.kind) << "' does not match subcommand '"
              << subcommand(kind) << "'\n";
    return kValidationFailure;
  }
  return print(run(config, options_from(flags)));
}

int run_sweep(const Flags& flags) {
  SweepResult result;
  try {
    result = sweep_file(flags.config, options_from(flags), flags.jobs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationFailure;
  }
  std::size_t failed = 0;
  for (const auto& r : result.reports) {
    if (r.status != kSuccess) {
      ++failed;
      std::cerr << "run '" << r.name << "' failed (status " << r.status << "): " << r.error << '\n';
    }
  }
  std::cout << result.reports.size() << " runs, " << failed << " failed\n";
  if (!result.summary.empty()) std::cout << "  wrote " << result.summary.string() << '\n';
  return result.status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holderlab: cocycle, hyperbolicity and Holder-stability experiments"};
  app.require_subcommand(1);

  Flags flags;
  const ExperimentKind kinds[] = {ExperimentKind::CocycleAnalysis, ExperimentKind::MainLemma,
                                  ExperimentKind::Dichotomy,       ExperimentKind::PeriodicContinuation,
                                  ExperimentKind::NuCheck,         ExperimentKind::Schwarzian,
                                  ExperimentKind::Holder};
  std::optional<ExperimentKind> chosen;
  for (auto kind : kinds) {
    auto* cmd = app.add_subcommand(std::string(subcommand(kind)), "run a " + std::string(to_string(kind)) + " config");
    add_flags(cmd, flags);
    cmd->callback([&chosen, kind] { chosen = kind; });
  }
  bool sweep_chosen = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "run a list of configs concurrently");
  add_flags(sweep_cmd, flags);
  sweep_cmd->callback([&sweep_chosen] { sweep_chosen = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidationFailure;
  }
  if (sweep_chosen) return run_sweep(flags);
  return run_kind(*chosen, flags);
}
