#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "holderlab/config.hpp"

namespace holderlab::io {

enum ExitStatus : int { kSuccess = 0, kValidationFailure = 1, kNumericalFailure = 2 };

struct RunOptions {
  std::filesystem::path out_dir;             // empty: config "output", then HOLDERLAB_OUT_DIR
  std::optional<std::uint64_t> seed;         // overrides the config seed
  bool write_outputs = true;
};

struct RunReport {
  std::string name;
  std::string kind;
  int status = kSuccess;
  std::string error;
  nlohmann::json config;                     // echo of the document as given
  nlohmann::json results = nlohmann::json::object();
  double wall_time = 0.0;                    // seconds
  std::vector<std::string> warnings;
  std::vector<std::string> outputs;          // files written, report last

  nlohmann::json to_json() const;
};

/// HOLDERLAB_OUT_DIR if set, otherwise ./holderlab-out.
std::filesystem::path default_output_dir();

/// Runs one experiment. Never throws for experiment failures: they are mapped
/// to status 1 (validation) or 2 (numerical) in the report.
RunReport run(const ExperimentConfig& config, const RunOptions& options = {});

/// Parses and runs a config file; parse errors give a status 1 report.
RunReport run_file(const std::filesystem::path& path, const RunOptions& options = {});

struct SweepResult {
  std::vector<RunReport> reports;  // input order
  int status = kSuccess;
  std::filesystem::path summary;
};

/// {"schema_version": 1, "runs": [config object or config path, ...]}. Runs
/// execute on up to `jobs` threads, each into its own subdirectory; the
/// summary CSV is written after all of them finish.
SweepResult sweep(const nlohmann::json& doc, const std::filesystem::path& base_dir, const RunOptions& options,
                  unsigned jobs = 1);
SweepResult sweep_file(const std::filesystem::path& path, const RunOptions& options, unsigned jobs = 1);

}  // namespace holderlab::io
