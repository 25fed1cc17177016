#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "holderlab/config.hpp"
#include "holderlab/csv.hpp"

namespace holderlab::io::detail {

struct Context {
  const ExperimentConfig& config;
  std::uint64_t seed;
  std::filesystem::path out_dir;
  bool write;
  std::vector<std::string>& warnings;
  std::vector<std::string>& outputs;

  std::string metadata() const;
  /// <out_dir>/<name><suffix>.csv
  std::filesystem::path csv_path(const std::string& suffix = "") const;
};

nlohmann::json run_cocycle(Context& ctx, const CocycleParams& p);
nlohmann::json run_main_lemma(Context& ctx, const MainLemmaParams& p);
nlohmann::json run_dichotomy(Context& ctx, const DichotomyParams& p);
nlohmann::json run_periodic(Context& ctx, const PeriodicParams& p);
nlohmann::json run_nu(Context& ctx, const NuParams& p);
nlohmann::json run_schwarzian(Context& ctx, const SchwarzianParams& p);
nlohmann::json run_holder(Context& ctx, const HolderParams& p);

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit_uniform(std::uint64_t bits);

}  // namespace holderlab::io::detail
