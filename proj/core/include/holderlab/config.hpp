#pragma once

// Experiment configuration (JSON, schema_version 1). Parsing is strict:
// every object rejects keys it does not know, naming the offending path.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "holderlab/holder.hpp"
#include "holderlab/hyperbolicity.hpp"
#include "holderlab/schwarzian.hpp"
#include "holderlab/skew_product.hpp"

namespace holderlab::io {

inline constexpr int kSchemaVersion = 1;

enum class ExperimentKind {
  CocycleAnalysis,
  MainLemma,
  Dichotomy,
  PeriodicContinuation,
  NuCheck,
  Schwarzian,
  Holder,
};

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_kind(std::string_view text);
/// CLI subcommand name for a kind ("cocycle", "mainlemma", ...).
std::string_view subcommand(ExperimentKind kind);

struct FiberSpec {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
};

struct SystemSpec {
  std::string base_kind = "finite-cycle";  // finite-cycle | rotation | doubling
  std::size_t period = 1;
  double omega = 0.0;
  std::vector<FiberSpec> fibers;
  double c_amp = 0.0;  // circle bases: fiber offset c_amp sin(2 pi x)
  double epsilon = 0.05;
  double c1 = 1.0;
  std::optional<std::string> catalog;  // set when taken from the example library

  nlohmann::json to_json() const;
};

FiberMap build_fiber(const FiberSpec& spec);
TranslationFamily build_family(const SystemSpec& spec);

/// A multiplier or perturbation sequence, inline or from a one-column CSV.
struct Sequence {
  std::vector<double> values;
  std::optional<std::string> file;
};

struct CocycleParams {
  Sequence a;
  std::optional<Sequence> w;  // default: unit perturbation
  std::optional<double> lower_bound_d;
};

struct MainLemmaParams {
  std::size_t n = 8;
  std::size_t samples = 1000;
  std::size_t cocycles = 1;
  std::optional<Sequence> a;  // default: seeded a_i in [a_min, a_max]
  double a_min = 0.2;
  double a_max = 5.0;
  std::size_t max_vertex_n = 20;
};

struct DichotomyParams {
  Sequence a;
  std::optional<std::size_t> n0;
  std::optional<double> q;
  std::size_t q_horizon = 50;  // Q(n) estimated on this prefix when n0 and q are absent
  DichotomyThresholds thresholds;
};

struct GridSpec {
  std::vector<double> values;  // explicit list wins
  double s_min = 0.0;
  double s_max = 0.0;
  std::size_t count = 0;       // linear grid on [s_min, s_max] when > 1
  bool dyadic = false;

  std::vector<double> materialize() const;
};

struct PeriodicParams {
  BaseCycle cycle;
  double t_guess = 0.0;
  GridSpec grid;
  std::size_t series_terms = 200;
};

struct NuParams {
  std::size_t samples = 100;
  double s_max = 0.01;
  std::size_t depth = 200;
};

struct DistortionSpec {
  double x0 = 0.0;
  Interval interval;
  std::size_t horizon = 10;
  std::size_t samples = 64;
};

struct IntervalTrackSpec {
  double x0 = 0.0;
  std::optional<double> t;  // default: invariant graph point over x0
  double s = 0.01;
  std::size_t n = 0;
  std::size_t horizon = 20;
  double gamma = 0.5;
};

struct SchwarzianParams {
  FiberSpec f;
  FiberSpec g;
  std::size_t points = 100;
  double t_min = -0.5;
  double t_max = 0.5;
  SchwarzianFormula formula = SchwarzianFormula::Standard;
  std::optional<DistortionSpec> distortion;
  std::optional<IntervalTrackSpec> interval_track;
};

struct HolderParams {
  CurveSource source = CurveSource::RootTracking;
  GridSpec grid;
  std::optional<Branch> branch;
  std::optional<double> radius;
  std::optional<double> t0;
  std::optional<BaseCycle> cycle;
  std::optional<Point> z;
};

using KindParams = std::variant<CocycleParams, MainLemmaParams, DichotomyParams, PeriodicParams,
                                NuParams, SchwarzianParams, HolderParams>;

struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  ExperimentKind kind = ExperimentKind::CocycleAnalysis;
  std::string name;
  std::uint64_t seed = 0;
  std::optional<std::string> output;
  std::optional<SystemSpec> system;
  KindParams params;
  nlohmann::json source;  // the document as given, echoed into reports
};

/// Relative file references (system_file, a_file, ...) resolve against base_dir.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace holderlab::io
