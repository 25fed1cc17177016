#include "holderlab/run.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "experiments.hpp"
#include "holderlab/csv.hpp"
#include "holderlab/errors.hpp"

namespace holderlab::io {
namespace {

using nlohmann::json;

template <class... Ts>
struct Overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overload(Ts...) -> Overload<Ts...>;

std::filesystem::path output_dir(const ExperimentConfig& config, const RunOptions& options) {
  if (!options.out_dir.empty()) return options.out_dir;
  if (config.output) return *config.output;
  return default_output_dir();
}

void write_report(const RunReport& report, const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << report.to_json().dump(2) << '\n';
  if (!out) throw Error("cannot write " + path.string());
}

std::string sweep_entry_name(std::size_t index, const std::string& name) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03zu", index);
  return std::string(buf) + "-" + name;
}

}  // namespace

json RunReport::to_json() const {
  json out{{"name", name},
           {"kind", kind},
           {"status", status},
           {"config", config},
           {"results", results},
           {"wall_time", wall_time},
           {"warnings", warnings},
           {"outputs", outputs}};
  if (!error.empty()) out["error"] = error;
  return out;
}

std::filesystem::path default_output_dir() {
  if (const char* env = std::getenv("HOLDERLAB_OUT_DIR"); env && *env) return env;
  return "holderlab-out";
}

RunReport run(const ExperimentConfig& config, const RunOptions& options) {
  RunReport report;
  report.name = config.name;
  report.kind = std::string(to_string(config.kind));
  report.config = config.source;
  const auto start = std::chrono::steady_clock::now();

  detail::Context ctx{config,
                      options.seed.value_or(config.seed),
                      output_dir(config, options),
                      options.write_outputs,
                      report.warnings,
                      report.outputs};
  if (options.seed) report.config["seed"] = *options.seed;
  try {
    if (ctx.write) std::filesystem::create_directories(ctx.out_dir);
    report.results = std::visit(
        Overload{[&](const CocycleParams& p) { return detail::run_cocycle(ctx, p); },
                 [&](const MainLemmaParams& p) { return detail::run_main_lemma(ctx, p); },
                 [&](const DichotomyParams& p) { return detail::run_dichotomy(ctx, p); },
                 [&](const PeriodicParams& p) { return detail::run_periodic(ctx, p); },
                 [&](const NuParams& p) { return detail::run_nu(ctx, p); },
                 [&](const SchwarzianParams& p) { return detail::run_schwarzian(ctx, p); },
                 [&](const HolderParams& p) { return detail::run_holder(ctx, p); }},
        config.params);
  } catch (const ValidationError& e) {
    report.status = kValidationFailure;
    report.error = e.what();
  } catch (const std::exception& e) {
    report.status = kNumericalFailure;
    report.error = e.what();
  }
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (ctx.write) {
    const auto path = ctx.out_dir / (config.name + ".json");
    report.outputs.push_back(path.string());
    try {
      write_report(report, path);
    } catch (const std::exception& e) {
      report.status = kNumericalFailure;
      report.error = e.what();
    }
  }
  return report;
}

RunReport run_file(const std::filesystem::path& path, const RunOptions& options) {
  try {
    return run(load_config(path), options);
  } catch (const std::exception& e) {
    RunReport report;
    report.name = path.stem().string();
    report.status = kValidationFailure;
    report.error = e.what();
    return report;
  }
}

SweepResult sweep(const nlohmann::json& doc, const std::filesystem::path& base_dir, const RunOptions& options,
                  unsigned jobs) {
  if (!doc.is_object()) throw ValidationError("sweep file must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "schema_version" && key != "runs") throw ValidationError("unknown field '" + key + "' in sweep");
  }
  if (!doc.contains("schema_version") || doc.at("schema_version") != kSchemaVersion) {
    throw ValidationError("sweep schema_version must be 1");
  }
  if (!doc.contains("runs") || !doc.at("runs").is_array()) throw ValidationError("sweep needs an array 'runs'");
  const json& runs = doc.at("runs");
  const std::filesystem::path root = options.out_dir.empty() ? default_output_dir() : options.out_dir;

  SweepResult result;
  result.reports.resize(runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      RunReport& report = result.reports[i];
      try {
        const json& entry = runs[i];
        ExperimentConfig config;
        if (entry.is_string()) {
          std::filesystem::path p(entry.get<std::string>());
          if (p.is_relative()) p = base_dir / p;
          config = load_config(p);
        } else {
          config = parse_config(entry, base_dir);
        }
        RunOptions sub = options;
        sub.out_dir = root / sweep_entry_name(i, config.name);
        report = run(config, sub);
      } catch (const std::exception& e) {
        report.name = runs[i].is_string() ? std::filesystem::path(runs[i].get<std::string>()).stem().string()
                                          : sweep_entry_name(i, "entry");
        report.status = kValidationFailure;
        report.error = e.what();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(runs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& r : result.reports) {
    if (r.status != kSuccess) result.status = kNumericalFailure;
  }
  if (options.write_outputs) {
    std::filesystem::create_directories(root);
    result.summary = root / "sweep_summary.csv";
    CsvWriter csv(result.summary, {"index", "name", "kind", "status", "report", "error"}, "holderlab sweep");
    for (std::size_t i = 0; i < result.reports.size(); ++i) {
      const auto& r = result.reports[i];
      csv.cell(i).cell(r.name).cell(r.kind).cell(r.status);
      csv.cell(r.outputs.empty() ? std::string() : r.outputs.back()).cell(r.error);
      csv.end_row();
    }
    csv.close();
  }
  return result;
}

SweepResult sweep_file(const std::filesystem::path& path, const RunOptions& options, unsigned jobs) {
  return sweep(read_json_file(path), path.parent_path(), options, jobs);
}

}  // namespace holderlab::io
