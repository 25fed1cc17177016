#include "holderlab/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "holderlab/csv.hpp"
#include "holderlab/errors.hpp"

namespace holderlab::io {
namespace {

using nlohmann::json;

// Reads fields of one JSON object and rejects whatever was not read.
class Fields {
 public:
  Fields(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ValidationError(where() + " must be an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return obj_.at(key);
  }
  const json& raw_or_throw(const std::string& key) { return require(key); }

  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = require(key);
    if (!v.is_boolean()) throw ValidationError(field(key) + " must be a boolean");
    return v.get<bool>();
  }

  double real(const std::string& key) {
    const json& v = require(key);
    if (!v.is_number()) throw ValidationError(field(key) + " must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ValidationError(field(key) + " must be finite");
    return x;
  }
  double real(const std::string& key, double fallback) { return has(key) ? real(key) : fallback; }
  std::optional<double> opt_real(const std::string& key) {
    return has(key) ? std::optional<double>(real(key)) : std::nullopt;
  }

  std::uint64_t count(const std::string& key) {
    const json& v = require(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw ValidationError(field(key) + " must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }
  std::uint64_t count(const std::string& key, std::uint64_t fallback) {
    return has(key) ? count(key) : fallback;
  }

  std::string text(const std::string& key) {
    const json& v = require(key);
    if (!v.is_string()) throw ValidationError(field(key) + " must be a string");
    return v.get<std::string>();
  }
  std::string text(const std::string& key, std::string fallback) {
    return has(key) ? text(key) : fallback;
  }

  std::vector<double> reals(const std::string& key) {
    const json& v = require(key);
    if (!v.is_array()) throw ValidationError(field(key) + " must be an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        throw ValidationError(field(key) + "[" + std::to_string(i) + "] must be a number");
      }
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  std::string where() const { return path_.empty() ? "config" : path_; }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) throw ValidationError("unknown field '" + field(key) + "'");
    }
  }

 private:
  const json& require(const std::string& key) {
    if (!has(key)) throw ValidationError("missing field '" + field(key) + "'");
    seen_.insert(key);
    return obj_.at(key);
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

std::filesystem::path resolve(const std::filesystem::path& base_dir, const std::string& file) {
  std::filesystem::path p(file);
  return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
}

// "<key>" inline array or "<key>_file" CSV with a single column named <key>.
std::optional<Sequence> read_sequence(Fields& f, const std::string& key, const std::filesystem::path& base_dir) {
  const std::string file_key = key + "_file";
  if (f.has(key) && f.has(file_key)) {
    throw ValidationError("give either '" + f.field(key) + "' or '" + f.field(file_key) + "', not both");
  }
  if (f.has(key)) return Sequence{f.reals(key), std::nullopt};
  if (f.has(file_key)) {
    const std::string file = f.text(file_key);
    return Sequence{read_column(resolve(base_dir, file), key), file};
  }
  return std::nullopt;
}

FiberSpec parse_fiber(const json& j, const std::string& path) {
  Fields f(j, path);
  FiberSpec spec;
  spec.name = f.text("name");
  if (f.has("params")) {
    spec.params = f.raw("params");
    if (!spec.params.is_object()) throw ValidationError(f.field("params") + " must be an object");
  }
  f.finish();
  build_fiber(spec);  // validates name and params
  return spec;
}

BaseCycle parse_cycle(const json& j, const std::string& path) {
  Fields f(j, path);
  BaseCycle c;
  c.x0 = f.real("x0", 0.0);
  c.period = f.count("period", 1);
  f.finish();
  if (c.period == 0) throw ValidationError(path + ".period must be >= 1");
  return c;
}

GridSpec parse_grid(const json& j, const std::string& path) {
  Fields f(j, path);
  GridSpec g;
  if (f.has("values")) g.values = f.reals("values");
  g.s_min = f.real("s_min", 0.0);
  g.s_max = f.real("s_max", 0.0);
  g.count = f.count("count", 0);
  g.dyadic = f.flag("dyadic", false);
  f.finish();
  if (g.values.empty() && !g.dyadic && g.count < 2) {
    throw ValidationError(path + " needs 'values', 'dyadic': true, or 'count' >= 2 with s_min/s_max");
  }
  if (g.values.empty() && !(g.s_max >= g.s_min)) throw ValidationError(path + " needs s_min <= s_max");
  return g;
}

SystemSpec parse_system_object(const json& j, const std::string& path) {
  Fields f(j, path);
  SystemSpec spec;
  if (f.has("schema_version") && f.count("schema_version") != kSchemaVersion) {
    throw ValidationError(path + ".schema_version must be 1");
  }
  if (f.has("catalog")) {
    spec.catalog = f.text("catalog");
    catalog_entry(*spec.catalog);  // existence check
    f.finish();
    return spec;
  }
  {
    Fields b(f.raw_or_throw("base"), f.field("base"));
    spec.base_kind = b.text("kind");
    if (spec.base_kind == "finite-cycle") {
      spec.period = b.count("period");
    } else if (spec.base_kind == "rotation") {
      spec.omega = b.real("omega");
    } else if (spec.base_kind != "doubling") {
      throw ValidationError(b.field("kind") + " must be one of finite-cycle, rotation, doubling");
    }
    b.finish();
  }
  if (!f.has("fibers") || !f.raw("fibers").is_array()) {
    throw ValidationError(f.field("fibers") + " must be an array");
  }
  const json& fibers = f.raw("fibers");
  for (std::size_t i = 0; i < fibers.size(); ++i) {
    spec.fibers.push_back(parse_fiber(fibers[i], f.field("fibers") + "[" + std::to_string(i) + "]"));
  }
  spec.c_amp = f.real("c_amp", 0.0);
  spec.epsilon = f.real("epsilon", 0.05);
  spec.c1 = f.real("c1", 1.0);
  f.finish();
  build_family(spec);
  return spec;
}

double param(const json& params, const std::string& fiber, const std::string& key,
             std::optional<double> fallback = std::nullopt) {
  if (!params.contains(key)) {
    if (fallback) return *fallback;
    throw ValidationError("fiber '" + fiber + "' needs parameter '" + key + "'");
  }
  if (!params.at(key).is_number()) throw ValidationError("fiber parameter '" + key + "' must be a number");
  return params.at(key).get<double>();
}

void only_params(const json& params, const std::string& fiber, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : params.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError("unknown field '" + key + "' for fiber '" + fiber + "'");
  }
}

std::vector<double> materialize_linear(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::CocycleAnalysis:
      return "cocycle-analysis";
    case ExperimentKind::MainLemma:
      return "main-lemma";
    case ExperimentKind::Dichotomy:
      return "dichotomy";
    case ExperimentKind::PeriodicContinuation:
      return "periodic-continuation";
    case ExperimentKind::NuCheck:
      return "nu-check";
    case ExperimentKind::Schwarzian:
      return "schwarzian";
    case ExperimentKind::Holder:
      return "holder";
  }
  return "cocycle-analysis";
}

std::string_view subcommand(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::CocycleAnalysis:
      return "cocycle";
    case ExperimentKind::MainLemma:
      return "mainlemma";
    case ExperimentKind::Dichotomy:
      return "dichotomy";
    case ExperimentKind::PeriodicContinuation:
      return "periodic";
    case ExperimentKind::NuCheck:
      return "nu";
    case ExperimentKind::Schwarzian:
      return "schwarzian";
    case ExperimentKind::Holder:
      return "holder";
  }
  return "cocycle";
}

ExperimentKind parse_kind(std::string_view text) {
  for (auto k : {ExperimentKind::CocycleAnalysis, ExperimentKind::MainLemma, ExperimentKind::Dichotomy,
                 ExperimentKind::PeriodicContinuation, ExperimentKind::NuCheck, ExperimentKind::Schwarzian,
                 ExperimentKind::Holder}) {
    if (to_string(k) == text) return k;
  }
  throw ValidationError("unknown experiment kind '" + std::string(text) + "'");
}

nlohmann::json SystemSpec::to_json() const {
  if (catalog) return {{"catalog", *catalog}};
  json base{{"kind", base_kind}};
  if (base_kind == "finite-cycle") base["period"] = period;
  if (base_kind == "rotation") base["omega"] = omega;
  json fib = json::array();
  for (const auto& f : fibers) fib.push_back({{"name", f.name}, {"params", f.params}});
  json out{{"schema_version", kSchemaVersion}, {"base", base}, {"fibers", fib}, {"epsilon", epsilon}, {"c1", c1}};
  if (c_amp != 0.0) out["c_amp"] = c_amp;
  return out;
}

FiberMap build_fiber(const FiberSpec& spec) {
  const json& p = spec.params;
  const std::string& n = spec.name;
  if (n == "affine") {
    only_params(p, n, {"lambda", "c"});
    return fibers::affine(param(p, n, "lambda"), param(p, n, "c", 0.0));
  }
  if (n == "tanh") {
    only_params(p, n, {"lambda", "c"});
    return fibers::scaled_tanh(param(p, n, "lambda"), param(p, n, "c", 0.0));
  }
  if (n == "mobius") {
    only_params(p, n, {"a", "b", "c", "d"});
    return fibers::mobius(param(p, n, "a"), param(p, n, "b"), param(p, n, "c"), param(p, n, "d"));
  }
  if (n == "polynomial") {
    only_params(p, n, {"coeffs"});
    if (!p.contains("coeffs") || !p.at("coeffs").is_array()) {
      throw ValidationError("fiber 'polynomial' needs an array 'coeffs'");
    }
    std::vector<double> coeffs;
    for (const auto& c : p.at("coeffs")) {
      if (!c.is_number()) throw ValidationError("polynomial coefficients must be numbers");
      coeffs.push_back(c.get<double>());
    }
    return fibers::polynomial(std::move(coeffs));
  }
  only_params(p, n, {});
  if (n == "quadratic") return fibers::quadratic_neutral();
  if (n == "cubic") return fibers::cubic_neutral();
  if (n == "identity") return fibers::identity();
  throw ValidationError("unknown fiber map '" + n +
                        "' (expected affine, tanh, mobius, polynomial, quadratic, cubic, identity)");
}

TranslationFamily build_family(const SystemSpec& spec) {
  if (spec.catalog) {
    const auto entry = catalog_entry(*spec.catalog);
    return entry.family;
  }
  if (spec.fibers.empty()) throw ValidationError("system needs at least one fiber map");
  if (spec.base_kind == "finite-cycle") {
    if (spec.c_amp != 0.0) throw ValidationError("c_amp applies to circle bases only");
    std::vector<FiberMap> maps;
    for (const auto& f : spec.fibers) maps.push_back(build_fiber(f));
    return TranslationFamily(SkewProductSystem(BaseSystem::finite_cycle(spec.period), std::move(maps)),
                             spec.epsilon, spec.c1);
  }
  if (spec.fibers.size() != 1) throw ValidationError("circle bases take exactly one fiber map");
  const BaseSystem base = spec.base_kind == "rotation" ? BaseSystem::rotation(spec.omega) : BaseSystem::doubling();
  const FiberMap g = build_fiber(spec.fibers.front());
  const double amp = spec.c_amp;
  std::function<FiberMap(double)> field = [g, amp](double x) {
    return amp == 0.0 ? g : fibers::translated(g, amp * std::sin(2.0 * std::numbers::pi * x));
  };
  return TranslationFamily(SkewProductSystem(base, std::move(field)), spec.epsilon, spec.c1);
}

std::vector<double> GridSpec::materialize() const {
  if (!values.empty()) return values;
  if (dyadic) return dyadic_grid(s_min, s_max);
  return materialize_linear(s_min, s_max, count);
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  Fields f(doc, "");
  ExperimentConfig cfg;
  cfg.source = doc;
  const auto version = f.count("schema_version");
  if (version != kSchemaVersion) {
    throw ValidationError("schema_version " + std::to_string(version) + " is not supported (expected 1)");
  }
  cfg.kind = parse_kind(f.text("kind"));
  cfg.name = f.text("name", std::string(to_string(cfg.kind)));
  for (char c : cfg.name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) {
      throw ValidationError("name '" + cfg.name + "' may only use letters, digits, '-', '_' and '.'");
    }
  }
  cfg.seed = f.count("seed", 0);
  if (f.has("output")) cfg.output = f.text("output");

  if (f.has("system") && f.has("system_file")) throw ValidationError("give either 'system' or 'system_file'");
  if (f.has("system")) cfg.system = parse_system_object(f.raw("system"), "system");
  if (f.has("system_file")) {
    const auto path = resolve(base_dir, f.text("system_file"));
    cfg.system = parse_system_object(read_json_file(path), "system_file");
  }

  const bool needs_system = cfg.kind == ExperimentKind::PeriodicContinuation ||
                            cfg.kind == ExperimentKind::NuCheck || cfg.kind == ExperimentKind::Holder;
  if (needs_system && !cfg.system) throw ValidationError("experiment '" + std::string(to_string(cfg.kind)) + "' needs a system");

  json empty = json::object();
  Fields p(f.has("params") ? f.raw("params") : empty, "params");
  switch (cfg.kind) {
    case ExperimentKind::CocycleAnalysis: {
      CocycleParams c;
      auto a = read_sequence(p, "a", base_dir);
      if (!a) throw ValidationError("missing field 'params.a' (or 'params.a_file')");
      c.a = *a;
      c.w = read_sequence(p, "w", base_dir);
      c.lower_bound_d = p.opt_real("lower_bound_d");
      if (c.w && c.w->values.size() != c.a.values.size()) {
        throw ValidationError("params.w has " + std::to_string(c.w->values.size()) + " entries, a has " +
                              std::to_string(c.a.values.size()));
      }
      cfg.params = c;
      break;
    }
    case ExperimentKind::MainLemma: {
      MainLemmaParams m;
      m.n = p.count("n", m.n);
      m.samples = p.count("samples", m.samples);
      m.cocycles = p.count("cocycles", m.cocycles);
      m.a = read_sequence(p, "a", base_dir);
      m.a_min = p.real("a_min", m.a_min);
      m.a_max = p.real("a_max", m.a_max);
      m.max_vertex_n = p.count("max_vertex_n", m.max_vertex_n);
      if (m.a) m.n = m.a->values.size();
      if (m.n == 0) throw ValidationError("params.n must be >= 1");
      if (!(m.a_min > 0.0 && m.a_max >= m.a_min)) throw ValidationError("params needs 0 < a_min <= a_max");
      if (m.cocycles == 0) throw ValidationError("params.cocycles must be >= 1");
      cfg.params = m;
      break;
    }
    case ExperimentKind::Dichotomy: {
      DichotomyParams d;
      auto a = read_sequence(p, "a", base_dir);
      if (!a) throw ValidationError("missing field 'params.a' (or 'params.a_file')");
      d.a = *a;
      if (p.has("n0")) d.n0 = p.count("n0");
      d.q = p.opt_real("q");
      d.q_horizon = p.count("q_horizon", d.q_horizon);
      d.thresholds.expanding = p.real("expanding_threshold", d.thresholds.expanding);
      d.thresholds.contracting = p.real("contracting_threshold", d.thresholds.contracting);
      if (d.n0 && d.q) throw ValidationError("give either params.n0 or params.q");
      cfg.params = d;
      break;
    }
    case ExperimentKind::PeriodicContinuation: {
      PeriodicParams q;
      if (p.has("cycle")) q.cycle = parse_cycle(p.raw("cycle"), "params.cycle");
      q.t_guess = p.real("t_guess", 0.0);
      q.grid = parse_grid(p.raw_or_throw("grid"), "params.grid");
      q.series_terms = p.count("series_terms", q.series_terms);
      cfg.params = q;
      break;
    }
    case ExperimentKind::NuCheck: {
      NuParams n;
      n.samples = p.count("samples", n.samples);
      n.s_max = p.real("s_max", n.s_max);
      n.depth = p.count("depth", n.depth);
      if (!(n.s_max > 0.0)) throw ValidationError("params.s_max must be > 0");
      cfg.params = n;
      break;
    }
    case ExperimentKind::Schwarzian: {
      SchwarzianParams s;
      s.f = parse_fiber(p.raw_or_throw("f"), "params.f");
      s.g = parse_fiber(p.raw_or_throw("g"), "params.g");
      s.points = p.count("points", s.points);
      s.t_min = p.real("t_min", s.t_min);
      s.t_max = p.real("t_max", s.t_max);
      const std::string formula = p.text("formula", "standard");
      if (formula == "literal") {
        s.formula = SchwarzianFormula::Literal;
      } else if (formula != "standard") {
        throw ValidationError("params.formula must be 'standard' or 'literal'");
      }
      if (!(s.t_max >= s.t_min)) throw ValidationError("params needs t_min <= t_max");
      if (p.has("distortion")) {
        Fields d(p.raw("distortion"), "params.distortion");
        DistortionSpec spec;
        spec.x0 = d.real("x0", 0.0);
        const auto iv = d.reals("interval");
        if (iv.size() != 2) throw ValidationError("params.distortion.interval must be [lo, hi]");
        spec.interval = {iv[0], iv[1]};
        spec.horizon = d.count("horizon", spec.horizon);
        spec.samples = d.count("samples", spec.samples);
        d.finish();
        s.distortion = spec;
      }
      if (p.has("interval_track")) {
        Fields d(p.raw("interval_track"), "params.interval_track");
        IntervalTrackSpec spec;
        spec.x0 = d.real("x0", 0.0);
        spec.t = d.opt_real("t");
        spec.s = d.real("s", spec.s);
        spec.n = d.count("n", spec.n);
        spec.horizon = d.count("horizon", spec.horizon);
        spec.gamma = d.real("gamma", spec.gamma);
        d.finish();
        s.interval_track = spec;
      }
      if ((s.distortion || s.interval_track) && !cfg.system) {
        throw ValidationError("distortion and interval_track need a system");
      }
      cfg.params = s;
      break;
    }
    case ExperimentKind::Holder: {
      HolderParams h;
      h.source = parse_curve_source(p.text("source", "root-tracking"));
      h.grid = parse_grid(p.raw_or_throw("grid"), "params.grid");
      if (p.has("branch")) h.branch = parse_branch(p.text("branch"));
      h.radius = p.opt_real("radius");
      h.t0 = p.opt_real("t0");
      if (p.has("cycle")) h.cycle = parse_cycle(p.raw("cycle"), "params.cycle");
      if (p.has("z")) {
        const auto z = p.reals("z");
        if (z.size() != 2) throw ValidationError("params.z must be [x, t]");
        h.z = Point{z[0], z[1]};
      }
      cfg.params = h;
      break;
    }
  }
  p.finish();
  f.finish();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_json_file(path), path.parent_path());
}

}  // namespace holderlab::io
