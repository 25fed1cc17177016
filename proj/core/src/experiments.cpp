#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "holderlab/cocycle.hpp"
#include "holderlab/errors.hpp"
#include "holderlab/holder.hpp"
#include "holderlab/hyperbolicity.hpp"
#include "holderlab/schwarzian.hpp"

namespace holderlab::io::detail {
namespace {

using nlohmann::json;

const SystemSpec& system_of(const Context& ctx) {
  if (!ctx.config.system) throw ValidationError("experiment needs a system");
  return *ctx.config.system;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json fit_json(const HolderFit& fit) {
  return {{"alpha", fit.alpha}, {"C", fit.C}, {"r2", fit.r2}, {"n_samples", fit.n_samples}};
}

}  // namespace

double unit_uniform(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

std::string Context::metadata() const {
  return "holderlab kind=" + std::string(to_string(config.kind)) + " name=" + config.name +
         " seed=" + std::to_string(seed);
}

std::filesystem::path Context::csv_path(const std::string& suffix) const {
  return out_dir / (config.name + suffix + ".csv");
}

json run_cocycle(Context& ctx, const CocycleParams& p) {
  const auto cocycle = ScalarCocycle::with_default_bound(p.a.values);
  const Perturbation w = p.w ? Perturbation(p.w->values) : Perturbation::unit(cocycle.size());
  const MinimaxResult r = min_sup(cocycle, w);
  const double q = worst_q(cocycle);
  json out{{"n", cocycle.size()},
           {"P", r.value},
           {"minimizer", r.minimizer},
           {"witness_pair", {r.witness_pair.first, r.witness_pair.second}},
           {"line_search_value", r.line_search_value},
           {"Q", q},
           {"sup_w", w.sup_norm()}};
  if (w.sup_norm() <= 1.0) {
    out["P_le_Q"] = r.value <= q + scaled_tolerance(1e-9, q);
  }
  if (p.lower_bound_d) {
    const auto lb = lower_bound_check(cocycle, w, *p.lower_bound_d);
    out["lower_bound"] = {{"d", *p.lower_bound_d}, {"holds", lb.holds}, {"P", lb.p},
                          {"dQ", lb.scaled_q}, {"slack", lb.slack}};
    if (!lb.holds) ctx.warnings.push_back("lower bound P(w) >= d Q(n) does not hold");
  }
  if (ctx.write) {
    const auto track = affine_tracks(cocycle, w);
    const auto orbit = evolve(cocycle, w, r.minimizer);
    const auto path = ctx.csv_path();
    CsvWriter csv(path, {"i", "a", "w", "log_b", "c", "v"}, ctx.metadata());
    for (std::size_t i = 0; i <= cocycle.size(); ++i) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      csv.cell(i)
          .cell(i < cocycle.size() ? cocycle[i] : nan)
          .cell(i > 0 ? w.entries()[i - 1] : nan)
          .cell(track.log_b()[i])
          .cell(track.c()[i])
          .cell(orbit.values[i]);
      csv.end_row();
    }
    csv.close();
    ctx.outputs.push_back(path.string());
  }
  return out;
}

json run_main_lemma(Context& ctx, const MainLemmaParams& p) {
  std::mt19937_64 rng(ctx.seed);
  json rows = json::array();
  bool all_hold = true;
  double worst_slack = -std::numeric_limits<double>::infinity();
  std::optional<CsvWriter> csv;
  const auto path = ctx.csv_path();
  if (ctx.write) {
    csv.emplace(path, std::vector<std::string>{"index", "Q", "max_P", "slack", "exhaustive", "evaluated", "holds"},
                ctx.metadata());
  }
  for (std::size_t k = 0; k < p.cocycles; ++k) {
    std::vector<double> a;
    if (p.a) {
      a = p.a->values;
    } else {
      a.resize(p.n);
      for (auto& v : a) v = p.a_min + (p.a_max - p.a_min) * unit_uniform(rng());
    }
    const auto cocycle = ScalarCocycle::with_default_bound(a);
    const double q = worst_q(cocycle);
    const auto search = brute_force_worst(cocycle, p.samples, rng(), p.max_vertex_n);
    const double slack = search.value - q;
    const bool holds = search.value <= q + scaled_tolerance(1e-9, q);
    all_hold = all_hold && holds;
    worst_slack = std::max(worst_slack, slack);
    if (csv) {
      csv->cell(k).cell(q).cell(search.value).cell(slack).cell(search.exhaustive).cell(search.evaluated).cell(holds);
      csv->end_row();
    }
    if (k < 16) {
      rows.push_back({{"Q", q}, {"max_P", search.value}, {"exhaustive", search.exhaustive},
                      {"evaluated", search.evaluated}, {"holds", holds}});
    }
  }
  if (csv) {
    csv->close();
    ctx.outputs.push_back(path.string());
  }
  if (!all_hold) ctx.warnings.push_back("a perturbation exceeded Q(n)");
  return {{"n", p.n}, {"cocycles", p.cocycles}, {"samples", p.samples}, {"all_hold", all_hold},
          {"max_slack", worst_slack}, {"first_cocycles", rows}};
}

json run_dichotomy(Context& ctx, const DichotomyParams& p) {
  const auto& a = p.a.values;
  json out;
  std::size_t n0 = 0;
  if (p.n0) {
    n0 = *p.n0;
  } else {
    double q = 0.0;
    if (p.q) {
      q = *p.q;
    } else {
      const std::size_t len = std::min(p.q_horizon, a.size());
      if (len == 0) throw ValidationError("params.a is empty");
      q = worst_q(ScalarCocycle::with_default_bound(std::vector<double>(a.begin(), a.begin() + len)));
      out["q_horizon"] = len;
    }
    const auto r = n0_from_q(q);
    n0 = r.n0;
    out["q"] = q;
    out["q_used"] = r.q_used;
    out["q_clamped"] = r.clamped;
    if (r.clamped) ctx.warnings.push_back("Q = " + std::to_string(q) + " <= 1 clamped to 1 + 1e-6");
  }
  const auto report = classify(a, n0, p.thresholds);
  out["n0"] = n0;
  out["verdict"] = std::string(to_string(report.verdict));
  out["windows_tested"] = report.windows_tested;
  out["expanding_windows"] = report.expanding_windows;
  out["contracting_windows"] = report.contracting_windows;
  out["neutral_windows"] = report.neutral_windows;
  out["min_log_lambda"] = report.min_log_lambda;
  out["max_log_lambda"] = report.max_log_lambda;
  json witnesses = json::array();
  for (const auto& w : report.witnesses) {
    witnesses.push_back({{"start", w.start}, {"length", w.length}, {"log_lambda", w.log_lambda}});
  }
  out["witnesses"] = witnesses;

  if (ctx.write) {
    const double up = std::log(p.thresholds.expanding);
    const double down = std::log(p.thresholds.contracting);
    const auto path = ctx.csv_path();
    CsvWriter csv(path, {"start", "length", "log_lambda", "class"}, ctx.metadata());
    for (const auto& w : scan_windows(a, n0)) {
      csv.cell(w.start).cell(w.length).cell(w.log_lambda);
      csv.cell(w.log_lambda > up ? "expanding" : w.log_lambda < down ? "contracting" : "neutral");
      csv.end_row();
    }
    csv.close();
    ctx.outputs.push_back(path.string());
  }
  return out;
}

json run_periodic(Context& ctx, const PeriodicParams& p) {
  const auto family = build_family(system_of(ctx));
  const PeriodicOrbit p0 = find_periodic(family, 0.0, p.cycle, p.t_guess);
  const auto grid = p.grid.materialize();
  const auto cont = continue_periodic(family, p0, grid);
  const double v0 = velocity_velpp(family, p0, 0.0);

  json out{{"p0", p0.fiber.front()},
           {"orbit", p0.fiber},
           {"multiplier", p0.multiplier},
           {"newton_steps", p0.newton_steps},
           {"velocity_velpp", v0},
           {"samples", cont.samples.size()},
           {"forward_end", std::string(to_string(cont.forward_end))},
           {"backward_end", std::string(to_string(cont.backward_end))}};
  if (cont.forward_end != BranchEnd::Completed) ctx.warnings.push_back("forward branch: " + cont.forward_reason);
  if (cont.backward_end != BranchEnd::Completed) ctx.warnings.push_back("backward branch: " + cont.backward_reason);

  // Centered finite difference of the continued orbit at s = 0.
  const double h = 1e-4;
  try {
    const auto plus = find_periodic(family, h, p.cycle, p0.fiber.front() + v0 * h);
    const auto minus = find_periodic(family, -h, p.cycle, p0.fiber.front() - v0 * h);
    const double fd = (plus.fiber.front() - minus.fiber.front()) / (2.0 * h);
    out["finite_difference"] = {{"h", h}, {"value", fd}, {"abs_diff", std::abs(fd - v0)}};
  } catch (const Error& e) {
    ctx.warnings.push_back(std::string("finite-difference check skipped: ") + e.what());
  }

  if (p.series_terms > 0) {
    if (p0.multiplier < 1.0) {
      const auto sums = velocity_series_contracting(family.system(), p0, p.series_terms);
      const double limit = family.c1() * sums.back();
      out["series"] = {{"regime", "contracting"}, {"terms", p.series_terms}, {"limit", limit},
                       {"abs_diff_velpp", std::abs(limit - v0)}};
    } else {
      const auto series = velocity_series_expanding(family.system(), p0, p.series_terms);
      const double raw = family.c1() * series.partial_sums.back();
      const double signed_limit = family.c1() * series.signed_partial_sums.back();
      const bool signs_differ = (raw > 0.0) != (v0 > 0.0);
      out["series"] = {{"regime", "expanding"},
                       {"terms", p.series_terms},
                       {"limit", raw},
                       {"signed_limit", signed_limit},
                       {"abs_diff_magnitude", std::abs(std::abs(raw) - std::abs(v0))},
                       {"sign_discrepancy", signs_differ}};
      if (signs_differ) {
        ctx.warnings.push_back("expanding velocity series has the opposite sign of the velocity "
                               "formula; the negated series matches");
      }
    }
  }

  if (ctx.write) {
    const auto path = ctx.csv_path();
    CsvWriter csv(path, {"s", "p", "multiplier", "velocity", "lyapunov"}, ctx.metadata());
    for (std::size_t k = 0; k < cont.samples.size(); ++k) {
      const auto& smp = cont.samples[k];
      csv.cell(smp.s).cell(smp.p).cell(smp.multiplier).cell(smp.velocity).cell(lyapunov_periodic(cont, k));
      csv.end_row();
    }
    csv.close();
    ctx.outputs.push_back(path.string());
  }
  return out;
}

json run_nu(Context& ctx, const NuParams& p) {
  const auto family = build_family(system_of(ctx));
  const auto& base = family.system().base();
  std::mt19937_64 rng(ctx.seed);
  ConjugateOptions options;
  options.depth = p.depth;

  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = -std::numeric_limits<double>::infinity();
  std::size_t contracting = 0;
  std::size_t expanding = 0;
  bool holds = true;
  const double c1 = family.c1();

  std::optional<CsvWriter> csv;
  const auto path = ctx.csv_path();
  if (ctx.write) {
    csv.emplace(path, std::vector<std::string>{"x", "t", "s", "nu", "ratio", "regime", "residual"}, ctx.metadata());
  }
  for (std::size_t i = 0; i < p.samples; ++i) {
    const double u = unit_uniform(rng());
    const double x = base.kind() == BaseSystem::Kind::FiniteCycle
                         ? std::floor(u * static_cast<double>(base.period()))
                         : u;
    const double s = p.s_max * (1.0 - unit_uniform(rng()));  // (0, s_max]
    const Point z = invariant_point(family, x, 0.0, p.depth);
    const auto cp = conjugate_point(family, z, s, options);
    const double ratio = cp.nu / s;
    min_ratio = std::min(min_ratio, ratio);
    max_ratio = std::max(max_ratio, ratio);
    if (cp.regime == FiberRegime::Contracting) {
      ++contracting;
      holds = holds && ratio >= c1 * (1.0 - 1e-9);
    } else {
      ++expanding;
      holds = holds && ratio <= -c1 * (1.0 - 1e-9);
    }
    if (csv) {
      csv->cell(z.x).cell(z.t).cell(s).cell(cp.nu).cell(ratio);
      csv->cell(cp.regime == FiberRegime::Contracting ? "contracting" : "expanding").cell(cp.residual);
      csv->end_row();
    }
  }
  if (csv) {
    csv->close();
    ctx.outputs.push_back(path.string());
  }
  if (!holds) ctx.warnings.push_back("nu(z, s) / s violated the sign bound on some sample");
  return {{"samples", p.samples}, {"min_ratio", finite_or_null(min_ratio)},
          {"max_ratio", finite_or_null(max_ratio)}, {"contracting_samples", contracting},
          {"expanding_samples", expanding}, {"lemma_holds", holds}};
}

json run_schwarzian(Context& ctx, const SchwarzianParams& p) {
  const FiberMap f = build_fiber(p.f);
  const FiberMap g = build_fiber(p.g);
  std::mt19937_64 rng(ctx.seed);
  double max_residual = 0.0;
  std::size_t undefined = 0;
  json out{{"formula", p.formula == SchwarzianFormula::Standard ? "standard" : "literal"}};

  std::optional<CsvWriter> csv;
  const auto path = ctx.csv_path();
  if (ctx.write) {
    csv.emplace(path, std::vector<std::string>{"t", "S_f_at_g", "S_g", "S_fg", "residual"}, ctx.metadata());
  }
  for (std::size_t i = 0; i < p.points; ++i) {
    const double t = p.t_min + (p.t_max - p.t_min) * unit_uniform(rng());
    double sf = std::numeric_limits<double>::quiet_NaN();
    double sg = sf;
    double sfg = sf;
    double res = sf;
    try {
      sf = schwarzian(f, g(t), p.formula);
      sg = schwarzian(g, t, p.formula);
      sfg = schwarzian(fibers::compose(f, g), t, p.formula);
      res = compose_check(f, g, t, p.formula);
      max_residual = std::max(max_residual, res);
    } catch (const DomainError&) {
      if (p.formula == SchwarzianFormula::Standard) throw;
      ++undefined;
    }
    if (csv) {
      csv->cell(t).cell(sf).cell(sg).cell(sfg).cell(res);
      csv->end_row();
    }
  }
  if (csv) {
    csv->close();
    ctx.outputs.push_back(path.string());
  }
  out["points"] = p.points;
  out["max_residual"] = max_residual;
  if (undefined) {
    out["undefined_points"] = undefined;
    ctx.warnings.push_back(std::to_string(undefined) + " points where the literal formula divides by g'' = 0");
  }

  if (p.distortion) {
    const auto family = build_family(system_of(ctx));
    const auto& d = *p.distortion;
    json ratios = json::array();
    bool converged = true;
    std::optional<CsvWriter> dcsv;
    const auto dpath = ctx.csv_path("_distortion");
    if (ctx.write) {
      dcsv.emplace(dpath, std::vector<std::string>{"n", "ratio", "refined_ratio", "converged", "image_length"},
                   ctx.metadata());
    }
    double lo = d.interval.lo;
    double hi = d.interval.hi;
    double x = d.x0;
    double max_ratio = 1.0;
    bool monotone = true;
    double previous = 1.0;
    for (std::size_t n = 1; n <= d.horizon; ++n) {
      const auto r = distortion_ratio(family.system(), d.x0, d.interval, n, d.samples);
      const FiberMap gx = family.system().fiber(x);
      lo = gx(lo);
      hi = gx(hi);
      x = family.system().base().forward(x);
      converged = converged && r.converged;
      monotone = monotone && r.ratio >= previous * (1.0 - 1e-12);
      previous = r.ratio;
      max_ratio = std::max(max_ratio, r.ratio);
      ratios.push_back(r.ratio);
      if (dcsv) {
        dcsv->cell(n).cell(r.ratio).cell(r.refined_ratio).cell(r.converged).cell(std::abs(hi - lo));
        dcsv->end_row();
      }
    }
    if (dcsv) {
      dcsv->close();
      ctx.outputs.push_back(dpath.string());
    }
    if (!converged) ctx.warnings.push_back("distortion ratio changed by >= 1% when doubling the samples");
    out["distortion"] = {{"ratios", ratios}, {"max_ratio", max_ratio}, {"non_decreasing", monotone},
                         {"converged", converged}};
  }

  if (p.interval_track) {
    const auto family = build_family(system_of(ctx));
    const auto& it = *p.interval_track;
    const Point z = it.t ? Point{it.x0, *it.t} : invariant_point(family, it.x0, 0.0);
    const auto track = interval_track(family, z, it.s, it.n, it.horizon, it.gamma);
    out["interval_track"] = {{"z", {z.x, z.t}},
                             {"s", it.s},
                             {"n", it.n},
                             {"gamma", it.gamma},
                             {"ordered", track.ordered},
                             {"escaped", track.escaped},
                             {"min_ratio", finite_or_null(track.min_ratio)},
                             {"first_below_gamma", track.first_below_gamma ? json(*track.first_below_gamma)
                                                                             : json(nullptr)}};
    if (!track.ordered) ctx.warnings.push_back("interval endpoints are out of order");
    if (ctx.write) {
      const auto ipath = ctx.csv_path("_interval");
      CsvWriter icsv(ipath, {"m", "length", "ratio"}, ctx.metadata());
      for (std::size_t m = 0; m < track.lengths.size(); ++m) {
        icsv.cell(m).cell(track.lengths[m]).cell(track.ratios[m]);
        icsv.end_row();
      }
      icsv.close();
      ctx.outputs.push_back(ipath.string());
    }
  }
  return out;
}

json run_holder(Context& ctx, const HolderParams& p) {
  const SystemSpec& spec = system_of(ctx);
  const auto family = build_family(spec);
  CurveTarget target;
  std::optional<double> expected;
  if (spec.catalog) {
    const auto entry = catalog_entry(*spec.catalog);
    target = entry.target;
    expected = entry.expected_alpha;
  }
  if (p.branch) target.branch = *p.branch;
  if (p.radius) target.radius = *p.radius;
  if (p.t0) target.t0 = *p.t0;
  if (p.cycle) target.cycle = *p.cycle;
  if (p.z) target.z = *p.z;

  const auto grid = p.grid.materialize();
  const auto curve = displacement_curve(p.source, family, target, grid);
  for (const auto& note : curve.notes) ctx.warnings.push_back(note);

  if (ctx.write) {
    const auto path = ctx.csv_path();
    CsvWriter csv(path, {"s", "d", "source"}, ctx.metadata());
    for (const auto& smp : curve.samples) {
      std::string src(to_string(smp.source));
      if (smp.branch) src += std::string(to_string(*smp.branch));
      csv.cell(smp.s).cell(smp.d).cell(src);
      csv.end_row();
    }
    csv.close();
    ctx.outputs.push_back(path.string());
  }

  json out{{"source", std::string(to_string(p.source))},
           {"grid_size", grid.size()},
           {"samples", curve.samples.size()},
           {"skipped", curve.skipped}};
  const HolderFit fit = fit_holder(curve);
  out["fit"] = fit_json(fit);
  out["fit_dropped"] = fit.dropped;
  if (expected) out["expected_alpha"] = *expected;
  if (ctx.write) {
    const auto path = ctx.out_dir / (ctx.config.name + "_fit.json");
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << fit_json(fit).dump(2) << '\n';
    if (!f) throw Error("cannot write " + path.string());
    ctx.outputs.push_back(path.string());
  }
  return out;
}

}  // namespace holderlab::io::detail
