// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Reference values come from tests/oracles.hpp or closed forms.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "holderlab/cocycle.hpp"
#include "holderlab/csv.hpp"
#include "holderlab/hyperbolicity.hpp"
#include "holderlab/run.hpp"
#include "holderlab/schwarzian.hpp"
#include "holderlab/skew_product.hpp"
#include "oracles.hpp"

using namespace holderlab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kData = HOLDERLAB_TEST_DATA_DIR;

// Collects the first few failure messages of one criterion.
struct Check {
  std::ostringstream detail;
  int failures = 0;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures < 3) detail << (failures ? "; " : "") << what;
    ++failures;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("holderlab-acceptance-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

io::RunReport run_config(const json& doc, const fs::path& out) {
  io::RunOptions opt;
  opt.out_dir = out;
  return io::run(io::parse_config(doc, kData), opt);
}

io::RunReport run_file(const std::string& file, const fs::path& out) {
  io::RunOptions opt;
  opt.out_dir = out;
  return io::run_file(kData / file, opt);
}

ScalarCocycle cocycle(std::vector<double> a) { return ScalarCocycle::with_default_bound(std::move(a)); }

TranslationFamily one_point(FiberMap g) {
  return TranslationFamily(SkewProductSystem(BaseSystem::finite_cycle(1), {std::move(g)}));
}

// 1. P(w) <= Q(n) over all cube vertices and 1000 random w.
void main_lemma(Check& c) {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  for (std::size_t n = 2; n <= 10; ++n) {
    for (int k = 0; k < 200; ++k) {
      const auto a = oracle::uniform_vector(rng, n, 0.2, 5.0);
      const double q = static_cast<double>(oracle::breakpoint_min_sup(a, std::vector<double>(n, 1.0)));
      const double q_lib = worst_q(cocycle(a));
      c.expect(oracle::close(q_lib, q, 1e-9), "Q(n) disagrees with oracle at n=" + std::to_string(n));
      const auto search = brute_force_worst(cocycle(a), 1000, rng());
      c.expect(search.exhaustive, "vertex enumeration skipped at n=" + std::to_string(n));
      c.expect(search.value <= q + 1e-9 * std::max(1.0, q),
               "P=" + num(search.value) + " > Q=" + num(q) + " at n=" + std::to_string(n));
    }
  }
  const double t = seconds_since(start);
  c.expect(t < 60.0, "runtime " + num(t) + " s");
  c.detail << (c.failures ? "; " : "") << "1800 cocycles, " << num(t) << " s";
}

// 2. Pairwise enumeration against golden-section minimisation.
void minimax_oracle(Check& c) {
  const auto start = Clock::now();
  std::mt19937_64 rng(31);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 1 + rng() % 30;
    const auto a = oracle::uniform_vector(rng, n, 0.2, 5.0);
    const auto w = oracle::uniform_vector(rng, n, -1.0, 1.0);
    const double p = min_sup_value(cocycle(a), Perturbation(w));
    const double g = static_cast<double>(oracle::golden_min_sup(a, w));
    const double rel = std::abs(p - g) / std::max(1.0, std::abs(g));
    worst = std::max(worst, rel);
    c.expect(rel <= 1e-9, "instance " + std::to_string(k) + ": " + num(p) + " vs " + num(g));
  }
  const double t = seconds_since(start);
  c.expect(t < 30.0, "runtime " + num(t) + " s");
  c.detail << (c.failures ? "; " : "") << "max rel diff " << num(worst) << ", " << num(t) << " s";
}

// 3. Closed forms.
void closed_forms(Check& c) {
  for (std::size_t n = 1; n <= 20; ++n) {
    const double q = worst_q(ScalarCocycle::constant(1.0, n));
    c.expect(std::abs(q - n / 2.0) <= 1e-12, "Q(" + std::to_string(n) + ") = " + num(q) + " for a = 1");
  }
  const auto r = min_sup(ScalarCocycle::constant(2.0, 10), Perturbation::unit(10));
  c.expect(std::abs(r.value - 1023.0 / 1025.0) <= 1e-12, "Q(10) = " + num(r.value) + " for a = 2");
  c.expect(r.witness_pair == std::pair<std::size_t, std::size_t>{0, 10}, "witness pair is not (0, 10)");
  const auto o = oracle::breakpoint_min_sup(std::vector<double>(10, 2.0), std::vector<double>(10, 1.0));
  c.expect(std::abs(static_cast<double>(o) - 1023.0 / 1025.0) <= 1e-12, "oracle disagrees with 1023/1025");
  // The witness pair alone realises the value.
  const AffineTrack track = affine_tracks(ScalarCocycle::constant(2.0, 10), Perturbation::unit(10));
  c.expect(std::abs(pairwise_min(track, 0, 10) - 1023.0 / 1025.0) <= 1e-12, "pair (0, 10) does not attain Q");
}

// 4. Homogeneity and the lower bound.
void homogeneity(Check& c) {
  std::mt19937_64 rng(44);
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 1 + rng() % 30;
    const auto cyc = cocycle(oracle::uniform_vector(rng, n, 0.2, 5.0));
    const Perturbation w(oracle::uniform_vector(rng, n, -1.0, 1.0));
    const double d = std::uniform_real_distribution<double>(-10.0, 10.0)(rng);
    const double p = min_sup_value(cyc, w);
    const double pd = min_sup_value(cyc, w.scaled(d));
    c.expect(std::abs(pd - std::abs(d) * p) <= 1e-12 * std::max(1.0, std::abs(d) * p),
             "P(dw) != |d| P(w) on instance " + std::to_string(k));
  }
  for (double d : {0.1, 1.0, 10.0}) {
    for (int k = 0; k < 1000; ++k) {
      const std::size_t n = 1 + rng() % 30;
      const auto cyc = cocycle(oracle::uniform_vector(rng, n, 0.2, 5.0));
      const Perturbation w(oracle::uniform_vector(rng, n, d, 3 * d));
      const auto lb = lower_bound_check(cyc, w, d);
      c.expect(lb.holds, "P(w) < d Q(n) for d = " + num(d) + ", slack " + num(lb.slack));
    }
  }
}

// 5. Dichotomy.
void dichotomy(Check& c) {
  c.expect(n0_from_q(2.0).n0 == 4, "n0(2) = " + std::to_string(n0_from_q(2.0).n0));
  const auto verdict = [](double v) { return classify(std::vector<double>(40, v), 4).verdict; };
  c.expect(verdict(2.0) == Verdict::Expanding, "a = 2 not Expanding");
  c.expect(verdict(0.4) == Verdict::Contracting, "a = 0.4 not Contracting");
  c.expect(verdict(1.0) == Verdict::NonHyperbolic, "a = 1 not NonHyperbolic");

  const auto g = fibers::cubic_neutral();
  std::vector<double> a;
  double t = 0.5;
  for (int i = 0; i < 2000; ++i) {
    a.push_back(g.d1(t));
    t = g(t);
  }
  const auto q = worst_q(cocycle(std::vector<double>(a.begin(), a.begin() + 50)));
  const auto n0 = n0_from_q(q).n0;
  const auto r = classify(a, n0);
  c.expect(r.verdict == Verdict::NonHyperbolic,
           "t - t^3 orbit gives " + std::string(to_string(r.verdict)) + " with n0 = " + std::to_string(n0));
}

// 6. Periodic-orbit velocity on the affine three-cycle.
void velocity(Check& c) {
  const SkewProductSystem sys(BaseSystem::finite_cycle(3),
                              {fibers::affine(0.5, 1.0), fibers::affine(0.5, 0.0), fibers::affine(2.0, 0.0)});
  const TranslationFamily fam(sys);
  const auto p = find_periodic(fam, 0.0, {0.0, 3}, 0.0);
  const double v = velocity_velpp(fam, p, 0.0);
  c.expect(std::abs(v - 8.0) <= 1e-12, "velPP = " + num(v));

  const double h = 1e-4;
  const auto cont = continue_periodic(fam, p, std::vector<double>{-h, 0.0, h});
  if (cont.samples.size() == 3) {
    const double fd = (cont.samples[2].p - cont.samples[0].p) / (2 * h);
    c.expect(std::abs(fd - v) <= 1e-6, "finite difference " + num(fd));
    const double exact = static_cast<double>(oracle::affine_cycle_point({0.5, 0.5, 2.0}, {1.0, 0.0, 0.0}, h));
    c.expect(std::abs(cont.samples[2].p - exact) <= 1e-12, "continued orbit off the closed form");
  } else {
    c.expect(false, "continuation returned " + std::to_string(cont.samples.size()) + " samples");
  }
  const double limit = velocity_series_contracting(sys, p, 300).back();
  c.expect(std::abs(limit - v) <= 1e-8, "series limit " + num(limit));

  const auto report = run_file("periodic_three_cycle.json", scratch("velocity"));
  c.expect(report.status == io::kSuccess, "periodic run failed: " + report.error);
  if (report.status == io::kSuccess) {
    c.expect(report.results["finite_difference"]["abs_diff"].get<double>() <= 1e-6, "report FD check");
    c.expect(report.results["series"]["abs_diff_velpp"].get<double>() <= 1e-8, "report series check");
  }
}

// 7. Expanding series: magnitudes agree, signs differ, and the report says so.
void expanding_sign(Check& c) {
  const auto out = scratch("expanding");
  for (double lambda : {2.0, 4.0}) {
    json doc = {{"schema_version", 1},
                {"kind", "periodic-continuation"},
                {"name", "expanding-" + num(lambda)},
                {"system", {{"base", {{"kind", "finite-cycle"}, {"period", 1}}},
                            {"fibers", {{{"name", "affine"}, {"params", {{"lambda", lambda}}}}}}}},
                {"params", {{"grid", {{"values", {-0.001, 0.0, 0.001}}}}, {"series_terms", 200}}}};
    const auto r = run_config(doc, out);
    if (r.status != io::kSuccess) {
      c.expect(false, "run failed for lambda " + num(lambda) + ": " + r.error);
      continue;
    }
    const auto& s = r.results["series"];
    const double v = r.results["velocity_velpp"].get<double>();
    const double raw = s["limit"].get<double>();
    c.expect(std::abs(v + 1.0 / (lambda - 1.0)) <= 1e-12, "velPP " + num(v));
    c.expect(std::abs(std::abs(raw) - std::abs(v)) <= 1e-8, "|limit| " + num(raw) + " vs |velPP| " + num(v));
    c.expect(raw * v < 0.0, "signs agree for lambda " + num(lambda));
    c.expect(s["sign_discrepancy"].get<bool>(), "discrepancy not recorded");
    c.expect(!r.warnings.empty(), "no warning in the report");
  }
}

// 8. nu(z, s) / s against the sign bound and, for affine fibers, the exact value.
void nu_lemma(Check& c) {
  const auto out = scratch("nu");
  auto check = [&](const io::RunReport& r, bool contracting, std::optional<double> exact) {
    if (r.status != io::kSuccess) {
      c.expect(false, r.name + " failed: " + r.error);
      return;
    }
    const double lo = r.results["min_ratio"].get<double>();
    const double hi = r.results["max_ratio"].get<double>();
    if (contracting) {
      c.expect(r.results["expanding_samples"].get<int>() == 0, r.name + ": expanding samples");
      c.expect(lo >= 1.0 - 1e-9, r.name + ": min ratio " + num(lo));
    } else {
      c.expect(r.results["contracting_samples"].get<int>() == 0, r.name + ": contracting samples");
      c.expect(hi <= -1.0 + 1e-9, r.name + ": max ratio " + num(hi));
    }
    if (exact) {
      c.expect(std::abs(lo - *exact) <= 1e-9 && std::abs(hi - *exact) <= 1e-9,
               r.name + ": ratio range [" + num(lo) + ", " + num(hi) + "] vs " + num(*exact));
    }
  };
  check(run_file("nu_contracting.json", out), true, std::nullopt);
  check(run_file("nu_expanding.json", out), false, -1.0 / (1.5 - 1.0));

  for (double lambda : {0.5, 0.8, 2.0}) {
    json doc = {{"schema_version", 1},
                {"kind", "nu-check"},
                {"name", "nu-affine-" + num(lambda)},
                {"seed", 3},
                {"system", {{"base", {{"kind", "rotation"}, {"omega", 0.7548776662466927}}},
                            {"fibers", {{{"name", "affine"}, {"params", {{"lambda", lambda}}}}}},
                            {"c_amp", 0.4}}},
                {"params", {{"samples", 100}, {"s_max", 0.01}}}};
    // Affine fibers: nu = s sum lambda^k = s / (1 - lambda), or -s / (lambda - 1).
    check(run_config(doc, out), lambda < 1.0, 1.0 / (1.0 - lambda));
  }
}

// 9. Holder exponents of the catalog examples.
void holder_fits(Check& c) {
  const auto out = scratch("holder");
  const auto start = Clock::now();
  std::string fitted_list;
  const std::pair<const char*, double> cases[] = {
      {"holder_quadratic.json", 0.5}, {"holder_cubic.json", 1.0 / 3.0}, {"holder_affine-contracting.json", 1.0}};
  for (const auto& [file, alpha] : cases) {
    const auto r = run_file(file, out);
    if (r.status != io::kSuccess) {
      c.expect(false, std::string(file) + ": " + r.error);
      continue;
    }
    const double fitted = r.results["fit"]["alpha"].get<double>();
    c.expect(std::abs(fitted - alpha) <= 0.01, std::string(file) + ": alpha " + num(fitted));
    fitted_list += (fitted_list.empty() ? "" : ", ") + r.name + " alpha=" + num(fitted);
  }
  const double t = seconds_since(start);
  c.expect(t < 5.0, "runtime " + num(t) + " s");
  c.detail << (c.failures ? "; " : "") << fitted_list << ", " << num(t) << " s";
}

// 10. Schwarzian derivative identities.
void schwarzian_checks(Check& c) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  const FiberMap cubic = fibers::cubic_neutral();
  const FiberMap poly = fibers::polynomial({0.0, 1.0, 0.1, -0.2});
  const FiberMap mob = fibers::mobius(1.0, 0.1, 0.2, 1.0);
  const std::pair<FiberMap, FiberMap> pairs[] = {{cubic, mob}, {mob, cubic}, {poly, mob}, {mob, poly}};
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double t = unit(rng);
    for (const auto& [f, g] : pairs) worst = std::max(worst, compose_check(f, g, t));
  }
  c.expect(worst < 1e-6, "composition residual " + num(worst));

  const FiberMap mobius_maps[] = {mob, fibers::mobius(2.0, -1.0, 1.0, 3.0), fibers::mobius(0.5, 0.0, -0.3, 1.0)};
  double worst_s = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double t = unit(rng);
    for (const auto& m : mobius_maps) worst_s = std::max(worst_s, std::abs(schwarzian(m, t)));
  }
  c.expect(worst_s < 1e-9, "Mobius |S| " + num(worst_s));
  const double s0 = schwarzian(cubic, 0.0);
  c.expect(std::abs(s0 + 6.0) <= 1e-9, "S(t - t^3)(0) = " + num(s0));
  c.detail << (c.failures ? "; " : "") << "max residual " << num(worst) << ", max Mobius |S| " << num(worst_s);
}

// 11. Distortion and interval monitors.
void distortion_checks(Check& c) {
  const SkewProductSystem affine(BaseSystem::finite_cycle(2), {fibers::affine(0.5, 0.1), fibers::affine(1.7)});
  for (std::size_t n : {1u, 5u, 20u}) {
    const double r = distortion_ratio(affine, 0.0, {-0.3, 0.4}, n).ratio;
    c.expect(r == 1.0, "affine distortion " + num(r) + " at n = " + std::to_string(n));
  }

  // 0.9 tanh has S = -2 and contracts; images of a short interval stay short.
  const SkewProductSystem tanh_sys(BaseSystem::finite_cycle(1), {fibers::scaled_tanh(0.9)});
  const Interval start{0.05, 0.06};
  const double delta = 0.02;
  double lo = start.lo;
  double hi = start.hi;
  double log_bound = 0.0;  // sum over images of sup |g''/g'| times length
  double max_ratio = 0.0;
  const FiberMap g = fibers::scaled_tanh(0.9);
  for (std::size_t n = 1; n <= 50; ++n) {
    c.expect(hi - lo < delta, "image length " + num(hi - lo) + " >= delta");
    log_bound += 2.0 * std::tanh(std::max(std::abs(lo), std::abs(hi))) * (hi - lo);
    lo = g(lo);
    hi = g(hi);
    const auto d = distortion_ratio(tanh_sys, 0.0, start, n);
    c.expect(std::isfinite(d.ratio) && d.ratio <= std::exp(log_bound) * (1 + 1e-12),
             "ratio " + num(d.ratio) + " above bound " + num(std::exp(log_bound)) + " at n = " + std::to_string(n));
    max_ratio = std::max(max_ratio, d.ratio);
  }

  const auto track = interval_track(one_point(fibers::affine(0.5)), {0.0, 0.0}, 0.01, 2, 30);
  double worst = 0.0;
  for (std::size_t m = 0; m < track.ratios.size(); ++m) {
    worst = std::max(worst, std::abs(track.ratios[m] - std::pow(0.5, static_cast<double>(m))));
  }
  c.expect(track.ratios.size() == 31 && worst <= 1e-12, "interval decay off 0.5^m by " + num(worst));
  c.expect(track.first_below_gamma && *track.first_below_gamma == 2, "first m below 1/2 is not 2");

  const auto r = run_file("schwarzian.json", scratch("distortion"));
  c.expect(r.status == io::kSuccess, "schwarzian run failed: " + r.error);
  c.detail << (c.failures ? "; " : "") << "max ratio over horizon 50: " << num(max_ratio);
}

// 12. Seeded configs rerun to byte-identical data rows.
void reproducibility(Check& c) {
  const char* files[] = {"main_lemma.json", "nu_contracting.json", "nu_expanding.json", "schwarzian.json",
                         "periodic_three_cycle.json", "holder_cubic.json"};
  const auto a = scratch("repro-a");
  const auto b = scratch("repro-b");
  std::size_t compared = 0;
  for (const char* f : files) {
    const auto ra = run_file(f, a);
    const auto rb = run_file(f, b);
    c.expect(ra.status == io::kSuccess && rb.status == io::kSuccess, std::string(f) + " failed");
    for (const auto& out : ra.outputs) {
      const fs::path pa(out);
      if (pa.extension() != ".csv") continue;
      const fs::path pb = b / pa.filename();
      c.expect(io::data_lines(pa) == io::data_lines(pb), pa.filename().string() + " differs");
      ++compared;
    }
  }
  c.expect(compared >= 6, "only " + std::to_string(compared) + " CSV files compared");
  c.detail << (c.failures ? "; " : "") << compared << " CSV files identical";
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Check&)>> criteria[] = {
      {"main lemma over cube vertices and samples", main_lemma},
      {"pairwise minimax equals golden-section oracle", minimax_oracle},
      {"closed forms Q = n/2 and 1023/1025", closed_forms},
      {"homogeneity and lower bound", homogeneity},
      {"dichotomy verdicts", dichotomy},
      {"periodic velocity on the affine three-cycle", velocity},
      {"expanding series sign audit", expanding_sign},
      {"nu displacement sign bound", nu_lemma},
      {"Holder exponents of the catalog examples", holder_fits},
      {"Schwarzian identities", schwarzian_checks},
      {"distortion and interval monitors", distortion_checks},
      {"reproducibility of seeded runs", reproducibility},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, body] : criteria) {
    ++index;
    Check c;
    try {
      body(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const bool ok = c.failures == 0;
    failed += ok ? 0 : 1;
    std::printf("%s %2d  %s  (%s)\n", ok ? "PASS" : "FAIL", index, name, c.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
