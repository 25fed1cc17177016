#include "holderlab/holder.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>

#include "holderlab/errors.hpp"

namespace holderlab {
namespace {

std::vector<double> checked_grid(std::span<const double> s_grid) {
  std::vector<double> grid(s_grid.begin(), s_grid.end());
  for (double s : grid) {
    if (!std::isfinite(s) || s < kMinGridS) {
      throw ValidationError("grid value " + std::to_string(s) + " is below the minimum 1e3*eps");
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.empty()) throw ValidationError("s grid is empty");
  return grid;
}

std::vector<FiberMap> cycle_maps(const TranslationFamily& family, const BaseCycle& cycle) {
  if (cycle.period == 0) throw ValidationError("cycle period must be >= 1");
  const auto& base = family.system().base();
  if (!base.returns_after(cycle.x0, cycle.period)) {
    throw ValidationError("base point does not return after the cycle period");
  }
  std::vector<FiberMap> maps;
  double x = cycle.x0;
  for (std::size_t i = 0; i < cycle.period; ++i) {
    maps.push_back(family.system().fiber(x));
    x = base.forward(x);
  }
  return maps;
}

std::optional<double> track_root(const std::vector<FiberMap>& maps, double shift, const CurveTarget& target) {
  auto f = [&](double t) {
    double u = t;
    for (const auto& g : maps) {
      if (!g.domain().contains(u)) return std::numeric_limits<double>::quiet_NaN();
      u = g(u) + shift;
    }
    return u - t;
  };
  double lo = target.branch == Branch::Positive ? target.t0 : target.t0 - target.radius;
  double hi = target.branch == Branch::Positive ? target.t0 + target.radius : target.t0;
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if (!std::isfinite(f_lo) || !std::isfinite(f_hi)) return std::nullopt;
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) return std::nullopt;
  std::uintmax_t max_iter = 400;
  const auto bracket =
      boost::math::tools::bisect(f, lo, hi, boost::math::tools::eps_tolerance<double>(53), max_iter);
  return 0.5 * (bracket.first + bracket.second);
}

}  // namespace

std::string_view to_string(CurveSource source) {
  switch (source) {
    case CurveSource::Continuation:
      return "continuation";
    case CurveSource::RootTracking:
      return "root-tracking";
    case CurveSource::ConjugatePoint:
      return "conjugate-point";
  }
  return "root-tracking";
}

std::string_view to_string(Branch branch) { return branch == Branch::Positive ? "+" : "-"; }

CurveSource parse_curve_source(std::string_view text) {
  for (auto s : {CurveSource::Continuation, CurveSource::RootTracking, CurveSource::ConjugatePoint}) {
    if (to_string(s) == text) return s;
  }
  throw ValidationError("unknown curve source '" + std::string(text) + "'");
}

Branch parse_branch(std::string_view text) {
  if (text == "+" || text == "positive") return Branch::Positive;
  if (text == "-" || text == "negative") return Branch::Negative;
  throw ValidationError("unknown branch '" + std::string(text) + "'");
}

ContinuationCurve displacement_curve(CurveSource source, const TranslationFamily& family,
                                     const CurveTarget& target, std::span<const double> s_grid) {
  const auto grid = checked_grid(s_grid);
  ContinuationCurve curve;

  switch (source) {
    case CurveSource::RootTracking: {
      if (!(target.radius > 0.0)) throw ValidationError("root-tracking radius must be > 0");
      const auto maps = cycle_maps(family, target.cycle);
      for (double s : grid) {
        const auto root = track_root(maps, family.c1() * s, target);
        if (!root) {
          curve.skipped.push_back(s);
          continue;
        }
        curve.samples.push_back({s, std::abs(*root - target.t0), source, target.branch});
      }
      if (!curve.skipped.empty()) {
        curve.notes.push_back(std::to_string(curve.skipped.size()) + " grid values have no root on the " +
                              std::string(to_string(target.branch)) + " branch");
      }
      break;
    }
    case CurveSource::Continuation: {
      const PeriodicOrbit p0 = find_periodic(family, 0.0, target.cycle, target.t0);
      const auto cont = continue_periodic(family, p0, grid);
      for (double s : grid) {
        auto it = std::find_if(cont.samples.begin(), cont.samples.end(),
                               [s](const ContinuationSample& c) { return c.s == s; });
        if (it == cont.samples.end()) {
          curve.skipped.push_back(s);
          continue;
        }
        curve.samples.push_back({s, std::abs(it->p - p0.fiber.front()), source, std::nullopt});
      }
      if (cont.forward_end != BranchEnd::Completed) {
        curve.notes.push_back("continuation stopped: " + std::string(to_string(cont.forward_end)) + " (" +
                              cont.forward_reason + ")");
      }
      break;
    }
    case CurveSource::ConjugatePoint: {
      for (double s : grid) {
        curve.samples.push_back({s, std::abs(nu(family, target.z, s)), source, std::nullopt});
      }
      break;
    }
  }
  return curve;
}

HolderFit fit_holder(const ContinuationCurve& curve) {
  HolderFit fit;
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& sample : curve.samples) {
    if (!(sample.s > 0.0) || !std::isfinite(sample.d) || sample.d < 0.0) {
      throw ValidationError("curve sample (s = " + std::to_string(sample.s) + ", d = " +
                            std::to_string(sample.d) + ") is invalid");
    }
    if (sample.d == 0.0) {
      ++fit.dropped;
      continue;
    }
    xs.push_back(std::log(sample.s));
    ys.push_back(std::log(sample.d));
  }
  fit.n_samples = xs.size();
  if (xs.size() < 4) {
    throw ValidationError("Hölder fit needs at least 4 samples with d > 0, got " + std::to_string(xs.size()));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("Hölder fit needs at least two distinct s values");
  fit.alpha = sxy / sxx;
  const double intercept = my - fit.alpha * mx;
  fit.C = std::exp(intercept);
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + fit.alpha * xs[i]);
    fit.residuals.push_back(r);
    ss_res += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.r2 = std::clamp(fit.r2, 0.0, 1.0);
  return fit;
}

std::vector<CatalogEntry> example_library() {
  const auto one_point = [](FiberMap g) {
    return TranslationFamily(SkewProductSystem(BaseSystem::finite_cycle(1), std::vector<FiberMap>{std::move(g)}));
  };
  std::vector<CatalogEntry> lib;
  lib.push_back({"quadratic", "t - t^2 + s: roots +-sqrt(s) for s > 0, none for s < 0",
                 one_point(fibers::quadratic_neutral()), CurveTarget{}, 0.5});
  lib.push_back({"cubic", "t - t^3 + s: unique root s^(1/3) on both sides",
                 one_point(fibers::cubic_neutral()), CurveTarget{}, 1.0 / 3.0});
  CurveTarget wide;
  wide.radius = 1.0;
  lib.push_back({"affine-contracting", "0.5 t + s: fixed point 2 s", one_point(fibers::affine(0.5)), wide, 1.0});
  CurveTarget negative = wide;
  negative.branch = Branch::Negative;
  lib.push_back({"affine-expanding", "2 t + s: fixed point -s", one_point(fibers::affine(2.0)), negative, 1.0});
  lib.push_back({"neutral", "t + s: no fixed point for s != 0", one_point(fibers::identity()), wide,
                 std::nullopt});
  lib.push_back({"tanh-contracting", "0.5 tanh(t) + s: negative Schwarzian, attracting fixed point",
                 one_point(fibers::scaled_tanh(0.5)), wide, 1.0});
  return lib;
}

CatalogEntry catalog_entry(std::string_view name) {
  for (auto& entry : example_library()) {
    if (entry.name == name) return entry;
  }
  throw ValidationError("unknown catalog family '" + std::string(name) + "'");
}

std::vector<double> dyadic_grid(double s_min, double s_max) {
  if (!(s_min > 0.0) || !(s_max >= s_min) || !std::isfinite(s_max)) {
    throw ValidationError("dyadic grid needs 0 < s_min <= s_max");
  }
  if (s_min < kMinGridS) throw ValidationError("dyadic grid s_min is below 1e3*eps");
  std::vector<double> grid;
  for (int k = 0; k < 1100; ++k) {
    const double s = std::ldexp(1.0, -k);
    if (s < s_min) break;
    if (s <= s_max) grid.push_back(s);
  }
  // 2^k for s_max > 1
  for (int k = 1; std::ldexp(1.0, k) <= s_max; ++k) grid.push_back(std::ldexp(1.0, k));
  std::sort(grid.begin(), grid.end());
  return grid;
}

}  // namespace holderlab
