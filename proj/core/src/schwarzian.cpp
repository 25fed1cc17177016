#include "holderlab/schwarzian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "holderlab/errors.hpp"

namespace holderlab {
namespace {

struct DerivativeRange {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
};

double iterate_derivative(const std::vector<FiberMap>& maps, double t) {
  double d = 1.0;
  for (const auto& g : maps) {
    if (!std::isfinite(t) || !g.domain().contains(t)) {
      throw DomainError("iterate at t = " + std::to_string(t) + " leaves the domain of " + g.name());
    }
    d *= g.d1(t);
    t = g(t);
  }
  return d;
}

DerivativeRange sample_derivatives(const std::vector<FiberMap>& maps, Interval interval,
                                   std::size_t samples) {
  DerivativeRange range;
  const std::size_t count = interval.length() == 0.0 ? 1 : samples;
  for (std::size_t k = 0; k < count; ++k) {
    const double t = count == 1 ? interval.lo
                                : interval.lo + interval.length() * static_cast<double>(k) /
                                                    static_cast<double>(count - 1);
    const double d = iterate_derivative(maps, t);
    if (!(d > 0.0)) {
      throw DomainError("composition is not monotone increasing on the interval: derivative " +
                        std::to_string(d) + " at t = " + std::to_string(t));
    }
    range.lo = std::min(range.lo, d);
    range.hi = std::max(range.hi, d);
  }
  return range;
}

}  // namespace

double schwarzian(const FiberMap& g, double t, SchwarzianFormula formula) {
  const double d1 = g.d1(t);
  if (d1 == 0.0) throw DomainError("Schwarzian undefined: g'(" + std::to_string(t) + ") = 0");
  const double d2 = g.d2(t);
  const double d3 = g.d3(t);
  const double q = d2 / d1;
  if (formula == SchwarzianFormula::Literal) {
    if (d2 == 0.0) throw DomainError("literal formula undefined: g''(" + std::to_string(t) + ") = 0");
    return d3 / d2 - 1.5 * q * q;
  }
  return d3 / d1 - 1.5 * q * q;
}

double compose_check(const FiberMap& f, const FiberMap& g, double t, SchwarzianFormula formula) {
  if (!g.domain().contains(t)) throw DomainError("t = " + std::to_string(t) + " is outside the domain of g");
  const double u = g(t);
  if (!f.domain().contains(u)) throw DomainError("g(t) = " + std::to_string(u) + " is outside the domain of f");
  const FiberMap fg = fibers::compose(f, g);
  const double g1 = g.d1(t);
  return std::abs(schwarzian(fg, t, formula) - schwarzian(f, u, formula) * g1 * g1 -
                  schwarzian(g, t, formula));
}

DistortionResult distortion_ratio(const SkewProductSystem& system, double x0, Interval interval,
                                  std::size_t n, std::size_t samples) {
  if (!(interval.lo <= interval.hi) || !std::isfinite(interval.lo) || !std::isfinite(interval.hi)) {
    throw ValidationError("distortion needs a finite interval with lo <= hi");
  }
  if (samples < 2) throw ValidationError("distortion needs at least 2 samples");
  std::vector<FiberMap> maps;
  maps.reserve(n);
  double x = x0;
  for (std::size_t i = 0; i < n; ++i) {
    maps.push_back(system.fiber(x));
    x = system.base().forward(x);
  }

  const DerivativeRange coarse = sample_derivatives(maps, interval, samples);
  const DerivativeRange fine = sample_derivatives(maps, interval, 2 * samples);
  DistortionResult out;
  out.ratio = coarse.hi / coarse.lo;
  out.refined_ratio = fine.hi / fine.lo;
  out.converged = std::abs(out.refined_ratio - out.ratio) < 0.01 * out.ratio;
  out.min_derivative = fine.lo;
  out.max_derivative = fine.hi;
  return out;
}

IntervalTrack interval_track(const TranslationFamily& family, Point z, double s, std::size_t n,
                             std::size_t horizon, double gamma, const ConjugateOptions& options) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("gamma must lie in (0, 1)");
  IntervalTrack track;
  track.z = z;
  track.s = s;
  track.n = n;
  track.gamma = gamma;

  const IterateResult base = iterate(family, 0.0, z, n);
  if (base.escaped) throw DomainError("unperturbed orbit leaves the fiber domain before step n");
  const Point zn = base.orbit.back();
  track.unperturbed_end = zn.t;
  track.conjugate_end = conjugate_point(family, zn, s, options).point.t;

  const ConjugatePoint zs = conjugate_point(family, z, s, options);
  const IterateResult pert = iterate(family, s, zs.point, n);
  if (pert.escaped) throw DomainError("perturbed orbit leaves the fiber domain before step n");
  track.perturbed_end = pert.orbit.back().t;
  track.ordered = track.perturbed_end <= track.conjugate_end + scaled_tolerance(1e-9, track.conjugate_end);

  double a = std::min(track.unperturbed_end, track.conjugate_end);
  double b = std::max(track.unperturbed_end, track.conjugate_end);
  double x = zn.x;
  const double l0 = b - a;
  track.min_ratio = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t m = 0; m <= horizon; ++m) {
    const double len = std::abs(b - a);
    const double ratio = l0 > 0.0 ? len / l0 : std::numeric_limits<double>::quiet_NaN();
    track.lengths.push_back(len);
    track.ratios.push_back(ratio);
    if (l0 > 0.0) {
      track.min_ratio = m == 0 ? ratio : std::min(track.min_ratio, ratio);
      if (!track.first_below_gamma && ratio < gamma) track.first_below_gamma = m;
    }
    if (m == horizon) break;
    const FiberMap g = family.system().fiber(x);
    if (!g.domain().contains(a) || !g.domain().contains(b)) {
      track.escaped = true;
      break;
    }
    a = g(a);
    b = g(b);
    x = family.system().base().forward(x);
    if (!std::isfinite(a) || !std::isfinite(b)) {
      track.escaped = true;
      break;
    }
  }
  return track;
}

}  // namespace holderlab
