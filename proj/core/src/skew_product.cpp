#include "holderlab/skew_product.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "holderlab/errors.hpp"

namespace holderlab {
namespace {

constexpr double kNewtonTol = 1e-12;
constexpr std::size_t kNewtonMaxSteps = 100;
constexpr double kNeutralFlag = 1e-8;
constexpr double kBranchNeutral = 1e-6;

double wrap_unit(double x) {
  double r = x - std::floor(x);
  if (r >= 1.0) r -= 1.0;
  return r;
}

double circle_distance(double a, double b) {
  const double d = std::abs(wrap_unit(a) - wrap_unit(b));
  return std::min(d, 1.0 - d);
}

std::size_t cycle_index(double x, std::size_t period) {
  const double r = std::round(x);
  if (std::abs(x - r) > 1e-9 || r < 0.0 || r >= static_cast<double>(period)) {
    throw ValidationError("finite-cycle base point " + std::to_string(x) + " is not in {0, ..., " +
                          std::to_string(period - 1) + "}");
  }
  return static_cast<std::size_t>(r);
}

std::vector<double> base_orbit(const BaseSystem& base, double x0, std::size_t n) {
  std::vector<double> xs(n);
  double x = x0;
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x;
    x = base.forward(x);
  }
  return xs;
}

struct Composition {
  double value = 0.0;
  double derivative = 1.0;
  bool escaped = false;
};

// g_{x_{n-1}} o ... o g_{x_0} shifted by `shift` at every step.
Composition compose_along(const std::vector<FiberMap>& maps, double shift, double t,
                          std::vector<double>* points = nullptr, std::vector<double>* derivs = nullptr) {
  Composition out;
  if (points) points->clear();
  if (derivs) derivs->clear();
  for (const auto& g : maps) {
    if (!std::isfinite(t) || !g.domain().contains(t)) {
      out.escaped = true;
      return out;
    }
    const double d = g.d1(t);
    if (points) points->push_back(t);
    if (derivs) derivs->push_back(d);
    out.derivative *= d;
    t = g(t) + shift;
  }
  out.value = t;
  out.escaped = !std::isfinite(t);
  return out;
}

PeriodicOrbit newton_periodic(const TranslationFamily& family, double s, BaseCycle cycle, double guess) {
  const auto& base = family.system().base();
  if (cycle.period == 0) throw ValidationError("periodic orbit needs period >= 1");
  if (!base.returns_after(cycle.x0, cycle.period)) {
    throw ValidationError("base point " + std::to_string(cycle.x0) + " does not return after " +
                          std::to_string(cycle.period) + " steps");
  }
  const auto xs = base_orbit(base, cycle.x0, cycle.period);
  std::vector<FiberMap> maps;
  maps.reserve(xs.size());
  for (double x : xs) maps.push_back(family.system().fiber(x));
  const double shift = family.c1() * s;

  double t = guess;
  Composition c = compose_along(maps, shift, t);
  if (c.escaped) throw ConvergenceError("initial guess leaves the fiber domain");
  double r = c.value - t;
  std::size_t steps = 0;
  while (std::abs(r) >= scaled_tolerance(kNewtonTol, t)) {
    if (steps == kNewtonMaxSteps) {
      throw ConvergenceError("periodic-orbit Newton did not converge in " +
                             std::to_string(kNewtonMaxSteps) + " steps (residual " +
                             std::to_string(r) + ")");
    }
    ++steps;
    const double slope = c.derivative - 1.0;
    if (slope == 0.0) throw ConvergenceError("periodic-orbit Newton hit a zero slope");
    double step = -r / slope;
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving, step *= 0.5) {
      const Composition trial = compose_along(maps, shift, t + step);
      if (trial.escaped) continue;
      const double r_trial = trial.value - (t + step);
      if (std::abs(r_trial) < std::abs(r)) {
        t += step;
        c = trial;
        r = r_trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw ConvergenceError("periodic-orbit Newton stalled at residual " + std::to_string(r));
    }
  }
  // A small residual does not pin t near a multiple root (g^n(t) - t ~ t^3
  // leaves t ~ 1e-4); keep going while full Newton steps are still large.
  while (steps < kNewtonMaxSteps) {
    const double slope = c.derivative - 1.0;
    if (slope == 0.0) break;
    const double step = -r / slope;
    if (std::abs(step) <= scaled_tolerance(kNewtonTol, t)) break;
    const Composition trial = compose_along(maps, shift, t + step);
    if (trial.escaped) break;
    const double r_trial = trial.value - (t + step);
    if (!(std::abs(r_trial) <= std::abs(r))) break;
    ++steps;
    t += step;
    c = trial;
    r = r_trial;
  }

  PeriodicOrbit orbit;
  orbit.cycle = cycle;
  orbit.s = s;
  const Composition fin = compose_along(maps, shift, t, &orbit.fiber, &orbit.derivatives);
  orbit.multiplier = fin.derivative;
  orbit.residual = std::abs(fin.value - t);
  orbit.newton_steps = steps;
  for (double d : orbit.derivatives) {
    if (!(d > 0.0)) throw DomainError("fiber derivative is not positive along the periodic orbit");
  }
  orbit.neutral = std::abs(orbit.multiplier - 1.0) <= kNeutralFlag;
  return orbit;
}

void require_orbit_of(const TranslationFamily& family, const PeriodicOrbit& p, double s) {
  if (p.fiber.empty() || p.fiber.size() != p.cycle.period || p.derivatives.size() != p.cycle.period) {
    throw ValidationError("periodic orbit data is incomplete");
  }
  const auto xs = base_orbit(family.system().base(), p.cycle.x0, p.cycle.period);
  std::vector<FiberMap> maps;
  for (double x : xs) maps.push_back(family.system().fiber(x));
  const Composition c = compose_along(maps, family.c1() * s, p.fiber.front());
  if (c.escaped || std::abs(c.value - p.fiber.front()) > scaled_tolerance(1e-9, p.fiber.front())) {
    throw ValidationError("orbit is not periodic for H_s at s = " + std::to_string(s));
  }
}

struct Pullback {
  double t = 0.0;
  double min_derivative = std::numeric_limits<double>::infinity();
  double max_derivative = 0.0;
  double previous = 0.0;  // same pullback one step shallower
  bool ok = true;
};

// Contracting: t <- g_{x_{-k}}(t) + c1 s for k = depth..1, seeded at x_{-depth}.
Pullback pullback_forward(const TranslationFamily& family, double x, double s, std::size_t depth,
                          double seed) {
  const auto& base = family.system().base();
  std::vector<double> xs(depth + 1);
  xs[0] = x;
  for (std::size_t k = 1; k <= depth; ++k) xs[k] = base.backward(xs[k - 1]);
  const double shift = family.c1() * s;

  auto run = [&](std::size_t d, Pullback& pb, bool record) {
    double t = seed;
    for (std::size_t k = d; k >= 1; --k) {
      const FiberMap g = family.system().fiber(xs[k]);
      if (!std::isfinite(t) || !g.domain().contains(t)) {
        pb.ok = false;
        return t;
      }
      if (record) {
        const double der = g.d1(t);
        pb.min_derivative = std::min(pb.min_derivative, der);
        pb.max_derivative = std::max(pb.max_derivative, der);
      }
      t = g(t) + shift;
    }
    if (!std::isfinite(t)) pb.ok = false;
    return t;
  };
  Pullback pb;
  pb.t = run(depth, pb, true);
  pb.previous = depth > 1 ? run(depth - 1, pb, false) : seed;
  return pb;
}

// Expanding: t <- g_{x_k}^{-1}(t - c1 s) for k = depth-1..0, seeded at x_depth.
Pullback pullback_inverse(const TranslationFamily& family, double x, double s, std::size_t depth,
                          double seed) {
  const auto& base = family.system().base();
  const auto xs = base_orbit(base, x, depth + 1);
  const double shift = family.c1() * s;

  auto run = [&](std::size_t d, Pullback& pb, bool record) {
    double t = seed;
    for (std::size_t k = d; k-- > 0;) {
      const FiberMap g = family.system().fiber(xs[k]);
      try {
        t = g.inverse(t - shift, t);
      } catch (const DomainError&) {
        pb.ok = false;
        return t;
      }
      if (!std::isfinite(t) || !g.domain().contains(t)) {
        pb.ok = false;
        return t;
      }
      if (record) {
        const double der = g.d1(t);
        pb.min_derivative = std::min(pb.min_derivative, der);
        pb.max_derivative = std::max(pb.max_derivative, der);
      }
    }
    return t;
  };
  Pullback pb;
  pb.t = run(depth, pb, true);
  pb.previous = depth > 1 ? run(depth - 1, pb, false) : seed;
  return pb;
}

bool contracting(const Pullback& pb) { return pb.ok && pb.max_derivative < 1.0 && pb.min_derivative > 0.0; }
bool expanding(const Pullback& pb) { return pb.ok && pb.min_derivative > 1.0; }

}  // namespace

BaseSystem BaseSystem::finite_cycle(std::size_t period) {
  if (period == 0) throw ValidationError("finite cycle needs period >= 1");
  return BaseSystem(Kind::FiniteCycle, period, 0.0);
}

BaseSystem BaseSystem::rotation(double omega) {
  if (!std::isfinite(omega)) throw ValidationError("rotation number must be finite");
  return BaseSystem(Kind::Rotation, 0, wrap_unit(omega));
}

BaseSystem BaseSystem::doubling() { return BaseSystem(Kind::Doubling, 0, 0.0); }

double BaseSystem::forward(double x) const {
  switch (kind_) {
    case Kind::FiniteCycle:
      return static_cast<double>((cycle_index(x, period_) + 1) % period_);
    case Kind::Rotation:
      return wrap_unit(x + omega_);
    case Kind::Doubling:
      return wrap_unit(2.0 * x);
  }
  return x;
}

double BaseSystem::backward(double x) const {
  switch (kind_) {
    case Kind::FiniteCycle:
      return static_cast<double>((cycle_index(x, period_) + period_ - 1) % period_);
    case Kind::Rotation:
      return wrap_unit(x - omega_);
    case Kind::Doubling:
      return 0.5 * wrap_unit(x);
  }
  return x;
}

bool BaseSystem::returns_after(double x, std::size_t n, double tol) const {
  if (kind_ == Kind::FiniteCycle) {
    cycle_index(x, period_);
    return n % period_ == 0;
  }
  double y = x;
  for (std::size_t i = 0; i < n; ++i) y = forward(y);
  return circle_distance(x, y) <= tol;
}

std::string BaseSystem::describe() const {
  switch (kind_) {
    case Kind::FiniteCycle:
      return "finite-cycle(" + std::to_string(period_) + ")";
    case Kind::Rotation:
      return "rotation(" + std::to_string(omega_) + ")";
    case Kind::Doubling:
      return "doubling";
  }
  return "unknown";
}

SkewProductSystem::SkewProductSystem(BaseSystem base, std::vector<FiberMap> fibers)
    : base_(base), cycle_fibers_(std::move(fibers)) {
  if (base_.kind() != BaseSystem::Kind::FiniteCycle) {
    throw ValidationError("a per-point fiber list needs a finite-cycle base");
  }
  if (cycle_fibers_.size() != base_.period()) {
    throw ValidationError("finite cycle of period " + std::to_string(base_.period()) + " needs " +
                          std::to_string(base_.period()) + " fiber maps, got " +
                          std::to_string(cycle_fibers_.size()));
  }
}

SkewProductSystem::SkewProductSystem(BaseSystem base, std::function<FiberMap(double)> fiber_field)
    : base_(base), field_(std::move(fiber_field)) {
  if (!field_) throw ValidationError("fiber field is empty");
}

FiberMap SkewProductSystem::fiber(double x) const {
  if (!cycle_fibers_.empty()) return cycle_fibers_[cycle_index(x, base_.period())];
  return field_(x);
}

Point SkewProductSystem::apply(Point z) const { return {base_.forward(z.x), fiber(z.x)(z.t)}; }

TranslationFamily::TranslationFamily(SkewProductSystem system, double epsilon, double c1)
    : system_(std::move(system)), epsilon_(epsilon), c1_(c1) {
  if (!(epsilon_ > 0.0)) throw ValidationError("parameter range epsilon must be > 0");
  if (!(c1_ > 0.0)) throw ValidationError("translation speed c1 must be > 0");
}

Point TranslationFamily::apply(Point z, double s) const {
  return {system_.base().forward(z.x), system_.fiber(z.x)(z.t) + c1_ * s};
}

std::string_view to_string(BranchEnd end) {
  switch (end) {
    case BranchEnd::Completed:
      return "completed";
    case BranchEnd::NeutralMultiplier:
      return "neutral-multiplier";
    case BranchEnd::MultiplierCrossing:
      return "multiplier-crossing";
    case BranchEnd::NewtonFailure:
      return "newton-failure";
  }
  return "completed";
}

IterateResult iterate(const TranslationFamily& family, double s, Point z, std::size_t n) {
  IterateResult out;
  out.orbit.reserve(n + 1);
  out.orbit.push_back(z);
  for (std::size_t i = 0; i < n; ++i) {
    const FiberMap g = family.system().fiber(z.x);
    if (!g.domain().contains(z.t)) {
      out.escaped = true;
      break;
    }
    const Point next{family.system().base().forward(z.x), g(z.t) + family.c1() * s};
    if (!std::isfinite(next.t)) {
      out.escaped = true;
      break;
    }
    z = next;
    out.orbit.push_back(z);
  }
  return out;
}

PeriodicOrbit find_periodic(const SkewProductSystem& system, BaseCycle cycle, double t_guess) {
  return newton_periodic(TranslationFamily(system), 0.0, cycle, t_guess);
}

PeriodicOrbit find_periodic(const TranslationFamily& family, double s, BaseCycle cycle, double t_guess) {
  return newton_periodic(family, s, cycle, t_guess);
}

double velocity_velpp(const TranslationFamily& family, const PeriodicOrbit& p, double s) {
  require_orbit_of(family, p, s);
  const auto& d = p.derivatives;
  const std::size_t n = d.size();
  double numerator = 0.0;
  double tail = 1.0;  // prod_{j > i} g'(t_j)
  for (std::size_t i = n; i-- > 0;) {
    numerator += tail;
    tail *= d[i];
  }
  const double multiplier = tail;
  if (std::abs(multiplier - 1.0) <= kNeutralFlag) {
    throw DomainError("velocity formula undefined: multiplier " + std::to_string(multiplier) +
                      " is neutral");
  }
  return family.c1() * numerator / (1.0 - multiplier);
}

PeriodicOrbitContinuation continue_periodic(const TranslationFamily& family, const PeriodicOrbit& p,
                                            std::span<const double> s_grid) {
  if (p.neutral) {
    throw ValidationError("continuation needs a hyperbolic start; multiplier " +
                          std::to_string(p.multiplier) + " is neutral");
  }
  require_orbit_of(family, p, p.s);

  std::vector<double> grid(s_grid.begin(), s_grid.end());
  for (double s : grid) {
    if (!std::isfinite(s)) throw ValidationError("continuation grid contains a non-finite value");
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<double> up;
  std::vector<double> down;
  for (double s : grid) (s >= p.s ? up : down).push_back(s);
  std::reverse(down.begin(), down.end());

  const bool repelling = p.multiplier > 1.0;
  const double v0 = velocity_velpp(family, p, p.s);

  PeriodicOrbitContinuation out;
  out.cycle = p.cycle;

  auto run = [&](const std::vector<double>& branch, BranchEnd& end, std::string& reason) {
    double prev_s = p.s;
    double prev_t = p.fiber.front();
    double prev_v = v0;
    for (double s : branch) {
      if (s == p.s) {
        out.samples.push_back({p.s, p.fiber.front(), p.multiplier, v0});
        continue;
      }
      PeriodicOrbit orbit;
      try {
        orbit = newton_periodic(family, s, p.cycle, prev_t + prev_v * (s - prev_s));
      } catch (const Error& e) {
        end = BranchEnd::NewtonFailure;
        reason = "s = " + std::to_string(s) + ": " + e.what();
        return;
      }
      if (std::abs(orbit.multiplier - 1.0) <= kBranchNeutral) {
        end = BranchEnd::NeutralMultiplier;
        reason = "multiplier " + std::to_string(orbit.multiplier) + " at s = " + std::to_string(s);
        return;
      }
      if ((orbit.multiplier > 1.0) != repelling) {
        end = BranchEnd::MultiplierCrossing;
        reason = "multiplier crossed 1 before s = " + std::to_string(s);
        return;
      }
      const double v = velocity_velpp(family, orbit, s);
      out.samples.push_back({s, orbit.fiber.front(), orbit.multiplier, v});
      prev_s = s;
      prev_t = orbit.fiber.front();
      prev_v = v;
    }
  };
  run(up, out.forward_end, out.forward_reason);
  run(down, out.backward_end, out.backward_reason);
  std::sort(out.samples.begin(), out.samples.end(),
            [](const ContinuationSample& a, const ContinuationSample& b) { return a.s < b.s; });
  return out;
}

std::vector<double> velocity_series_contracting(const SkewProductSystem& system, const PeriodicOrbit& p,
                                                std::size_t terms) {
  require_orbit_of(TranslationFamily(system), p, 0.0);
  const auto& d = p.derivatives;
  const std::size_t n = d.size();
  std::vector<double> sums;
  sums.reserve(terms);
  double term = 1.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < terms; ++i) {
    if (i > 0) term *= d[(n - (i % n)) % n];  // derivative at H^{-i}(p)
    acc += term;
    sums.push_back(acc);
  }
  return sums;
}

ExpandingSeries velocity_series_expanding(const SkewProductSystem& system, const PeriodicOrbit& p,
                                          std::size_t terms) {
  require_orbit_of(TranslationFamily(system), p, 0.0);
  if (!(p.multiplier > 1.0)) {
    throw DomainError("expanding velocity series needs multiplier > 1, got " +
                      std::to_string(p.multiplier));
  }
  const auto& d = p.derivatives;
  ExpandingSeries out;
  out.partial_sums.reserve(terms);
  out.signed_partial_sums.reserve(terms);
  double term = 1.0;
  double acc = 0.0;
  for (std::size_t i = 1; i <= terms; ++i) {
    term /= d[(i - 1) % d.size()];
    acc += term;
    out.partial_sums.push_back(acc);
    out.signed_partial_sums.push_back(-acc);
  }
  return out;
}

ConjugatePoint conjugate_point(const TranslationFamily& family, Point z, double s,
                               const ConjugateOptions& options) {
  if (options.depth < 2) throw ValidationError("conjugate point needs depth >= 2");
  if (!std::isfinite(s)) throw ValidationError("parameter s must be finite");

  ConjugatePoint out;
  Pullback at_s = pullback_forward(family, z.x, s, options.depth, z.t);
  Pullback at_0 = pullback_forward(family, z.x, 0.0, options.depth, z.t);
  out.regime = FiberRegime::Contracting;
  if (!(contracting(at_s) && contracting(at_0))) {
    at_s = pullback_inverse(family, z.x, s, options.depth, z.t);
    at_0 = pullback_inverse(family, z.x, 0.0, options.depth, z.t);
    out.regime = FiberRegime::Expanding;
    if (!(expanding(at_s) && expanding(at_0))) {
      throw DomainError(
          "no canonical conjugacy: fiber derivatives along the orbit are neither uniformly below "
          "nor uniformly above 1");
    }
  }

  out.nu = at_s.t - at_0.t;
  const double nu_previous = at_s.previous - at_0.previous;
  out.depth_gap = std::abs(out.nu - nu_previous);
  if (out.depth_gap > scaled_tolerance(1e-8, out.nu)) {
    throw ConvergenceError("pullback not converged at depth " + std::to_string(options.depth) +
                           " (gap " + std::to_string(out.depth_gap) + ")");
  }
  out.point = {z.x, z.t + out.nu};

  // One step forward: H_s(z(s)) against the conjugate point of H(z).
  const FiberMap g = family.system().fiber(z.x);
  const double shift = family.c1() * s;
  const double lhs = g(out.point.t) + shift;
  const double rhs = g(z.t) + (g(at_s.t) + shift - g(at_0.t));
  out.residual = std::abs(lhs - rhs);
  if (out.residual > scaled_tolerance(options.residual_tolerance, lhs)) {
    throw DomainError("conjugacy residual " + std::to_string(out.residual) +
                      " too large; the point is not on the invariant set");
  }
  return out;
}

double nu(const TranslationFamily& family, Point z, double s, const ConjugateOptions& options) {
  return conjugate_point(family, z, s, options).nu;
}

Point invariant_point(const TranslationFamily& family, double x, double s, std::size_t depth, double seed) {
  const Pullback fwd = pullback_forward(family, x, s, depth, seed);
  if (contracting(fwd)) return {x, fwd.t};
  const Pullback inv = pullback_inverse(family, x, s, depth, seed);
  if (expanding(inv)) return {x, inv.t};
  throw DomainError("fiber dynamics over x = " + std::to_string(x) +
                    " are neither uniformly contracting nor uniformly expanding");
}

double lyapunov_periodic(const PeriodicOrbitContinuation& continuation, std::size_t k) {
  if (k >= continuation.samples.size()) {
    throw ValidationError("continuation sample " + std::to_string(k) + " does not exist");
  }
  return std::log(continuation.samples[k].multiplier) / static_cast<double>(continuation.cycle.period);
}

}  // namespace holderlab
