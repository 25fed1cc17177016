#pragma once

// Skew products H(x, t) = (h(x), g_x(t)) and their translation family
// H_s(x, t) = (h(x), g_x(t) + c1 s).
//
// Base dynamics are either a finite cycle 0 -> 1 -> ... -> N-1 -> 0 (exact
// periodic data) or a closed-form circle map on [0, 1).

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "holderlab/fiber_map.hpp"

namespace holderlab {

struct Point {
  double x = 0.0;
  double t = 0.0;
};

class BaseSystem {
 public:
  enum class Kind { FiniteCycle, Rotation, Doubling };

  static BaseSystem finite_cycle(std::size_t period);
  static BaseSystem rotation(double omega);
  static BaseSystem doubling();

  Kind kind() const noexcept { return kind_; }
  std::size_t period() const noexcept { return period_; }
  double omega() const noexcept { return omega_; }

  double forward(double x) const;
  /// Preimage under h. The doubling map uses the branch x / 2.
  double backward(double x) const;
  /// True when h^n(x) returns to x (circle maps compare mod 1 within tol).
  bool returns_after(double x, std::size_t n, double tol = 1e-12) const;
  std::string describe() const;

 private:
  BaseSystem(Kind kind, std::size_t period, double omega) : kind_(kind), period_(period), omega_(omega) {}

  Kind kind_;
  std::size_t period_;
  double omega_;
};

class SkewProductSystem {
 public:
  /// Finite-cycle base; fibers[i] is the map over base point i.
  SkewProductSystem(BaseSystem base, std::vector<FiberMap> fibers);
  /// Circle-map base with fiber maps depending on the base point.
  SkewProductSystem(BaseSystem base, std::function<FiberMap(double)> fiber_field);

  const BaseSystem& base() const noexcept { return base_; }
  FiberMap fiber(double x) const;
  Point apply(Point z) const;

 private:
  BaseSystem base_;
  std::vector<FiberMap> cycle_fibers_;
  std::function<FiberMap(double)> field_;
};

class TranslationFamily {
 public:
  explicit TranslationFamily(SkewProductSystem system, double epsilon = 0.05, double c1 = 1.0);

  const SkewProductSystem& system() const noexcept { return system_; }
  double epsilon() const noexcept { return epsilon_; }
  /// Translation speed: H_s adds c1 * s to the fiber coordinate.
  double c1() const noexcept { return c1_; }

  Point apply(Point z, double s) const;

 private:
  SkewProductSystem system_;
  double epsilon_;
  double c1_;
};

struct BaseCycle {
  double x0 = 0.0;
  std::size_t period = 1;
};

struct PeriodicOrbit {
  BaseCycle cycle;
  double s = 0.0;                   // parameter the orbit belongs to
  std::vector<double> fiber;        // t_0 .. t_{n-1}
  std::vector<double> derivatives;  // g'_{x_i}(t_i)
  double multiplier = 1.0;
  double residual = 0.0;
  std::size_t newton_steps = 0;
  bool neutral = false;  // multiplier within 1e-8 of 1
};

struct IterateResult {
  std::vector<Point> orbit;
  bool escaped = false;
};

struct ContinuationSample {
  double s = 0.0;
  double p = 0.0;
  double multiplier = 1.0;
  double velocity = 0.0;
};

enum class BranchEnd { Completed, NeutralMultiplier, MultiplierCrossing, NewtonFailure };

std::string_view to_string(BranchEnd end);

struct PeriodicOrbitContinuation {
  BaseCycle cycle;
  std::vector<ContinuationSample> samples;  // increasing s
  BranchEnd forward_end = BranchEnd::Completed;
  BranchEnd backward_end = BranchEnd::Completed;
  std::string forward_reason;
  std::string backward_reason;
};

struct ExpandingSeries {
  std::vector<double> partial_sums;         // sum_{i=1}^{k} prod_{j<i} 1 / g'(t_j)
  std::vector<double> signed_partial_sums;  // negated, consistent with the velocity formula
};

enum class FiberRegime { Contracting, Expanding };

struct ConjugatePoint {
  Point point;
  double nu = 0.0;
  double depth_gap = 0.0;  // |nu(depth) - nu(depth - 1)|
  double residual = 0.0;   // one-step conjugacy residual
  FiberRegime regime = FiberRegime::Contracting;
};

struct ConjugateOptions {
  std::size_t depth = 200;
  double residual_tolerance = 1e-10;
};

/// n steps of H_s from z; stops early with escaped = true when the fiber
/// coordinate leaves the fiber domain.
IterateResult iterate(const TranslationFamily& family, double s, Point z, std::size_t n);

/// Newton on t -> g^n(t) - t (tolerance 1e-12, at most 100 steps).
PeriodicOrbit find_periodic(const SkewProductSystem& system, BaseCycle cycle, double t_guess);
PeriodicOrbit find_periodic(const TranslationFamily& family, double s, BaseCycle cycle, double t_guess);

/// Predictor-corrector continuation over s_grid (any order); samples are
/// returned sorted by s. Each direction stops when the multiplier enters
/// [1 - 1e-6, 1 + 1e-6], crosses 1, or Newton fails.
PeriodicOrbitContinuation continue_periodic(const TranslationFamily& family, const PeriodicOrbit& p,
                                            std::span<const double> s_grid);

/// p'(s) = c1 sum_i prod_{j>i} g'(t_j) / (1 - prod_j g'(t_j)) for the orbit p
/// of H_s.
double velocity_velpp(const TranslationFamily& family, const PeriodicOrbit& p, double s);

/// Partial sums of sum_{i>=0} prod_{j=1}^{i} g'(H^{-j}(p)).
std::vector<double> velocity_series_contracting(const SkewProductSystem& system,
                                                const PeriodicOrbit& p, std::size_t terms);

/// Partial sums of sum_{i>=1} prod_{j=0}^{i-1} g'(H^j(p))^{-1}, raw and negated.
ExpandingSeries velocity_series_expanding(const SkewProductSystem& system, const PeriodicOrbit& p,
                                          std::size_t terms);

/// Fiber point of the conjugacy at z, obtained as a pullback limit of H_s
/// along the backward (contracting fibers) or forward (expanding fibers,
/// through inverses) base orbit. Throws DomainError when the fiber
/// derivatives straddle 1 or the conjugacy residual exceeds tolerance.
ConjugatePoint conjugate_point(const TranslationFamily& family, Point z, double s,
                               const ConjugateOptions& options = {});

/// nu(z, s) = pi(z(s)) - pi(z).
double nu(const TranslationFamily& family, Point z, double s, const ConjugateOptions& options = {});

/// Point of the invariant graph over x for H_s: contracting pullback from `seed`.
Point invariant_point(const TranslationFamily& family, double x, double s, std::size_t depth = 200,
                      double seed = 0.0);

/// log(multiplier) / period of sample k.
double lyapunov_periodic(const PeriodicOrbitContinuation& continuation, std::size_t k);

}  // namespace holderlab
