#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "holderlab/fiber_map.hpp"
#include "holderlab/skew_product.hpp"

namespace holderlab {

enum class SchwarzianFormula {
  Standard,  // g'''/g' - 1.5 (g''/g')^2
  Literal,   // g'''/g'' - 1.5 (g''/g')^2, kept only for comparison
};

/// Throws DomainError when g'(t) = 0 (or g''(t) = 0 for the literal form).
double schwarzian(const FiberMap& g, double t, SchwarzianFormula formula = SchwarzianFormula::Standard);

/// |S(f o g)(t) - S(f)(g(t)) g'(t)^2 - S(g)(t)|, with f o g differentiated by
/// the chain rule.
double compose_check(const FiberMap& f, const FiberMap& g, double t,
                     SchwarzianFormula formula = SchwarzianFormula::Standard);

struct DistortionResult {
  double ratio = 1.0;          // at `samples` points
  double refined_ratio = 1.0;  // at 2 * samples points
  bool converged = true;       // relative change below 1%
  double min_derivative = 1.0;
  double max_derivative = 1.0;
};

/// max |(g^n)'(t)| / |(g^n)'(r)| over t, r sampled uniformly in I, where g^n
/// composes the fibers over x0, h(x0), ... Throws DomainError if an iterate
/// leaves a fiber domain or (g^n)' is not positive somewhere on I.
DistortionResult distortion_ratio(const SkewProductSystem& system, double x0, Interval interval,
                                  std::size_t n, std::size_t samples = 64);

struct IntervalTrack {
  Point z;
  double s = 0.0;
  std::size_t n = 0;
  double unperturbed_end = 0.0;  // g^n(t)
  double conjugate_end = 0.0;    // g^n(t)_s
  double perturbed_end = 0.0;    // g^n_s(t_s)
  bool ordered = true;           // perturbed_end <= conjugate_end up to rounding
  std::vector<double> lengths;   // l(g^m(I^n_s)), m = 0..horizon
  std::vector<double> ratios;    // lengths[m] / lengths[0]; NaN for a degenerate interval
  double gamma = 0.5;
  std::optional<std::size_t> first_below_gamma;
  double min_ratio = 1.0;
  bool escaped = false;  // an endpoint left the fiber domain before the horizon
};

IntervalTrack interval_track(const TranslationFamily& family, Point z, double s, std::size_t n,
                             std::size_t horizon, double gamma = 0.5,
                             const ConjugateOptions& options = {});

}  // namespace holderlab
