#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "holderlab/skew_product.hpp"

namespace holderlab {

enum class CurveSource { Continuation, RootTracking, ConjugatePoint };
enum class Branch { Positive, Negative };

std::string_view to_string(CurveSource source);
std::string_view to_string(Branch branch);
CurveSource parse_curve_source(std::string_view text);
Branch parse_branch(std::string_view text);

struct CurveSample {
  double s = 0.0;
  double d = 0.0;  // displacement, fiber units
  CurveSource source = CurveSource::RootTracking;
  std::optional<Branch> branch;  // root tracking only
};

struct ContinuationCurve {
  std::vector<CurveSample> samples;  // strictly increasing s
  std::vector<double> skipped;       // grid values with no usable sample
  std::vector<std::string> notes;
};

/// What the displacement is measured from.
struct CurveTarget {
  BaseCycle cycle;       // root tracking and continuation
  double t0 = 0.0;       // unperturbed fiber point (periodic point or root)
  Point z;               // conjugate-point source
  Branch branch = Branch::Positive;
  double radius = 0.25;  // root-tracking bracket [t0, t0 + R] or [t0 - R, t0]
};

/// Smallest admissible s on a grid (1e3 machine epsilon).
inline constexpr double kMinGridS = 1e3 * 2.220446049250313e-16;

/// d(s) = |root(s) - t0|, |p(s) - p(0)| or |nu(z, s)| for every s > 0 in
/// the grid. Root tracking bisects g^n(t) + c1 s - t on the branch bracket;
/// grid values without a sign change are skipped and listed.
ContinuationCurve displacement_curve(CurveSource source, const TranslationFamily& family,
                                     const CurveTarget& target, std::span<const double> s_grid);

struct HolderFit {
  double alpha = 0.0;
  double C = 0.0;
  double r2 = 0.0;
  std::size_t n_samples = 0;
  std::size_t dropped = 0;        // samples with d = 0
  std::vector<double> residuals;  // log d - (log C + alpha log s)
};

/// Ordinary least squares of log d on log s.
HolderFit fit_holder(const ContinuationCurve& curve);

struct CatalogEntry {
  std::string name;
  std::string description;
  TranslationFamily family;
  CurveTarget target;
  std::optional<double> expected_alpha;  // nullopt: no continuation to fit
};

/// quadratic, cubic, affine-contracting, affine-expanding, neutral and
/// tanh-contracting, all over a one-point base.
std::vector<CatalogEntry> example_library();
CatalogEntry catalog_entry(std::string_view name);

/// s = 2^-k for every k with s in [s_min, s_max], increasing.
std::vector<double> dyadic_grid(double s_min, double s_max);

}  // namespace holderlab
