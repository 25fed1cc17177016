#pragma once

// Expansion/contraction dichotomy for scalar multiplier sequences.
//
// With a bounded-solution constant Q for the unit perturbation, every window
// of length n0 either expands (product > 2) or the following window contracts
// (product < 1/2); n0 depends on Q only. Over a finite sequence the windows are
// classified and the verdict is reported together with the evidence.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace holderlab {

/// lambda(m, n) = a_m * ... * a_{m+n-1}, held as its logarithm.
struct WindowProduct {
  std::size_t start = 0;
  std::size_t length = 0;
  double log_lambda = 0.0;

  /// exp(log_lambda) when that is a finite, non-zero double.
  std::optional<double> value() const;
};

enum class Verdict { Contracting, Expanding, NonHyperbolic };

std::string_view to_string(Verdict verdict);

struct DichotomyThresholds {
  double expanding = 2.0;
  double contracting = 0.5;
};

struct DichotomyReport {
  std::size_t n0 = 0;
  Verdict verdict = Verdict::NonHyperbolic;
  std::size_t windows_tested = 0;
  std::size_t expanding_windows = 0;
  std::size_t contracting_windows = 0;
  std::size_t neutral_windows = 0;
  double min_log_lambda = 0.0;
  double max_log_lambda = 0.0;
  /// For a hyperbolic verdict: the extreme window closest to the threshold.
  /// Otherwise: the first neutral windows, plus one window of each kind when
  /// both expanding and contracting windows occur.
  std::vector<WindowProduct> witnesses;
};

struct N0Result {
  std::size_t n0 = 0;
  double q_used = 0.0;
  bool clamped = false;
};

struct QBoundParams {
  double c = 1.0;       // Holder constant
  double alpha = 1.0;   // Holder exponent in (1/2, 1]
  double d = 1.0;       // translation lower bound
  double c2 = 0.0;      // quadratic remainder constant

  void validate() const;
};

WindowProduct lambda_window(std::span<const double> a, std::size_t m, std::size_t n);

/// Smallest n with (1/Q)(1 + 1/Q)^n > 2 and (Q + 1)(1 - 1/Q)^n < 1/2.
/// Q <= 1 is replaced by 1 + 1e-6 and reported as clamped.
N0Result n0_from_q(double q);

/// Slides every complete window of length n0 over a; needs a.size() >= 2 n0.
DichotomyReport classify(std::span<const double> a, std::size_t n0,
                         const DichotomyThresholds& thresholds = {},
                         std::size_t max_witnesses = 16);

/// Per-window detail, the same windows classify() scans.
std::vector<WindowProduct> scan_windows(std::span<const double> a, std::size_t n0);

/// C s^(alpha-1) / (d - C2 s^(2 alpha - 1)); DomainError when the denominator
/// is not positive.
double q_bound_diagnostic(const QBoundParams& params, double s);

}  // namespace holderlab
