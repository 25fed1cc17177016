#include "holderlab/hyperbolicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "holderlab/errors.hpp"

namespace holderlab {
namespace {

constexpr double kClampedQ = 1.0 + 1e-6;

bool n0_conditions_hold(double q, std::size_t n) {
  const double nd = static_cast<double>(n);
  const double growth = -std::log(q) + nd * std::log1p(1.0 / q);
  const double decay = std::log(q + 1.0) + nd * std::log1p(-1.0 / q);
  return growth > std::log(2.0) && decay < std::log(0.5);
}

}  // namespace

std::optional<double> WindowProduct::value() const {
  const double v = std::exp(log_lambda);
  if (!std::isfinite(v) || v == 0.0) return std::nullopt;
  return v;
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Contracting:
      return "Contracting";
    case Verdict::Expanding:
      return "Expanding";
    case Verdict::NonHyperbolic:
      return "NonHyperbolic";
  }
  return "NonHyperbolic";
}

void QBoundParams::validate() const {
  if (!(c > 0.0)) throw ValidationError("Q bound: C must be > 0");
  if (!(d > 0.0)) throw ValidationError("Q bound: d must be > 0");
  if (!(c2 >= 0.0)) throw ValidationError("Q bound: C2 must be >= 0");
  if (!(alpha > 0.5 && alpha <= 1.0)) throw ValidationError("Q bound: alpha must lie in (1/2, 1]");
}

WindowProduct lambda_window(std::span<const double> a, std::size_t m, std::size_t n) {
  if (n == 0 || m > a.size() || n > a.size() - m) {
    throw ValidationError("window [" + std::to_string(m) + ", " + std::to_string(m + n) +
                          ") is outside the sequence of length " + std::to_string(a.size()));
  }
  WindowProduct w{m, n, 0.0};
  for (std::size_t i = m; i < m + n; ++i) {
    if (!(a[i] > 0.0)) {
      throw ValidationError("multiplier a_" + std::to_string(i) + " must be positive");
    }
    w.log_lambda += std::log(a[i]);
  }
  return w;
}

N0Result n0_from_q(double q) {
  if (!std::isfinite(q)) throw ValidationError("Q must be finite");
  N0Result result;
  result.q_used = q;
  if (q <= 1.0) {
    result.q_used = kClampedQ;
    result.clamped = true;
  }
  const double qq = result.q_used;

  // Both conditions are monotone in n; start from the log-space estimate and
  // settle the boundary by direct checks.
  const double n_growth = (std::log(2.0) + std::log(qq)) / std::log1p(1.0 / qq);
  const double n_decay = (std::log(0.5) - std::log(qq + 1.0)) / std::log1p(-1.0 / qq);
  double estimate = std::max({1.0, std::floor(n_growth), std::floor(n_decay)});
  if (estimate > 1e15) throw DomainError("n0 is beyond the representable range for Q = " + std::to_string(q));
  auto n = static_cast<std::size_t>(estimate);
  while (n > 1 && n0_conditions_hold(qq, n - 1)) --n;
  while (!n0_conditions_hold(qq, n)) ++n;
  result.n0 = n;
  return result;
}

std::vector<WindowProduct> scan_windows(std::span<const double> a, std::size_t n0) {
  if (n0 == 0) throw ValidationError("window length n0 must be >= 1");
  if (a.size() < n0) throw ValidationError("sequence shorter than the window length");
  std::vector<WindowProduct> windows;
  windows.reserve(a.size() - n0 + 1);
  WindowProduct current = lambda_window(a, 0, n0);
  windows.push_back(current);
  for (std::size_t m = 1; m + n0 <= a.size(); ++m) {
    // Recomputed from scratch every n0 steps so the running sum does not drift.
    if (m % n0 == 0) {
      current = lambda_window(a, m, n0);
    } else {
      if (!(a[m + n0 - 1] > 0.0)) {
        throw ValidationError("multiplier a_" + std::to_string(m + n0 - 1) + " must be positive");
      }
      current.start = m;
      current.log_lambda += std::log(a[m + n0 - 1]) - std::log(a[m - 1]);
    }
    windows.push_back(current);
  }
  return windows;
}

DichotomyReport classify(std::span<const double> a, std::size_t n0,
                         const DichotomyThresholds& thresholds, std::size_t max_witnesses) {
  if (n0 == 0) throw ValidationError("n0 must be >= 1");
  if (a.size() < 2 * n0) {
    throw ValidationError("sequence of length " + std::to_string(a.size()) +
                          " is shorter than 2 n0 = " + std::to_string(2 * n0));
  }
  if (!(thresholds.expanding > thresholds.contracting) || !(thresholds.contracting > 0.0)) {
    throw ValidationError("dichotomy thresholds must satisfy 0 < contracting < expanding");
  }
  const double log_up = std::log(thresholds.expanding);
  const double log_down = std::log(thresholds.contracting);

  const auto windows = scan_windows(a, n0);
  DichotomyReport report;
  report.n0 = n0;
  report.windows_tested = windows.size();
  report.min_log_lambda = std::numeric_limits<double>::infinity();
  report.max_log_lambda = -std::numeric_limits<double>::infinity();

  const WindowProduct* first_expanding = nullptr;
  const WindowProduct* first_contracting = nullptr;
  const WindowProduct* weakest_expanding = nullptr;
  const WindowProduct* weakest_contracting = nullptr;
  std::vector<WindowProduct> neutral;

  for (const auto& w : windows) {
    report.min_log_lambda = std::min(report.min_log_lambda, w.log_lambda);
    report.max_log_lambda = std::max(report.max_log_lambda, w.log_lambda);
    if (w.log_lambda > log_up) {
      ++report.expanding_windows;
      if (!first_expanding) first_expanding = &w;
      if (!weakest_expanding || w.log_lambda < weakest_expanding->log_lambda) weakest_expanding = &w;
    } else if (w.log_lambda < log_down) {
      ++report.contracting_windows;
      if (!first_contracting) first_contracting = &w;
      if (!weakest_contracting || w.log_lambda > weakest_contracting->log_lambda) {
        weakest_contracting = &w;
      }
    } else {
      ++report.neutral_windows;
      if (neutral.size() < max_witnesses) neutral.push_back(w);
    }
  }

  if (report.expanding_windows == windows.size()) {
    report.verdict = Verdict::Expanding;
    report.witnesses.push_back(*weakest_expanding);
  } else if (report.contracting_windows == windows.size()) {
    report.verdict = Verdict::Contracting;
    report.witnesses.push_back(*weakest_contracting);
  } else {
    report.verdict = Verdict::NonHyperbolic;
    report.witnesses = std::move(neutral);
    if (first_expanding && first_contracting) {
      report.witnesses.push_back(*first_expanding);
      report.witnesses.push_back(*first_contracting);
    }
  }
  return report;
}

double q_bound_diagnostic(const QBoundParams& params, double s) {
  params.validate();
  if (!(s > 0.0)) throw DomainError("Q bound needs s > 0");
  const double denominator = params.d - params.c2 * std::pow(s, 2.0 * params.alpha - 1.0);
  if (!(denominator > 0.0)) {
    throw DomainError("Q bound denominator d - C2 s^(2 alpha - 1) = " + std::to_string(denominator) +
                      " is not positive; s = " + std::to_string(s) + " is too large");
  }
  return params.c * std::pow(s, params.alpha - 1.0) / denominator;
}

}  // namespace holderlab
