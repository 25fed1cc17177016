#include "holderlab/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <random>
#include <string>

#include "holderlab/errors.hpp"

namespace holderlab {
namespace {

void require_matching(const ScalarCocycle& cocycle, const Perturbation& w) {
  if (cocycle.size() != w.size()) {
    throw ValidationError("perturbation length " + std::to_string(w.size()) +
                          " does not match cocycle length " + std::to_string(cocycle.size()));
  }
}

std::vector<double> prefix_log_products(std::span<const double> a) {
  std::vector<double> log_b(a.size() + 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    log_b[i + 1] = log_b[i] + std::log(a[i]);
  }
  return log_b;
}

struct PairwiseBest {
  double value = 0.0;
  std::size_t k = 0;
  std::size_t l = 0;
  double relative_c = 0.0;
  double relative_b = 1.0;
};

// For each start k the relative coefficients C_{k,l} are produced by the
// recurrence c <- a c + w started from zero at k. This avoids the cancellation
// in C_{k+l} - B_{k,l} C_k and keeps the whole scan O(n^2).
PairwiseBest pairwise_scan(std::span<const double> a, std::span<const double> w,
                           std::span<const double> log_b) {
  const std::size_t n = a.size();
  PairwiseBest best;
  for (std::size_t k = 0; k < n; ++k) {
    double c = 0.0;
    for (std::size_t i = k + 1; i <= n; ++i) {
      c = a[i - 1] * c + w[i - 1];
      if (!std::isfinite(c)) {
        throw NumericalRangeError("relative C track overflowed", i);
      }
      const double b = std::exp(log_b[i] - log_b[k]);
      const double value = std::abs(c) / (1.0 + b);
      if (value > best.value) {
        best = {value, k, i - k, c, b};
      }
    }
  }
  return best;
}

// G_n as a function of u = v_j: walk the orbit forward and backward from j.
double anchored_sup(std::span<const double> a, std::span<const double> w, std::size_t j, double u) {
  double sup = std::abs(u);
  double x = u;
  for (std::size_t i = j; i < a.size(); ++i) {
    x = a[i] * x + w[i];
    sup = std::max(sup, std::abs(x));
  }
  x = u;
  for (std::size_t i = j; i-- > 0;) {
    x = (x - w[i]) / a[i];
    sup = std::max(sup, std::abs(x));
  }
  return sup;
}

}  // namespace

ScalarCocycle::ScalarCocycle(std::vector<double> multipliers, double bound)
    : a_(std::move(multipliers)), bound_(bound) {
  if (a_.empty()) {
    throw ValidationError("cocycle must have at least one multiplier");
  }
  if (!(bound_ > 1.0) || !std::isfinite(bound_)) {
    throw ValidationError("cocycle bound R must be finite and > 1");
  }
  for (std::size_t i = 0; i < a_.size(); ++i) {
    const double ai = a_[i];
    if (!(ai > 0.0) || !std::isfinite(ai)) {
      throw ValidationError("multiplier a_" + std::to_string(i) + " must be positive and finite");
    }
    if (!(ai < bound_) || !(ai > 1.0 / bound_)) {
      throw ValidationError("multiplier a_" + std::to_string(i) + " violates 1/R < a_i < R");
    }
  }
}

ScalarCocycle ScalarCocycle::with_default_bound(std::vector<double> multipliers) {
  double r = 1.0;
  for (double ai : multipliers) {
    if (ai > 0.0) {
      r = std::max({r, ai, 1.0 / ai});
    }
  }
  return ScalarCocycle(std::move(multipliers), 1.0 + r);
}

ScalarCocycle ScalarCocycle::constant(double value, std::size_t n) {
  return with_default_bound(std::vector<double>(n, value));
}

Perturbation::Perturbation(std::vector<double> entries) : w_(std::move(entries)) {
  for (std::size_t i = 0; i < w_.size(); ++i) {
    if (!std::isfinite(w_[i])) {
      throw ValidationError("perturbation entry w_" + std::to_string(i + 1) + " is not finite");
    }
  }
}

double Perturbation::sup_norm() const noexcept {
  double m = 0.0;
  for (double x : w_) m = std::max(m, std::abs(x));
  return m;
}

Perturbation Perturbation::scaled(double d) const {
  std::vector<double> out(w_);
  for (double& x : out) x *= d;
  return Perturbation(std::move(out));
}

double OrbitSegment::sup_norm() const noexcept {
  double m = 0.0;
  for (double x : values) m = std::max(m, std::abs(x));
  return m;
}

AffineTrack::AffineTrack(std::vector<double> log_b, std::vector<double> c)
    : log_b_(std::move(log_b)), c_(std::move(c)) {
  if (log_b_.size() != c_.size() || c_.empty()) {
    throw ValidationError("affine track needs equally sized, non-empty B and C tracks");
  }
}

double AffineTrack::b(std::size_t i) const { return std::exp(log_b_.at(i)); }

double AffineTrack::relative_b(std::size_t k, std::size_t l) const {
  return std::exp(log_b_.at(k + l) - log_b_.at(k));
}

double AffineTrack::relative_c(std::size_t k, std::size_t l) const {
  return c_.at(k + l) - relative_b(k, l) * c_.at(k);
}

double AffineTrack::evaluate(std::size_t i, double v) const { return b(i) * v + c_.at(i); }

OrbitSegment evolve(const ScalarCocycle& cocycle, const Perturbation& w, double v0) {
  require_matching(cocycle, w);
  const auto a = cocycle.multipliers();
  const auto ws = w.entries();
  OrbitSegment orbit;
  orbit.values.reserve(a.size() + 1);
  orbit.values.push_back(v0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    orbit.values.push_back(a[i] * orbit.values.back() + ws[i]);
  }
  return orbit;
}

AffineTrack affine_tracks(const ScalarCocycle& cocycle, const Perturbation& w) {
  require_matching(cocycle, w);
  const auto a = cocycle.multipliers();
  const auto ws = w.entries();
  std::vector<double> log_b = prefix_log_products(a);
  std::vector<double> c(a.size() + 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(log_b[i + 1])) {
      throw NumericalRangeError("log B track left the representable range", i + 1);
    }
    c[i + 1] = a[i] * c[i] + ws[i];
    if (!std::isfinite(c[i + 1])) {
      throw NumericalRangeError("C track overflowed", i + 1);
    }
  }
  return AffineTrack(std::move(log_b), std::move(c));
}

double pairwise_min(const AffineTrack& track, std::size_t i1, std::size_t i2) {
  if (i1 > i2 || i2 >= track.size()) {
    throw ValidationError("pairwise_min needs i1 <= i2 < track size");
  }
  if (i1 == i2) return 0.0;
  const std::size_t l = i2 - i1;
  const double b = track.relative_b(i1, l);
  return std::abs(track.relative_c(i1, l)) / (1.0 + b);
}

double min_sup_value(const ScalarCocycle& cocycle, const Perturbation& w) {
  require_matching(cocycle, w);
  const auto log_b = prefix_log_products(cocycle.multipliers());
  return pairwise_scan(cocycle.multipliers(), w.entries(), log_b).value;
}

double line_search_min_sup(const ScalarCocycle& cocycle, const Perturbation& w) {
  require_matching(cocycle, w);
  const auto a = cocycle.multipliers();
  const auto ws = w.entries();
  const auto log_b = prefix_log_products(a);
  const std::size_t j = static_cast<std::size_t>(
      std::distance(log_b.begin(), std::max_element(log_b.begin(), log_b.end())));

  auto f = [&](double u) { return anchored_sup(a, ws, j, u); };
  const double radius = f(0.0);
  if (radius == 0.0) return 0.0;

  // The minimiser satisfies |u*| <= P <= G(0).
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = -radius;
  double hi = radius;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  double best = std::min({radius, f1, f2});
  for (int iter = 0; iter < 400; ++iter) {
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * radius) break;
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
      best = std::min(best, f1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
      best = std::min(best, f2);
    }
  }
  return best;
}

MinimaxResult min_sup(const ScalarCocycle& cocycle, const Perturbation& w) {
  require_matching(cocycle, w);
  const auto a = cocycle.multipliers();
  const auto ws = w.entries();
  const auto log_b = prefix_log_products(a);
  const PairwiseBest best = pairwise_scan(a, ws, log_b);

  MinimaxResult result;
  result.value = best.value;
  result.witness_pair = {best.k, best.k + best.l};
  if (best.l > 0) {
    // Balance point in the g_k coordinate, then pull back to v_0.
    double v = -best.relative_c / (1.0 + best.relative_b);
    for (std::size_t i = best.k; i-- > 0;) {
      v = (v - ws[i]) / a[i];
    }
    result.minimizer = v;
  }

  result.line_search_value = line_search_min_sup(cocycle, w);
  if (std::abs(result.line_search_value - result.value) > scaled_tolerance(1e-9, result.value)) {
    throw NumericalRangeError("pairwise minimax value " + std::to_string(result.value) +
                                  " disagrees with line search " +
                                  std::to_string(result.line_search_value),
                              best.k + best.l);
  }
  return result;
}

double worst_q(const ScalarCocycle& cocycle) {
  return min_sup(cocycle, Perturbation::unit(cocycle.size())).value;
}

WorstCaseSearch brute_force_worst(const ScalarCocycle& cocycle, std::size_t budget,
                                  std::uint64_t seed, std::size_t max_vertex_n) {
  const std::size_t n = cocycle.size();
  const auto a = cocycle.multipliers();
  const auto log_b = prefix_log_products(a);

  WorstCaseSearch search;
  std::vector<double> w(n, 1.0);
  std::vector<double> best_w;
  double best = -1.0;

  auto consider = [&](const std::vector<double>& candidate) {
    const double value = pairwise_scan(a, candidate, log_b).value;
    ++search.evaluated;
    if (value > best) {
      best = value;
      best_w = candidate;
    }
  };

  if (n <= max_vertex_n) {
    // P(-w) = P(w), so w_1 = +1 covers every vertex class.
    const std::uint64_t count = std::uint64_t{1} << (n - 1);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      for (std::size_t i = 1; i < n; ++i) {
        w[i] = ((mask >> (i - 1)) & 1U) ? -1.0 : 1.0;
      }
      consider(w);
    }
    search.exhaustive = true;
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (std::size_t s = 0; s < budget; ++s) {
    for (double& x : w) x = unit(rng);
    consider(w);
  }

  search.value = std::max(best, 0.0);
  search.worst = Perturbation(best_w.empty() ? std::vector<double>(n, 0.0) : best_w);
  return search;
}

LowerBoundReport lower_bound_check(const ScalarCocycle& cocycle, const Perturbation& w, double d) {
  require_matching(cocycle, w);
  if (!(d > 0.0)) {
    throw ValidationError("lower_bound_check needs d > 0");
  }
  const auto ws = w.entries();
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (ws[i] < d) {
      throw ValidationError("w_" + std::to_string(i + 1) + " = " + std::to_string(ws[i]) +
                            " is below d = " + std::to_string(d));
    }
  }
  LowerBoundReport report;
  report.p = min_sup(cocycle, w).value;
  report.scaled_q = d * worst_q(cocycle);
  report.slack = report.p - report.scaled_q;
  report.holds = report.p >= report.scaled_q - scaled_tolerance(1e-9, report.scaled_q);
  return report;
}

}  // namespace holderlab
