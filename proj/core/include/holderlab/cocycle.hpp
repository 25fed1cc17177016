#pragma once

// Bounded-solution algebra for one-dimensional positive cocycles.
//
// A cocycle a_0..a_{n-1} acts on orbit segments v_0..v_n through
//   v_{i+1} = a_i v_i + w_{i+1},
// with w_1..w_n a translation perturbation. Every orbit is determined by v_0,
// and v_i = B_i v_0 + C_i. P(w) is the smallest sup-norm of an orbit for w;
// Q(n) is the worst P over the unit cube, attained at w = (1,...,1).

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace holderlab {

/// Finite positive multiplier sequence with uniform bound R (1/R < a_i < R).
class ScalarCocycle {
 public:
  ScalarCocycle(std::vector<double> multipliers, double bound);

  /// Uses R = 1 + max(1, max a_i, 1 / min a_i).
  static ScalarCocycle with_default_bound(std::vector<double> multipliers);

  /// Constant cocycle a_i = value for i < n.
  static ScalarCocycle constant(double value, std::size_t n);

  std::span<const double> multipliers() const noexcept { return a_; }
  double operator[](std::size_t i) const { return a_[i]; }
  std::size_t size() const noexcept { return a_.size(); }
  double bound() const noexcept { return bound_; }

 private:
  std::vector<double> a_;
  double bound_;
};

/// Translation inputs w_1..w_n; entries()[i] holds w_{i+1}.
class Perturbation {
 public:
  explicit Perturbation(std::vector<double> entries);

  static Perturbation unit(std::size_t n) { return Perturbation(std::vector<double>(n, 1.0)); }
  static Perturbation constant(double value, std::size_t n) {
    return Perturbation(std::vector<double>(n, value));
  }

  std::span<const double> entries() const noexcept { return w_; }
  std::size_t size() const noexcept { return w_.size(); }
  double sup_norm() const noexcept;
  Perturbation scaled(double d) const;

 private:
  std::vector<double> w_;
};

/// Orbit values v_0..v_n.
struct OrbitSegment {
  std::vector<double> values;

  double sup_norm() const noexcept;
};

/// Coefficients of g_i(v) = B_i v + C_i, with B_i kept as log B_i.
class AffineTrack {
 public:
  AffineTrack(std::vector<double> log_b, std::vector<double> c);

  std::size_t size() const noexcept { return c_.size(); }  // n + 1
  std::span<const double> log_b() const noexcept { return log_b_; }
  std::span<const double> c() const noexcept { return c_; }

  double b(std::size_t i) const;
  double c(std::size_t i) const { return c_.at(i); }

  /// B_{k,l} = B_{k+l} / B_k.
  double relative_b(std::size_t k, std::size_t l) const;
  /// C_{k,l} = C_{k+l} - B_{k,l} C_k, so that g_{k+l} = B_{k,l} g_k + C_{k,l}.
  double relative_c(std::size_t k, std::size_t l) const;

  /// Evaluates g_i(v).
  double evaluate(std::size_t i, double v) const;

 private:
  std::vector<double> log_b_;
  std::vector<double> c_;
};

struct MinimaxResult {
  double value = 0.0;
  double minimizer = 0.0;
  std::pair<std::size_t, std::size_t> witness_pair{0, 0};
  /// Independent line-search value the pairwise result was checked against.
  double line_search_value = 0.0;
};

struct WorstCaseSearch {
  double value = 0.0;
  Perturbation worst{std::vector<double>{}};
  bool exhaustive = false;
  std::size_t evaluated = 0;
};

struct LowerBoundReport {
  bool holds = false;
  double p = 0.0;            // P(w)
  double scaled_q = 0.0;     // d * Q(n)
  double slack = 0.0;        // p - scaled_q
};

/// v_0 = v0 and v_{i+1} = a_i v_i + w_{i+1}.
OrbitSegment evolve(const ScalarCocycle& cocycle, const Perturbation& w, double v0);

/// B and C tracks for (cocycle, w). Throws NumericalRangeError on overflow.
AffineTrack affine_tracks(const ScalarCocycle& cocycle, const Perturbation& w);

/// min_v max(|g_i1(v)|, |g_i2(v)|) = |C_{k,l}| / (1 + B_{k,l}), k = i1, l = i2 - i1.
double pairwise_min(const AffineTrack& track, std::size_t i1, std::size_t i2);

/// Exact P(w) by pairwise enumeration, cross-checked against a golden-section
/// search on G_n(v) = max_i |g_i(v)|. Throws NumericalRangeError if the two
/// disagree beyond 1e-9 * max(1, P).
MinimaxResult min_sup(const ScalarCocycle& cocycle, const Perturbation& w);

/// P(w) from pairwise enumeration only (no cross-check, no minimizer).
double min_sup_value(const ScalarCocycle& cocycle, const Perturbation& w);

/// Golden-section minimisation of G_n in the coordinate u = v_j, where j
/// maximises B_j, so every g_i has slope at most one in u.
double line_search_min_sup(const ScalarCocycle& cocycle, const Perturbation& w);

/// Q(n) = P(1,...,1).
double worst_q(const ScalarCocycle& cocycle);

/// Max of P over cube vertices (exhaustive when n <= max_vertex_n) plus
/// `budget` seeded uniform samples of [-1, 1]^n.
WorstCaseSearch brute_force_worst(const ScalarCocycle& cocycle, std::size_t budget,
                                  std::uint64_t seed, std::size_t max_vertex_n = 20);

/// Checks P(w) >= d Q(n) for perturbations with w_i >= d > 0.
LowerBoundReport lower_bound_check(const ScalarCocycle& cocycle, const Perturbation& w, double d);

}  // namespace holderlab
