#pragma once

// Test-side reference computations. Nothing here calls into holderlab: the
// minimax value is rebuilt from explicit sums in long double and minimised
// either by golden-section search or by exact breakpoint enumeration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using real = long double;

// v_i as an affine function of u = v_j, j = argmax_i B_i, so every slope is <= 1:
//   v_i(u) = slope[i] u + offset[i].
struct Lines {
  std::vector<real> slope;
  std::vector<real> offset;
};

inline Lines anchored_lines(const std::vector<double>& a, const std::vector<double>& w) {
  const std::size_t n = a.size();
  std::vector<real> log_b(n + 1, 0.0L);
  for (std::size_t i = 0; i < n; ++i) log_b[i + 1] = log_b[i] + std::log(static_cast<real>(a[i]));
  const std::size_t j = static_cast<std::size_t>(std::max_element(log_b.begin(), log_b.end()) - log_b.begin());
  auto ratio = [&](std::size_t i, std::size_t k) { return std::exp(log_b[i] - log_b[k]); };  // B_i / B_k

  Lines lines;
  lines.slope.resize(n + 1);
  lines.offset.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    lines.slope[i] = ratio(i, j);
    real sum = 0.0L;
    if (i >= j) {
      for (std::size_t k = j + 1; k <= i; ++k) sum += static_cast<real>(w[k - 1]) * ratio(i, k);
    } else {
      for (std::size_t k = i + 1; k <= j; ++k) sum -= static_cast<real>(w[k - 1]) * ratio(i, k);
    }
    lines.offset[i] = sum;
  }
  return lines;
}

inline real sup_at(const Lines& l, real u) {
  real m = 0.0L;
  for (std::size_t i = 0; i < l.slope.size(); ++i) m = std::max(m, std::fabs(l.slope[i] * u + l.offset[i]));
  return m;
}

// Golden-section search on the convex function u -> max_i |v_i(u)|.
inline real golden_min_sup(const std::vector<double>& a, const std::vector<double>& w) {
  const Lines l = anchored_lines(a, w);
  const real g0 = sup_at(l, 0.0L);
  if (g0 == 0.0L) return 0.0L;
  const real r = (std::sqrt(5.0L) - 1.0L) / 2.0L;
  real lo = -g0;
  real hi = g0;
  real x1 = hi - r * (hi - lo);
  real x2 = lo + r * (hi - lo);
  real f1 = sup_at(l, x1);
  real f2 = sup_at(l, x2);
  for (int it = 0; it < 300; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = sup_at(l, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = sup_at(l, x2);
    }
  }
  return std::min({f1, f2, sup_at(l, 0.5L * (lo + hi))});
}

// Exact minimum of a max of absolute values of lines: it sits where two of
// the 2(n+1) signed lines cross, or at a zero of one of them. O(n^3).
inline real breakpoint_min_sup(const std::vector<double>& a, const std::vector<double>& w) {
  const Lines l = anchored_lines(a, w);
  const std::size_t m = l.slope.size();
  real best = sup_at(l, 0.0L);
  auto consider = [&](real u) {
    if (std::isfinite(u)) best = std::min(best, sup_at(l, u));
  };
  for (std::size_t i = 0; i < m; ++i) {
    consider(-l.offset[i] / l.slope[i]);
    for (std::size_t k = i + 1; k < m; ++k) {
      for (int sign : {-1, 1}) {
        const real ds = l.slope[i] - sign * l.slope[k];
        if (ds != 0.0L) consider(-(l.offset[i] - sign * l.offset[k]) / ds);
      }
    }
  }
  return best;
}

// Dense 1-D scan in v_0 for small, well-conditioned instances.
inline real scan_min_sup(const std::vector<double>& a, const std::vector<double>& w, real lo, real hi,
                         std::size_t steps) {
  real best = std::numeric_limits<real>::infinity();
  for (std::size_t s = 0; s <= steps; ++s) {
    real v = lo + (hi - lo) * static_cast<real>(s) / static_cast<real>(steps);
    real m = std::fabs(v);
    for (std::size_t i = 0; i < a.size(); ++i) {
      v = static_cast<real>(a[i]) * v + static_cast<real>(w[i]);
      m = std::max(m, std::fabs(v));
    }
    best = std::min(best, m);
  }
  return best;
}

// C_i = sum_{k=1}^{i} (prod_{j=k}^{i-1} a_j) w_k.
inline real c_track_sum(const std::vector<double>& a, const std::vector<double>& w, std::size_t i) {
  real sum = 0.0L;
  for (std::size_t k = 1; k <= i; ++k) {
    real prod = 1.0L;
    for (std::size_t j = k; j < i; ++j) prod *= a[j];
    sum += prod * w[k - 1];
  }
  return sum;
}

// Fixed fiber value t_0 of an affine cycle t -> lambda_i t + c_i + s.
inline real affine_cycle_point(const std::vector<double>& lambda, const std::vector<double>& c, real s) {
  real num = 0.0L;
  real mult = 1.0L;
  for (std::size_t i = lambda.size(); i-- > 0;) {
    num += (c[i] + s) * mult;
    mult *= lambda[i];
  }
  return num / (1.0L - mult);
}

inline std::vector<double> uniform_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

inline bool close(real x, real y, real rel) {
  return std::fabs(x - y) <= rel * std::max<real>(1.0L, std::fabs(y));
}

}  // namespace oracle
