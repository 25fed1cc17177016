#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace holderlab {

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double t) const noexcept { return t >= lo && t <= hi; }
  double length() const noexcept { return hi - lo; }
};

/// A one-dimensional fiber map t -> g(t) with derivatives up to order three.
///
/// Derivatives come from closed forms when the map supplies them and from
/// central differences otherwise: step cbrt(eps) max(1, |t|) for the first
/// two orders and a fourth-order six-point stencil for the third.
/// Copies share the underlying callables.
class FiberMap {
 public:
  using Function = std::function<double(double)>;

  struct Derivatives {
    Function d1;
    Function d2;
    Function d3;
  };

  FiberMap(std::string name, Function value, Interval domain = {});
  FiberMap(std::string name, Function value, Derivatives closed_form, Interval domain = {});

  /// Same map with a closed-form inverse attached.
  FiberMap with_inverse(Function inverse) const;

  const std::string& name() const noexcept;
  const Interval& domain() const noexcept;
  bool has_closed_form_derivatives() const noexcept;
  bool has_closed_form_inverse() const noexcept;

  double operator()(double t) const;
  double d1(double t) const;
  double d2(double t) const;
  double d3(double t) const;

  /// Solves g(u) = y. Uses the closed-form inverse when present, otherwise a
  /// bracketed TOMS 748 search grown outward from `hint`. Assumes g increasing.
  double inverse(double y, double hint) const;
  double inverse(double y) const { return inverse(y, y); }

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;

  explicit FiberMap(std::shared_ptr<const Impl> impl);
};

namespace fibers {

/// lambda t + c.
FiberMap affine(double lambda, double c = 0.0);

/// sum_k coeffs[k] t^k, evaluated by Horner.
FiberMap polynomial(std::vector<double> coeffs, std::string name = "polynomial");

/// t - t^2, restricted to (-inf, 1/2) where it is increasing.
FiberMap quadratic_neutral();

/// t - t^3, restricted to |t| < 1/sqrt(3) where it is increasing.
FiberMap cubic_neutral();

/// (a t + b) / (c t + d) on the side of the pole that contains the origin
/// (the right side when the pole sits at 0). Requires ad - bc != 0.
FiberMap mobius(double a, double b, double c, double d);

/// lambda tanh(t) + c. Schwarzian is identically -2.
FiberMap scaled_tanh(double lambda, double c = 0.0);

FiberMap identity();

/// outer(inner(t)) with chain-rule derivatives.
FiberMap compose(const FiberMap& outer, const FiberMap& inner);

/// g(t) + shift.
FiberMap translated(const FiberMap& g, double shift);

/// Same map evaluated through finite differences only (derivative oracle).
FiberMap without_closed_forms(const FiberMap& g);

}  // namespace fibers
}  // namespace holderlab
