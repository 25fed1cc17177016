#include "holderlab/fiber_map.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <utility>

#include "holderlab/errors.hpp"

namespace holderlab {

struct FiberMap::Impl {
  std::string name;
  Function value;
  Derivatives closed;
  Function inverse;
  Interval domain;
};

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double fd_step(double t) { return std::cbrt(kEps) * std::max(1.0, std::abs(t)); }

double fd_first(const FiberMap::Function& f, double t) {
  const double h = fd_step(t);
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

double fd_second(const FiberMap::Function& f, double t) {
  const double h = fd_step(t);
  return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
}

double fd_third(const FiberMap::Function& f, double t) {
  // Six-point stencil, truncation error O(h^4).
  const double h = std::pow(kEps, 1.0 / 7.0) * std::max(1.0, std::abs(t));
  const double num = -f(t + 3 * h) + 8 * f(t + 2 * h) - 13 * f(t + h) + 13 * f(t - h) -
                     8 * f(t - 2 * h) + f(t - 3 * h);
  return num / (8.0 * h * h * h);
}

double pull_inside(double t, const Interval& domain) {
  // Keep bracket endpoints strictly inside open-ended domains.
  const double margin = 1e-12 * std::max(1.0, std::abs(t));
  if (t <= domain.lo) return domain.lo + margin;
  if (t >= domain.hi) return domain.hi - margin;
  return t;
}

}  // namespace

FiberMap::FiberMap(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

FiberMap::FiberMap(std::string name, Function value, Interval domain)
    : FiberMap(std::move(name), std::move(value), Derivatives{}, domain) {}

FiberMap::FiberMap(std::string name, Function value, Derivatives closed_form, Interval domain) {
  if (!value) throw ValidationError("fiber map '" + name + "' has no value function");
  if (!(domain.lo < domain.hi)) throw ValidationError("fiber map '" + name + "' has an empty domain");
  auto impl = std::make_shared<Impl>();
  impl->name = std::move(name);
  impl->value = std::move(value);
  impl->closed = std::move(closed_form);
  impl->domain = domain;
  impl_ = std::move(impl);
}

FiberMap FiberMap::with_inverse(Function inverse) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->inverse = std::move(inverse);
  return FiberMap(std::shared_ptr<const Impl>(std::move(impl)));
}

const std::string& FiberMap::name() const noexcept { return impl_->name; }
const Interval& FiberMap::domain() const noexcept { return impl_->domain; }

bool FiberMap::has_closed_form_derivatives() const noexcept {
  return impl_->closed.d1 && impl_->closed.d2 && impl_->closed.d3;
}

bool FiberMap::has_closed_form_inverse() const noexcept { return static_cast<bool>(impl_->inverse); }

double FiberMap::operator()(double t) const { return impl_->value(t); }

double FiberMap::d1(double t) const {
  return impl_->closed.d1 ? impl_->closed.d1(t) : fd_first(impl_->value, t);
}

double FiberMap::d2(double t) const {
  return impl_->closed.d2 ? impl_->closed.d2(t) : fd_second(impl_->value, t);
}

double FiberMap::d3(double t) const {
  return impl_->closed.d3 ? impl_->closed.d3(t) : fd_third(impl_->value, t);
}

double FiberMap::inverse(double y, double hint) const {
  if (impl_->inverse) return impl_->inverse(y);

  const auto& dom = impl_->domain;
  auto residual = [&](double u) { return impl_->value(u) - y; };

  double lo = pull_inside(hint, dom);
  double hi = lo;
  double r_lo = residual(lo);
  if (r_lo == 0.0) return lo;
  double r_hi = r_lo;
  double step = 1e-3 * std::max(1.0, std::abs(hint));
  // Grow a bracket in the direction that reduces |g(u) - y|; g is increasing.
  for (int k = 0; k < 200 && (r_lo > 0.0) == (r_hi > 0.0); ++k) {
    if (r_lo > 0.0) {
      hi = lo;
      r_hi = r_lo;
      lo = pull_inside(lo - step, dom);
      r_lo = residual(lo);
    } else {
      lo = hi;
      r_lo = r_hi;
      hi = pull_inside(hi + step, dom);
      r_hi = residual(hi);
    }
    if (r_lo == 0.0) return lo;
    if (r_hi == 0.0) return hi;
    step *= 2.0;
  }
  if ((r_lo > 0.0) == (r_hi > 0.0)) {
    throw DomainError("fiber map '" + impl_->name + "': no preimage of " + std::to_string(y) +
                      " inside the domain");
  }
  std::uintmax_t max_iter = 300;
  const auto bracket = boost::math::tools::toms748_solve(
      residual, lo, hi, r_lo, r_hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
  return 0.5 * (bracket.first + bracket.second);
}

namespace fibers {

FiberMap affine(double lambda, double c) {
  if (lambda == 0.0) throw ValidationError("affine fiber map needs lambda != 0");
  FiberMap g(
      "affine(" + std::to_string(lambda) + "," + std::to_string(c) + ")",
      [lambda, c](double t) { return lambda * t + c; },
      {[lambda](double) { return lambda; }, [](double) { return 0.0; }, [](double) { return 0.0; }});
  return g.with_inverse([lambda, c](double y) { return (y - c) / lambda; });
}

FiberMap polynomial(std::vector<double> coeffs, std::string name) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  auto horner = [](const std::vector<double>& c, double t) {
    double acc = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * t + c[k];
    return acc;
  };
  auto derive = [](const std::vector<double>& c) {
    std::vector<double> out;
    for (std::size_t k = 1; k < c.size(); ++k) out.push_back(static_cast<double>(k) * c[k]);
    if (out.empty()) out.push_back(0.0);
    return out;
  };
  const auto c1 = derive(coeffs);
  const auto c2 = derive(c1);
  const auto c3 = derive(c2);
  return FiberMap(std::move(name), [coeffs, horner](double t) { return horner(coeffs, t); },
                  {[c1, horner](double t) { return horner(c1, t); },
                   [c2, horner](double t) { return horner(c2, t); },
                   [c3, horner](double t) { return horner(c3, t); }});
}

FiberMap quadratic_neutral() {
  FiberMap p = polynomial({0.0, 1.0, -1.0}, "t-t^2");
  return FiberMap(p.name(), [p](double t) { return p(t); },
                  {[p](double t) { return p.d1(t); }, [p](double t) { return p.d2(t); },
                   [p](double t) { return p.d3(t); }},
                  Interval{-std::numeric_limits<double>::infinity(), 0.5});
}

FiberMap cubic_neutral() {
  const double edge = 1.0 / std::sqrt(3.0);
  FiberMap p = polynomial({0.0, 1.0, 0.0, -1.0}, "t-t^3");
  return FiberMap(p.name(), [p](double t) { return p(t); },
                  {[p](double t) { return p.d1(t); }, [p](double t) { return p.d2(t); },
                   [p](double t) { return p.d3(t); }},
                  Interval{-edge, edge});
}

FiberMap mobius(double a, double b, double c, double d) {
  const double det = a * d - b * c;
  if (det == 0.0) throw ValidationError("mobius map needs ad - bc != 0");
  Interval dom;
  if (c != 0.0) {
    const double pole = -d / c;
    if (pole <= 0.0) {
      dom.lo = pole;
    } else {
      dom.hi = pole;
    }
  }
  FiberMap g("mobius(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "," +
                 std::to_string(d) + ")",
             [=](double t) { return (a * t + b) / (c * t + d); },
             {[=](double t) {
                const double q = c * t + d;
                return det / (q * q);
              },
              [=](double t) {
                const double q = c * t + d;
                return -2.0 * c * det / (q * q * q);
              },
              [=](double t) {
                const double q = c * t + d;
                return 6.0 * c * c * det / (q * q * q * q);
              }},
             dom);
  return g.with_inverse([=](double y) { return (d * y - b) / (a - c * y); });
}

FiberMap scaled_tanh(double lambda, double c) {
  if (lambda == 0.0) throw ValidationError("tanh fiber map needs lambda != 0");
  auto sech2 = [](double t) {
    const double ch = std::cosh(t);
    return 1.0 / (ch * ch);
  };
  FiberMap g("tanh(" + std::to_string(lambda) + "," + std::to_string(c) + ")",
             [=](double t) { return lambda * std::tanh(t) + c; },
             {[=](double t) { return lambda * sech2(t); },
              [=](double t) { return -2.0 * lambda * std::tanh(t) * sech2(t); },
              [=](double t) {
                const double s2 = sech2(t);
                const double th = std::tanh(t);
                return -2.0 * lambda * s2 * (s2 - 2.0 * th * th);
              }});
  return g.with_inverse([=](double y) {
    const double u = (y - c) / lambda;
    if (!(std::abs(u) < 1.0)) {
      throw DomainError("tanh fiber map: " + std::to_string(y) + " is outside the range");
    }
    return std::atanh(u);
  });
}

FiberMap identity() { return affine(1.0, 0.0); }

FiberMap compose(const FiberMap& outer, const FiberMap& inner) {
  FiberMap::Derivatives chain{
      [=](double t) { return outer.d1(inner(t)) * inner.d1(t); },
      [=](double t) {
        const double u = inner(t);
        const double g1 = inner.d1(t);
        return outer.d2(u) * g1 * g1 + outer.d1(u) * inner.d2(t);
      },
      [=](double t) {
        const double u = inner(t);
        const double g1 = inner.d1(t);
        return outer.d3(u) * g1 * g1 * g1 + 3.0 * outer.d2(u) * g1 * inner.d2(t) +
               outer.d1(u) * inner.d3(t);
      }};
  FiberMap g(outer.name() + "o" + inner.name(), [=](double t) { return outer(inner(t)); },
             std::move(chain), inner.domain());
  if (outer.has_closed_form_inverse() && inner.has_closed_form_inverse()) {
    g = g.with_inverse([=](double y) { return inner.inverse(outer.inverse(y)); });
  }
  return g;
}

FiberMap translated(const FiberMap& g, double shift) {
  FiberMap out(g.name() + "+" + std::to_string(shift), [=](double t) { return g(t) + shift; },
               {[=](double t) { return g.d1(t); }, [=](double t) { return g.d2(t); },
                [=](double t) { return g.d3(t); }},
               g.domain());
  return out.with_inverse([=](double y) { return g.inverse(y - shift); });
}

FiberMap without_closed_forms(const FiberMap& g) {
  return FiberMap(g.name() + "[fd]", [=](double t) { return g(t); }, g.domain());
}

}  // namespace fibers
}  // namespace holderlab
