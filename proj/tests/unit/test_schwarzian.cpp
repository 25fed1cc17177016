#include <gtest/gtest.h>

#include <cmath>

#include "holderlab/errors.hpp"
#include "holderlab/schwarzian.hpp"

using namespace holderlab;

namespace {

TranslationFamily one_point(FiberMap g) {
  return TranslationFamily(SkewProductSystem(BaseSystem::finite_cycle(1), {std::move(g)}));
}

}  // namespace

TEST(Schwarzian, MobiusIsZero) {
  const auto m = fibers::mobius(1.0, 0.1, 0.2, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double t = -0.5 + k / 999.0;
    EXPECT_LT(std::abs(schwarzian(m, t)), 1e-9) << t;
  }
}

TEST(Schwarzian, ClosedFormExamples) {
  EXPECT_DOUBLE_EQ(schwarzian(fibers::affine(3.0, 1.0), 0.4), 0.0);
  EXPECT_NEAR(schwarzian(fibers::cubic_neutral(), 0.0), -6.0, 1e-12);
  for (double t : {-1.0, 0.0, 0.7}) EXPECT_NEAR(schwarzian(fibers::scaled_tanh(0.5), t), -2.0, 1e-9);
  // t + t^3: S = 6 / (1 + 3 t^2) - 54 t^2 / (1 + 3 t^2)^2.
  const auto p = fibers::polynomial({0.0, 1.0, 0.0, 1.0});
  for (double t : {0.0, 0.3, -0.8}) {
    const double u = 1 + 3 * t * t;
    EXPECT_NEAR(schwarzian(p, t), 6.0 / u - 54.0 * t * t / (u * u), 1e-12);
  }
}

TEST(Schwarzian, LiteralFormDiffersAndNeedsCurvature) {
  const auto p = fibers::polynomial({0.0, 2.0, 1.0, 1.0});
  const double t = 0.2;
  const double d1 = 2 + 2 * t + 3 * t * t;
  const double d2 = 2 + 6 * t;
  EXPECT_NEAR(schwarzian(p, t, SchwarzianFormula::Literal), 6.0 / d2 - 1.5 * (d2 / d1) * (d2 / d1), 1e-12);
  EXPECT_NE(schwarzian(p, t, SchwarzianFormula::Literal), schwarzian(p, t));
  EXPECT_THROW(schwarzian(fibers::affine(2.0), 0.0, SchwarzianFormula::Literal), DomainError);
}

TEST(Schwarzian, ZeroDerivativeIsADomainError) {
  EXPECT_THROW(schwarzian(fibers::polynomial({0.0, 0.0, 1.0}), 0.0), DomainError);
}

TEST(Schwarzian, CompositionRule) {
  const auto f = fibers::polynomial({0.0, 1.0, 0.1, -0.2});
  const auto g = fibers::mobius(1.0, 0.1, 0.2, 1.0);
  for (int k = 0; k < 100; ++k) {
    const double t = -0.5 + k / 99.0;
    EXPECT_LT(compose_check(f, g, t), 1e-6) << t;
  }
  const auto h = fibers::scaled_tanh(0.9, 0.1);
  for (double t : {-0.4, 0.0, 0.35}) EXPECT_LT(compose_check(h, f, t), 1e-6);
}

TEST(Distortion, AffineIsOne) {
  SkewProductSystem sys(BaseSystem::finite_cycle(2), {fibers::affine(0.5), fibers::affine(3.0, 1.0)});
  const auto d = distortion_ratio(sys, 0.0, {0.1, 0.3}, 7);
  EXPECT_NEAR(d.ratio, 1.0, 1e-14);
  EXPECT_NEAR(d.refined_ratio, 1.0, 1e-14);
  EXPECT_TRUE(d.converged);
  EXPECT_NEAR(d.min_derivative, std::pow(0.5, 4) * std::pow(3.0, 3), 1e-10);
}

TEST(Distortion, SinglePointIsOne) {
  SkewProductSystem sys(BaseSystem::finite_cycle(1), {fibers::scaled_tanh(0.9)});
  EXPECT_DOUBLE_EQ(distortion_ratio(sys, 0.0, {0.2, 0.2}, 10).ratio, 1.0);
}

TEST(Distortion, CubicGrowsWithN) {
  SkewProductSystem sys(BaseSystem::finite_cycle(1), {fibers::cubic_neutral()});
  double previous = 1.0;
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto d = distortion_ratio(sys, 0.0, {0.5, 0.52}, n);
    EXPECT_TRUE(std::isfinite(d.ratio));
    EXPECT_GE(d.ratio, previous - 1e-12) << n;
    EXPECT_TRUE(d.converged);
    previous = d.ratio;
  }
  EXPECT_GT(previous, 1.0);
}

TEST(Distortion, Validation) {
  SkewProductSystem sys(BaseSystem::finite_cycle(1), {fibers::cubic_neutral()});
  EXPECT_THROW(distortion_ratio(sys, 0.0, {0.3, 0.2}, 2), ValidationError);
  EXPECT_THROW(distortion_ratio(sys, 0.0, {0.2, 0.3}, 2, 1), ValidationError);
  EXPECT_THROW(distortion_ratio(sys, 0.0, {0.5, 0.7}, 2), DomainError);
}

TEST(IntervalTrack, AffineContractionHalvesTheInterval) {
  const auto t = interval_track(one_point(fibers::affine(0.5)), {0.0, 0.0}, 0.01, 1, 10);
  EXPECT_NEAR(t.unperturbed_end, 0.0, 1e-15);
  EXPECT_NEAR(t.conjugate_end, 0.02, 1e-14);
  EXPECT_NEAR(t.perturbed_end, 0.02, 1e-14);
  EXPECT_TRUE(t.ordered);
  ASSERT_EQ(t.ratios.size(), 11u);
  for (std::size_t m = 0; m <= 10; ++m) EXPECT_NEAR(t.ratios[m], std::pow(0.5, m), 1e-12);
  ASSERT_TRUE(t.first_below_gamma.has_value());
  EXPECT_EQ(*t.first_below_gamma, 2u);
  EXPECT_FALSE(t.escaped);
}

TEST(IntervalTrack, ZeroParameterIsDegenerate) {
  const auto t = interval_track(one_point(fibers::affine(0.5)), {0.0, 0.3}, 0.0, 2, 5);
  EXPECT_DOUBLE_EQ(t.lengths[0], 0.0);
  EXPECT_TRUE(std::isnan(t.ratios[0]));
  EXPECT_FALSE(t.first_below_gamma.has_value());
}

TEST(IntervalTrack, ExpandingFibersNeverShrink) {
  const auto t = interval_track(one_point(fibers::affine(2.0)), {0.0, 0.0}, 0.01, 2, 8);
  EXPECT_FALSE(t.first_below_gamma.has_value());
  EXPECT_NEAR(t.ratios.back(), 256.0, 1e-9);
  EXPECT_THROW(interval_track(one_point(fibers::affine(2.0)), {0.0, 0.0}, 0.01, 2, 8, 1.0), ValidationError);
}

TEST(IntervalTrack, NonlinearContraction) {
  const auto fam = one_point(fibers::scaled_tanh(0.9));
  const Point z = invariant_point(fam, 0.0, 0.0);
  const auto t = interval_track(fam, z, 0.01, 3, 40);
  EXPECT_TRUE(t.ordered);
  ASSERT_TRUE(t.first_below_gamma.has_value());
  for (std::size_t m = 1; m < t.ratios.size(); ++m) EXPECT_LE(t.ratios[m], t.ratios[m - 1]);
}
