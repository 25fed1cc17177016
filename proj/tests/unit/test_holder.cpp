#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "holderlab/errors.hpp"
#include "holderlab/holder.hpp"

using namespace holderlab;

namespace {

ContinuationCurve power_law(double C, double alpha, const std::vector<double>& grid) {
  ContinuationCurve curve;
  for (double s : grid) curve.samples.push_back({s, C * std::pow(s, alpha), CurveSource::RootTracking, {}});
  return curve;
}

}  // namespace

TEST(FitHolder, RecoversExactPowerLaws) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> alpha_dist(0.1, 1.0);
  std::uniform_real_distribution<double> c_dist(0.1, 10.0);
  const auto grid = dyadic_grid(1e-8, 1e-3);
  for (int trial = 0; trial < 50; ++trial) {
    const double alpha = alpha_dist(rng);
    const double C = c_dist(rng);
    const auto fit = fit_holder(power_law(C, alpha, grid));
    EXPECT_NEAR(fit.alpha, alpha, 1e-10);
    EXPECT_NEAR(fit.C, C, 1e-8 * C);
    EXPECT_NEAR(fit.r2, 1.0, 1e-12);
    EXPECT_EQ(fit.n_samples, grid.size());
  }
}

TEST(FitHolder, DropsZerosAndNeedsFourSamples) {
  auto curve = power_law(2.0, 0.5, {1e-4, 2e-4, 4e-4, 8e-4, 1.6e-3});
  curve.samples.push_back({3.2e-3, 0.0, CurveSource::RootTracking, {}});
  const auto fit = fit_holder(curve);
  EXPECT_EQ(fit.dropped, 1u);
  EXPECT_EQ(fit.n_samples, 5u);
  EXPECT_EQ(fit.residuals.size(), 5u);
  EXPECT_NEAR(fit.alpha, 0.5, 1e-12);

  EXPECT_THROW(fit_holder(power_law(1.0, 0.5, {1e-4, 2e-4, 4e-4})), ValidationError);
  auto bad = power_law(1.0, 0.5, {1e-4, 2e-4, 4e-4, 8e-4});
  bad.samples[1].d = -1.0;
  EXPECT_THROW(fit_holder(bad), ValidationError);
}

TEST(DyadicGrid, PowersOfTwoInRange) {
  const auto g = dyadic_grid(1e-3, 0.1);
  ASSERT_EQ(g.size(), 6u);
  EXPECT_DOUBLE_EQ(g.front(), std::ldexp(1.0, -9));
  EXPECT_DOUBLE_EQ(g.back(), std::ldexp(1.0, -4));
  for (std::size_t k = 1; k < g.size(); ++k) EXPECT_DOUBLE_EQ(g[k], 2 * g[k - 1]);
  EXPECT_THROW(dyadic_grid(0.0, 1.0), ValidationError);
  EXPECT_THROW(dyadic_grid(1e-20, 1.0), ValidationError);
}

TEST(Names, RoundTrip) {
  for (auto s : {CurveSource::Continuation, CurveSource::RootTracking, CurveSource::ConjugatePoint}) {
    EXPECT_EQ(parse_curve_source(to_string(s)), s);
  }
  EXPECT_EQ(parse_branch("-"), Branch::Negative);
  EXPECT_EQ(parse_branch("positive"), Branch::Positive);
  EXPECT_THROW(parse_curve_source("spline"), ValidationError);
  EXPECT_THROW(parse_branch("up"), ValidationError);
}

TEST(DisplacementCurve, QuadraticIsSquareRoot) {
  const auto e = catalog_entry("quadratic");
  const auto grid = dyadic_grid(1e-8, 1e-3);
  const auto curve = displacement_curve(CurveSource::RootTracking, e.family, e.target, grid);
  ASSERT_EQ(curve.samples.size(), grid.size());
  for (const auto& smp : curve.samples) EXPECT_NEAR(smp.d, std::sqrt(smp.s), 1e-12);
  const auto fit = fit_holder(curve);
  EXPECT_NEAR(fit.alpha, 0.5, 1e-6);
  EXPECT_NEAR(fit.alpha, *e.expected_alpha, 0.01);
}

TEST(DisplacementCurve, CubicIsCubeRootOnOneBranchOnly) {
  auto e = catalog_entry("cubic");
  const auto grid = dyadic_grid(1e-8, 1e-3);
  const auto curve = displacement_curve(CurveSource::RootTracking, e.family, e.target, grid);
  for (const auto& smp : curve.samples) EXPECT_NEAR(smp.d, std::cbrt(smp.s), 1e-10);
  EXPECT_NEAR(fit_holder(curve).alpha, 1.0 / 3.0, 1e-6);

  e.target.branch = Branch::Negative;
  const auto other = displacement_curve(CurveSource::RootTracking, e.family, e.target, grid);
  EXPECT_TRUE(other.samples.empty());
  EXPECT_EQ(other.skipped.size(), grid.size());
  EXPECT_FALSE(other.notes.empty());
}

TEST(DisplacementCurve, AffineSourcesAgree) {
  const auto e = catalog_entry("affine-contracting");
  const auto grid = dyadic_grid(1e-6, 1e-2);
  for (auto source : {CurveSource::RootTracking, CurveSource::Continuation, CurveSource::ConjugatePoint}) {
    const auto curve = displacement_curve(source, e.family, e.target, grid);
    ASSERT_EQ(curve.samples.size(), grid.size()) << to_string(source);
    for (const auto& smp : curve.samples) {
      EXPECT_NEAR(smp.d, 2 * smp.s, 1e-12) << to_string(source);
      EXPECT_EQ(smp.source, source);
    }
    EXPECT_NEAR(fit_holder(curve).alpha, 1.0, 1e-9);
  }
}

TEST(DisplacementCurve, ExpandingAndNeutralEntries) {
  const auto e = catalog_entry("affine-expanding");
  const auto curve = displacement_curve(CurveSource::RootTracking, e.family, e.target, dyadic_grid(1e-6, 1e-2));
  for (const auto& smp : curve.samples) EXPECT_NEAR(smp.d, smp.s, 1e-12);

  const auto n = catalog_entry("neutral");
  EXPECT_FALSE(n.expected_alpha.has_value());
  const auto none = displacement_curve(CurveSource::RootTracking, n.family, n.target, dyadic_grid(1e-6, 1e-2));
  EXPECT_TRUE(none.samples.empty());
}

TEST(DisplacementCurve, GridIsValidated) {
  const auto e = catalog_entry("quadratic");
  EXPECT_THROW(displacement_curve(CurveSource::RootTracking, e.family, e.target, std::vector<double>{}),
               ValidationError);
  EXPECT_THROW(displacement_curve(CurveSource::RootTracking, e.family, e.target, std::vector<double>{1e-20}),
               ValidationError);
}

TEST(Catalog, Contents) {
  const auto lib = example_library();
  ASSERT_EQ(lib.size(), 6u);
  EXPECT_EQ(lib.front().name, "quadratic");
  EXPECT_THROW(catalog_entry("no-such-family"), ValidationError);
  const auto t = catalog_entry("tanh-contracting");
  const auto curve = displacement_curve(CurveSource::Continuation, t.family, t.target, dyadic_grid(1e-6, 1e-3));
  EXPECT_NEAR(fit_holder(curve).alpha, *t.expected_alpha, 0.01);
}
