#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "shockrel/error.hpp"
#include "shockrel/montecarlo.hpp"
#include "shockrel/series.hpp"

using namespace shockrel;

namespace {

ModelSpec independent_exp_spec() {
  ModelSpec s;
  s.fatality = FatalityProfile::exp_decay(1.0);
  s.increments =
      IncrementLaw::independent(MarginalLaw::exponential(1.0), MarginalLaw::exponential(1.0));
  s.threshold = 2.0;
  return s;
}

}  // namespace

TEST(RngStream, DeterministicAndDistinctStreams) {
  RngStream a(7, 0), b(7, 0), c(7, 1), d(8, 0);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
    EXPECT_NE(x, d());
  }
  RngStream u(1, 2);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.uniform_open();
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
}

TEST(McMoments, MergeMatchesSequential) {
  McMoments all, left, right;
  for (int i = 0; i < 1000; ++i) {
    const double x = std::sin(i * 0.37) * 5.0 + i * 1e-3;
    all.add(x);
    (i < 400 ? left : right).add(x);
  }
  const auto merged = McMoments::merge(left, right);
  EXPECT_EQ(merged.count, all.count);
  EXPECT_NEAR(merged.mean, all.mean, 1e-12);
  EXPECT_NEAR(merged.sample_variance(), all.sample_variance(), 1e-10);
}

TEST(ShockHistory, PoissonMean) {
  ModelSpec s;
  const auto& rec = oracle::fixture("poisson_mean");
  const auto m = run_histories(100000, 99, 0, [&](RngStream& rng) {
    return static_cast<double>(sample_shock_history(s, 1.0, rng).size());
  });
  EXPECT_NEAR(m.mean, rec.value, rec.tolerance);
}

TEST(ShockHistory, TimesSortedWithinHorizon) {
  ModelSpec s;
  s.intensity = IntensityProfile::power(2.0, 1.5);
  s.fatality = FatalityProfile::constant(0.6);
  RngStream rng(3, 0);
  ShockHistory h;
  for (int rep = 0; rep < 500; ++rep) {
    sample_shock_history(s, 2.0, rng, h);
    ASSERT_EQ(h.increments.size(), h.size());
    ASSERT_EQ(h.harmless.size(), h.size());
    ASSERT_TRUE(std::is_sorted(h.times.begin(), h.times.end()));
    for (double t : h.times) {
      ASSERT_GE(t, 0.0);
      ASSERT_LE(t, 2.0);
    }
  }
  EXPECT_THROW(sample_shock_history(s, -1.0, rng), DomainError);
}

TEST(SuddenLifetime, ExponentialWithoutShocksPassesKs) {
  const auto hazard = HazardProfile::constant(1.5);
  const ShockHistory empty;
  RngStream rng(11, 0);
  const int m = 100000;
  std::vector<double> y(m);
  for (auto& v : y) v = sample_sudden_lifetime(hazard, empty, 50.0, rng);
  std::sort(y.begin(), y.end());
  double d = 0.0;
  for (int i = 0; i < m; ++i) {
    const double f = 1.0 - std::exp(-1.5 * y[i]);
    d = std::max({d, (i + 1.0) / m - f, f - static_cast<double>(i) / m});
  }
  EXPECT_LT(d, oracle::fixture("exponential_lifetime_ks").value);
}

TEST(SuddenLifetime, SingleShockSurvival) {
  const auto& rec = oracle::fixture("single_shock_survival");
  ShockHistory h;
  h.times = {0.4};
  h.increments = {{0.7, 0.0}};
  h.harmless = {1};
  RngStream rng(5, 0);
  int survived = 0;
  const int m = 100000;
  for (int i = 0; i < m; ++i)
    if (sample_sudden_lifetime(HazardProfile::none(), h, 1.5, rng) > 1.5) ++survived;
  EXPECT_NEAR(static_cast<double>(survived) / m, rec.value, rec.tolerance);
}

TEST(SuddenLifetime, PowerHazardInversion) {
  const auto hazard = HazardProfile::power(1.0, 2.0);  // H(t) = t^2 / 2
  ShockHistory h;
  h.times = {0.5, 1.0};
  h.increments = {{0.3, 0.0}, {0.8, 0.0}};
  h.harmless = {1, 1};
  RngStream rng(17, 0);
  const double t = 2.0;
  const double total = hazard.cumulative(t) + 0.3 * 1.5 + 0.8 * 1.0;
  int survived = 0;
  const int m = 100000;
  for (int i = 0; i < m; ++i) {
    const double y = sample_sudden_lifetime(hazard, h, t, rng);
    if (y > t) ++survived;
    else ASSERT_GE(y, 0.0);
  }
  const double p = std::exp(-total);
  EXPECT_NEAR(static_cast<double>(survived) / m, p, 3.0 * std::sqrt(p * (1 - p) / m));
}

TEST(Mc, AllShocksFatal) {
  ModelSpec s;
  s.fatality = FatalityProfile::constant(0.0);
  s.threshold = 5.0;
  const double exact = oracle::fixture("all_shocks_fatal").value;
  const auto r1 = estimate_reliability_mc1(s, 1.0);
  const auto r2 = estimate_phi_mc2(s, 1.0);
  EXPECT_NEAR(r1.estimate, exact, r1.half_width95 * 1.5);
  EXPECT_NEAR(r2.estimate, exact, r2.half_width95 * 1.5);
}

TEST(Mc, NoShocksGivesZeroVariance) {
  ModelSpec s;
  s.intensity = IntensityProfile::constant(0.0);
  s.threshold = 1.0;
  const auto r = estimate_phi_mc2(s, 3.0);
  EXPECT_EQ(r.estimate, 1.0);
  EXPECT_EQ(r.half_width95, 0.0);
}

TEST(Mc, BitIdenticalAcrossWorkerCounts) {
  const auto s = independent_exp_spec();
  McConfig one{20000, 42, 1};
  McConfig many{20000, 42, 8};
  const auto a1 = estimate_reliability_mc1(s, 1.0, one);
  const auto b1 = estimate_reliability_mc1(s, 1.0, many);
  EXPECT_EQ(a1.estimate, b1.estimate);
  EXPECT_EQ(a1.half_width95, b1.half_width95);
  const auto a2 = estimate_phi_mc2(s, 1.0, one);
  const auto b2 = estimate_phi_mc2(s, 1.0, many);
  EXPECT_EQ(a2.estimate, b2.estimate);
  EXPECT_EQ(a2.half_width95, b2.half_width95);
}

TEST(Mc, SeedChangesResult) {
  const auto s = independent_exp_spec();
  const auto a = estimate_phi_mc2(s, 1.0, {5000, 1, 0});
  const auto b = estimate_phi_mc2(s, 1.0, {5000, 2, 0});
  EXPECT_NE(a.estimate, b.estimate);
  EXPECT_EQ(a.seed, 1u);
}

TEST(Mc, Mc1AndMc2AgreeAndMc2IsTighter) {
  const auto s = independent_exp_spec();
  const auto exact = oracle::fixture("independent_exp_t1").value;
  const auto r1 = reliability_mc1(s, 1.0);
  const auto r2 = reliability_mc2(s, 1.0);
  EXPECT_LE(std::abs(r1.value - r2.value), 3.0 * std::hypot(r1.amount, r2.amount) / 1.96);
  EXPECT_LE(r2.amount, r1.amount);
  EXPECT_LE(std::abs(r1.value - exact), r1.amount * 1.5);
  EXPECT_LE(std::abs(r2.value - exact), r2.amount * 1.5);
  EXPECT_EQ(r1.uncertainty, ReliabilityEstimate::Uncertainty::kCi95);
  EXPECT_EQ(r2.method, Method::kMc2);
}

TEST(Mc, Mc2WithinSeriesBounds) {
  auto s = independent_exp_spec();
  s.increments = IncrementLaw::independent(MarginalLaw::gamma(2.0, 2.0),
                                           MarginalLaw::gamma(0.5, 0.5));
  s.intensity = IntensityProfile::power(1.0, 2.0);
  const auto ser = series_sum(s, 1.2, s.threshold, 1e-10);
  const auto mc = estimate_phi_mc2(s, 1.2);
  EXPECT_GE(mc.estimate + mc.half_width95 * 1.5, ser.value);
  EXPECT_LE(mc.estimate - mc.half_width95 * 1.5, ser.value + ser.truncation_bound);
}

TEST(Mc, DegradationAndHazardReduceReliability) {
  auto s = independent_exp_spec();
  const double base = reliability_mc2(s, 1.0).value;
  s.hazard = HazardProfile::constant(0.2);
  s.degradation = DegradationLaw::gamma(1.0, 1.0);
  const auto r = reliability_mc2(s, 1.0);
  EXPECT_LT(r.value, base);
  EXPECT_GE(r.lower_clipped(), 0.0);
}

TEST(Mc, TooFewHistories) {
  const auto s = independent_exp_spec();
  EXPECT_THROW(estimate_reliability_mc1(s, 1.0, {99, 1, 0}), InputError);
  EXPECT_THROW(estimate_phi_mc2(s, 1.0, {10, 1, 0}), InputError);
}
