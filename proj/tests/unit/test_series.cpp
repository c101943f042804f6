#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "shockrel/error.hpp"
#include "shockrel/laplace.hpp"
#include "shockrel/montecarlo.hpp"
#include "shockrel/series.hpp"

using namespace shockrel;

namespace {

ModelSpec boundary_case(double theta, double lambda, double q, double L) {
  ModelSpec s;
  s.intensity = IntensityProfile::constant(lambda);
  s.fatality = FatalityProfile::constant(q);
  s.degradation = DegradationLaw::drift(1.0);
  s.increments =
      IncrementLaw::independent(MarginalLaw::degenerate(0.0), MarginalLaw::exponential(theta));
  s.threshold = L;
  return s;
}

MarginalLaw random_marginal(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0.3, 3.0);
  switch (g() % 3) {
    case 0: return MarginalLaw::degenerate(u(g) * 0.5);
    case 1: return MarginalLaw::exponential(u(g));
    default: return MarginalLaw::gamma(u(g), u(g));
  }
}

ModelSpec random_independent_spec(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0.2, 2.0);
  ModelSpec s;
  switch (g() % 3) {
    case 0: s.intensity = IntensityProfile::constant(u(g)); break;
    case 1: s.intensity = IntensityProfile::power(u(g), u(g)); break;
    default: s.intensity = IntensityProfile::tabulated({{0, u(g)}, {1, u(g)}, {3, u(g)}});
  }
  switch (g() % 3) {
    case 0: s.fatality = FatalityProfile::constant(std::uniform_real_distribution<>(0, 1)(g)); break;
    case 1: s.fatality = FatalityProfile::exp_decay(u(g)); break;
    default: s.fatality = FatalityProfile::tabulated({{0, 0.9}, {1, 0.3}, {2, 0.7}});
  }
  switch (g() % 3) {
    case 0: s.degradation = DegradationLaw::none(); break;
    case 1: s.degradation = DegradationLaw::drift(u(g) * 0.5); break;
    default: s.degradation = DegradationLaw::gamma(u(g), u(g) + 1.0);
  }
  s.increments = IncrementLaw::independent(random_marginal(g), random_marginal(g));
  s.threshold = 1.0 + 3.0 * std::uniform_real_distribution<>(0, 1)(g);
  return s;
}

}  // namespace

TEST(Series, PoissonTailAgainstOracle) {
  for (double mean : {0.01, 0.5, 1.0, 3.7, 12.0, 40.0}) {
    for (int n : {0, 1, 2, 5, 10, 20, 60}) {
      EXPECT_NEAR(poisson_tail(mean, n), oracle::poisson_upper_tail(mean, n), 1e-14)
          << "mean=" << mean << " n=" << n;
      EXPECT_GE(poisson_tail(mean, n), 0.0);
    }
  }
  EXPECT_NEAR(truncation_bound(2.0, 0.5, 3),
              std::exp(-1.5) * oracle::poisson_upper_tail(0.5, 3), 1e-14);
}

TEST(Series, FirstTermExponential) {
  ModelSpec s;
  s.increments =
      IncrementLaw::independent(MarginalLaw::degenerate(0.0), MarginalLaw::exponential(1.0));
  s.threshold = 2.0;
  const auto& rec = oracle::fixture("series_term_exp1");
  EXPECT_NEAR(series_term_independent(s, 1.0, 2.0, 1), rec.value, rec.tolerance);
  EXPECT_EQ(series_term_independent(s, 1.0, 2.0, 0), 1.0);
  EXPECT_EQ(series_term_independent(s, 1.0, -0.5, 0), 0.0);
}

TEST(Series, TermsNonIncreasingInN) {
  std::mt19937_64 g(2024);
  for (int rep = 0; rep < 10; ++rep) {
    const auto s = random_independent_spec(g);
    double prev = 1.0;
    for (int n = 0; n < 15; ++n) {
      const double q = series_term_independent(s, 1.0, s.threshold, n);
      EXPECT_LE(q, prev + 1e-10);
      EXPECT_GE(q, -1e-12);
      prev = q;
    }
  }
}

TEST(Series, AllFatalReducesToNoShockProbability) {
  ModelSpec s;
  s.fatality = FatalityProfile::constant(0.0);
  s.increments =
      IncrementLaw::independent(MarginalLaw::exponential(1.0), MarginalLaw::exponential(1.0));
  s.threshold = 2.0;
  const auto r = series_sum(s, 1.0, 2.0, 1e-12);
  EXPECT_NEAR(r.value, std::exp(-1.0), 1e-14);
  EXPECT_EQ(r.terms_used, 0);
}

TEST(Series, ExponentialIndependentAgainstOracle) {
  ModelSpec s;
  s.fatality = FatalityProfile::exp_decay(1.0);
  s.increments =
      IncrementLaw::independent(MarginalLaw::exponential(1.0), MarginalLaw::exponential(1.0));
  s.threshold = 2.0;
  const auto& rec = oracle::fixture("independent_exp_t1");
  const auto r = reliability_series(s, 1.0);
  EXPECT_NEAR(r.value, rec.value, rec.tolerance + r.amount);
  EXPECT_EQ(r.uncertainty, ReliabilityEstimate::Uncertainty::kBound);
}

TEST(Series, TruncationBoundHoldsOnRandomConfigs) {
  std::mt19937_64 g(777);
  for (int rep = 0; rep < 20; ++rep) {
    const auto s = random_independent_spec(g);
    const double t = std::uniform_real_distribution<>(0.2, 2.5)(g);
    const auto full = series_sum(s, t, s.threshold, 1e-14);
    for (int n : {0, 1, 2, 4}) {
      const auto part = series_partial_sum(s, t, s.threshold, n);
      EXPECT_LE(part.value, full.value + 1e-12) << "rep=" << rep << " n=" << n;
      EXPECT_GE(part.value + part.truncation_bound, full.value - 1e-12)
          << "rep=" << rep << " n=" << n;
      EXPECT_EQ(part.terms_used, n);
    }
    const auto tol = series_sum(s, t, s.threshold, 1e-8);
    EXPECT_LE(tol.truncation_bound, 1e-8);
    EXPECT_NEAR(tol.value, full.value, 1e-8 + 1e-12);
  }
}

TEST(Series, BoundaryCaseAgainstDoubleSeries) {
  const auto& rec = oracle::fixture("double_series_series_sum");
  const auto s = boundary_case(1.0, 1.0, 0.5, 2.0);
  const auto r = series_sum(s, 1.0, 2.0, 1e-12);
  EXPECT_NEAR(r.value, rec.value, rec.tolerance);
  const auto& closed = oracle::fixture("double_series_closed_form");
  EXPECT_NEAR(
      deterministic_increment_closed_form(1.0, 1.0, FatalityProfile::constant(0.5), 2.0, 1.0),
      closed.value, closed.tolerance);
}

TEST(Series, BoundaryCaseClosedFormOnGrid) {
  for (double t : {0.1, 0.5, 1.0, 1.8}) {
    for (double q : {0.0, 0.3, 1.0}) {
      const double direct = oracle::deterministic_increment_double_series(1.5, 2.0, q, 2.0, t);
      EXPECT_NEAR(
          deterministic_increment_closed_form(1.5, 2.0, FatalityProfile::constant(q), 2.0, t),
          direct, 1e-10)
          << "t=" << t << " q=" << q;
      EXPECT_NEAR(series_sum(boundary_case(1.5, 2.0, q, 2.0), t, 2.0, 1e-12).value, direct, 1e-9);
    }
  }
  EXPECT_THROW(
      deterministic_increment_closed_form(1.0, 1.0, FatalityProfile::constant(0.5), 2.0, 2.5),
      DomainError);
}

TEST(Series, Errors) {
  ModelSpec s;
  s.intensity = IntensityProfile::constant(20000.0);
  s.threshold = 1.0;
  EXPECT_THROW(series_sum(s, 1.0, 1.0, 1e-10), TruncationError);

  ModelSpec dep;
  dep.increments = IncrementLaw::complete_dependence(MarginalLaw::exponential(1.0));
  dep.threshold = 1.0;
  EXPECT_FALSE(series_supported(dep));
  EXPECT_THROW(series_sum(dep, 1.0, 1.0, 1e-10), CapabilityError);
  EXPECT_THROW(series_term_independent(dep, 1.0, 1.0, 1), CapabilityError);

  ModelSpec quiet;
  quiet.intensity = IntensityProfile::constant(0.0);
  EXPECT_THROW(series_sum(quiet, 1.0, 1.0, 1e-10), DomainError);
  EXPECT_THROW(series_sum(boundary_case(1, 1, 1, 1), 1.0, 1.0, 0.0), InputError);
}

TEST(Series, MatchesLaplaceOnIndependentConfigs) {
  std::mt19937_64 g(31337);
  for (int rep = 0; rep < 12; ++rep) {
    const auto s = random_independent_spec(g);
    const double t = std::uniform_real_distribution<>(0.2, 2.0)(g);
    const double ser = series_sum(s, t, s.threshold, 1e-12).value;
    const double lap = phi_laplace(s, t, s.threshold);
    const double tol = std::max(1e-6, inversion_accuracy(choose_inversion(s, t).algorithm));
    EXPECT_NEAR(ser, lap, tol) << "rep=" << rep << " t=" << t;
  }
}

TEST(Series, Mc2InsideBounds) {
  std::mt19937_64 g(4242);
  for (int rep = 0; rep < 4; ++rep) {
    const auto s = random_independent_spec(g);
    const auto ser = series_sum(s, 1.0, s.threshold, 1e-10);
    const auto mc = estimate_phi_mc2(s, 1.0, {100000, 20140831, 0});
    const double slack = 1.5 * mc.half_width95;
    EXPECT_LE(ser.value - slack, mc.estimate) << "rep=" << rep;
    EXPECT_GE(ser.value + ser.truncation_bound + slack, mc.estimate) << "rep=" << rep;
  }
}
