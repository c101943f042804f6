#include "shockrel/series.hpp"

#include <cmath>
#include <string>

#include "shockrel/error.hpp"

namespace shockrel {

namespace {

constexpr int kMaxTerms = 10000;

double log_poisson_pmf(double mean, int n) {
  return -mean + n * std::log(mean) - std::lgamma(n + 1.0);
}

}  // namespace

bool series_supported(const ModelSpec& spec) {
  return spec.increments.structure() == IncrementLaw::Structure::kIndependent;
}

double series_term_independent(const ModelSpec& spec, double t, double L, int n,
                               const QuadratureConfig& cfg) {
  if (!series_supported(spec))
    throw CapabilityError(
        "series expansion needs independent increments; use the Laplace or MC2 method");
  if (n < 0) throw DomainError("series term index must be >= 0");
  const DegradationLaw& g = spec.degradation;
  if (n == 0) return g.cdf(t, L);

  const MarginalLaw& v2 = spec.increments.second();
  if (v2.family() == MarginalLaw::Family::kDegenerate) return g.cdf(t, L - n * v2.value());

  // sum of n i.i.d. Gamma(k, theta) is Gamma(n k, theta)
  const double shape = n * v2.shape();
  const double rate = v2.rate();
  switch (g.family()) {
    case DegradationLaw::Family::kNone:
      return L < 0.0 ? 0.0 : regularized_lower_gamma(shape, rate * L);
    case DegradationLaw::Family::kDrift: {
      const double room = L - g.rate() * t;
      return room < 0.0 ? 0.0 : regularized_lower_gamma(shape, rate * room);
    }
    case DegradationLaw::Family::kGamma:
      if (L <= 0.0) return 0.0;
      return integrate([&](double x) { return g.cdf(t, L - x) * gamma_density(shape, rate, x); },
                       0.0, L, cfg);
  }
  return 0.0;
}

double poisson_tail(double mean, int n) {
  if (!(mean >= 0.0)) throw DomainError("poisson_tail: negative mean");
  if (n < 0) return 1.0;
  if (mean == 0.0) return 0.0;
  if (n + 1 > mean) {
    // terms decrease from n + 1 on: sum upwards
    double term = std::exp(log_poisson_pmf(mean, n + 1));
    double sum = 0.0;
    for (int k = n + 1; term > 0.0; ++k) {
      sum += term;
      if (term <= sum * 1e-17) break;
      term *= mean / (k + 1);
    }
    return sum;
  }
  // below the mode the complement is the smaller side: sum the head downwards
  double term = std::exp(log_poisson_pmf(mean, n));
  double head = 0.0;
  for (int k = n; k >= 0 && term > 0.0; --k) {
    head += term;
    if (term <= head * 1e-17) break;
    term *= k / mean;
  }
  return 1.0 - head;
}

double truncation_bound(double cumulative_intensity, double a, int n) {
  return std::exp(-(cumulative_intensity - a)) * poisson_tail(a, n);
}

SeriesResult series_partial_sum(const ModelSpec& spec, double t, double L, int n,
                                const QuadratureConfig& cfg) {
  if (!series_supported(spec))
    throw CapabilityError(
        "series expansion needs independent increments; use the Laplace or MC2 method");
  if (!(t >= 0.0)) throw DomainError("series: negative time");
  const double lambda_t = spec.intensity.cumulative(t);
  const double a = convolve_a(spec, t, cfg);
  SeriesResult out;
  out.terms_used = n;
  out.truncation_bound = truncation_bound(lambda_t, a, n);
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double weight =
        k == 0 ? std::exp(-lambda_t) : (a > 0.0 ? std::exp(-lambda_t + k * std::log(a) -
                                                           std::lgamma(k + 1.0))
                                                : 0.0);
    if (weight == 0.0 && k > 0) continue;
    sum += weight * series_term_independent(spec, t, L, k, cfg);
  }
  out.value = sum;
  return out;
}

SeriesResult series_sum(const ModelSpec& spec, double t, double L, double tol,
                        const QuadratureConfig& cfg) {
  if (!series_supported(spec))
    throw CapabilityError(
        "series expansion needs independent increments; use the Laplace or MC2 method");
  if (!(tol > 0.0)) throw InputError("series: tolerance must be > 0");
  const double lambda_t = spec.intensity.cumulative(t);
  if (!(lambda_t > 0.0)) throw DomainError("series: requires Lambda(t) > 0");
  const double a = convolve_a(spec, t, cfg);
  int n = 0;
  while (truncation_bound(lambda_t, a, n) > tol) {
    if (++n > kMaxTerms)
      throw TruncationError("series: more than " + std::to_string(kMaxTerms) +
                            " terms needed (a(t) = " + std::to_string(a) + ")");
  }
  return series_partial_sum(spec, t, L, n, cfg);
}

ReliabilityEstimate reliability_series(const ModelSpec& spec, double t, double tol) {
  const SeriesResult r = series_sum(spec, t, spec.threshold, tol);
  const double survival = std::exp(-spec.hazard.cumulative(t));
  return {t, reliability_factorization(spec, t, r.value), Method::kSeries,
          ReliabilityEstimate::Uncertainty::kBound, survival * r.truncation_bound};
}

double deterministic_increment_closed_form(double theta, double lambda, const FatalityProfile& q,
                                           double L, double t) {
  if (!(t >= 0.0)) throw DomainError("closed form: negative time");
  if (t > L) throw DomainError("closed form: holds for t <= L only");
  if (!(theta > 0.0) || !(lambda >= 0.0)) throw DomainError("closed form: bad rates");
  const double harmless_mass =
      t == 0.0 ? 0.0 : integrate([&](double s) { return q.survive(s) * lambda; }, 0.0, t);
  const double room = theta * (L - t);
  double sum = 1.0;
  if (harmless_mass > 0.0 && room > 0.0) {
    double weight = 1.0;  // A^n / n!
    for (int n = 1; n <= kMaxTerms; ++n) {
      weight *= harmless_mass / n;
      const double term = weight * regularized_lower_gamma(n, room);
      sum += term;
      if (n > harmless_mass && term <= 1e-12 * sum) break;
    }
  }
  return std::exp(-lambda * t) * sum;
}

}  // namespace shockrel
