#pragma once

#include "shockrel/model.hpp"
#include "shockrel/numerics.hpp"

namespace shockrel {

/// Truncated Poisson-mixture expansion of phi_t(L) for independent increments:
///   phi_t(L) = exp(-Lambda(t)) sum_n Q_n(t, L) a(t)^n / n!
/// with Q_n(t, L) = E[F_{G_t}(L - V2_1 - ... - V2_n)].
struct SeriesResult {
  double value = 0.0;             // partial sum phi^N
  double truncation_bound = 0.0;  // eps_N: phi^N <= phi <= phi^N + eps_N
  int terms_used = 0;             // N
};

/// True when the expansion is available: independent increments (any
/// supported V2 marginal has a closed-form n-fold convolution).
bool series_supported(const ModelSpec& spec);

/// Q_n(t, L). Throws CapabilityError for dependent increment structures.
double series_term_independent(const ModelSpec& spec, double t, double L, int n,
                               const QuadratureConfig& cfg = {});

/// P(Y > n) for Y ~ Poisson(mean).
double poisson_tail(double mean, int n);

/// eps_N = exp(-(Lambda - a)) P(Poisson(a) > N).
double truncation_bound(double cumulative_intensity, double a, int n);

/// phi^N for a caller-chosen N.
SeriesResult series_partial_sum(const ModelSpec& spec, double t, double L, int n,
                                const QuadratureConfig& cfg = {});

/// phi^N with the smallest N such that eps_N <= tol. Requires Lambda(t) > 0.
/// Throws TruncationError if N would exceed 10^4.
SeriesResult series_sum(const ModelSpec& spec, double t, double L, double tol,
                        const QuadratureConfig& cfg = {});

/// R_L(t) at the spec threshold, tagged with the truncation bound.
ReliabilityEstimate reliability_series(const ModelSpec& spec, double t, double tol = 1e-10);

/// Deterministic-boundary special case (G_t = t, h = 0, V1 = 0, V2 ~ Exp(theta),
/// constant intensity lambda):
///   exp(-lambda t) (1 + sum_{n>=1} A^n / n! P(Poisson(theta (L - t)) >= n)),
/// A = int_0^t q(s) lambda ds. Valid for t <= L only.
double deterministic_increment_closed_form(double theta, double lambda, const FatalityProfile& q,
                                           double L, double t);

}  // namespace shockrel
