#pragma once

#include <complex>
#include <optional>

#include "shockrel/model.hpp"
#include "shockrel/numerics.hpp"

namespace shockrel {

/// s -> nu~_t(s) = exp(-Lambda(t) + int_0^t q(w) lambda(w) mu~(t - w, s) dw),
/// the transform (in the threshold variable) of the shock-environment measure.
/// Lambda(t) and, for independent increments, a(t) are computed once.
class NuTransform {
 public:
  NuTransform(const ModelSpec& spec, double t, const QuadratureConfig& cfg = {});

  std::complex<double> operator()(std::complex<double> s) const;
  /// log nu~_t(s).
  std::complex<double> exponent(std::complex<double> s) const;

 private:
  const ModelSpec* spec_;
  double t_;
  QuadratureConfig cfg_;
  double cumulative_intensity_;
  double a_ = 0.0;  // independent case only
  std::vector<double> breakpoints_;
};

std::complex<double> nu_transform(const ModelSpec& spec, double t, std::complex<double> s,
                                  const QuadratureConfig& cfg = {});

/// Laplace transform of x -> F_{G_t}(x), analytically continued off the
/// real axis. Throws DomainError at s = 0.
std::complex<double> degradation_transform(const DegradationLaw& d, double t,
                                           std::complex<double> s);

/// Numerical inversion algorithm suited to phi_t(.) for this spec: Euler
/// summation when the original can jump at a positive threshold, fixed Talbot
/// otherwise.
InversionConfig choose_inversion(const ModelSpec& spec, double t);

/// True when V2 is degenerate at d > 0. Then nu~_t(s) = exp(-Lambda + b e^{-s d}) and
/// expanding the exponential inverts term by term via the shift theorem:
///   phi_t(L) = e^{-Lambda} sum_{n <= L/d} b^n / n! F_{G_t}(L - n d).
bool has_atom_expansion(const ModelSpec& spec);
double phi_atom_expansion(const ModelSpec& spec, double t, double L);

/// phi_t(L) from F~_{G_t}(s) nu~_t(s). Requires L > 0. Without an explicit
/// config, degenerate V2 uses the atom expansion and everything else fixed Talbot.
double phi_laplace(const ModelSpec& spec, double t, double L,
                   const std::optional<InversionConfig>& cfg = std::nullopt);

/// R_L(t) at threshold L, tagged with the accuracy class of the inversion used.
ReliabilityEstimate reliability_laplace(const ModelSpec& spec, double t, double L,
                                        const std::optional<InversionConfig>& cfg = std::nullopt);

/// Exact reliability for h = 0, G = 0, constant lambda and q, V1 = V2 ~ Exp(theta):
///   exp(-lambda t) (1 + sum_{n>=1} binom(c, n) (t/theta)^n F_{n,theta}(L)),
/// c = q lambda theta, F_{n,theta} the Gamma(n, theta) cdf. Needs t < theta.
double complete_dependence_closed_form(double theta, double lambda, double q, double L, double t);

}  // namespace shockrel
