#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace shockrel {

struct ModelSpec;

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 1 << 15;
};

/// Globally adaptive 21-point Gauss-Kronrod quadrature of f over [a, b].
///
/// Integrand singularities are tolerated at the endpoints since Kronrod
/// nodes never touch them. Throws ConvergenceError (carrying the best
/// estimate) when the subdivision budget is exhausted.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& cfg = {});

/// Same as above, split at interior breakpoints (kinks of tabulated data).
double integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                 const QuadratureConfig& cfg = {});

/// Complex integrand: real and imaginary parts share one subdivision tree.
std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f, double a,
                               double b, const QuadratureConfig& cfg = {});

/// a(t) = int_0^t mu1~(z) q(t - z) lambda(t - z) dz, with mu1~ the Laplace
/// transform of the V1 law.
double convolve_a(const ModelSpec& spec, double t, const QuadratureConfig& cfg = {});

/// Shock times w in [0, t] where the integrand of a time convolution
/// has kinks (knots of tabulated profiles), including both ends.
std::vector<double> convolution_breakpoints(const ModelSpec& spec, double t);

/// x in [lo, hi] with g(x) = y for a non-decreasing g, to
/// |g(x) - y| <= 1e-12 max(1, |y|) (or bracket width at machine precision
/// where g is flat or jumps). Throws BracketError if y is not in [g(lo), g(hi)].
double invert_monotone(const std::function<double(double)>& g, double y, double lo, double hi);

/// Regularized lower incomplete gamma P(a, x).
double regularized_lower_gamma(double a, double x);
/// Q(a, x) = 1 - P(a, x), computed without cancellation.
double regularized_upper_gamma(double a, double x);

/// Density of Gamma(shape, rate) at x.
double gamma_density(double shape, double rate, double x);

struct InversionConfig {
  enum class Algorithm { kFixedTalbot, kEulerSummation };

  Algorithm algorithm = Algorithm::kFixedTalbot;
  int talbot_nodes = 32;
  int euler_terms = 40;
};

/// Numerical inverse Laplace transform of F at abscissa x > 0.
///
/// Fixed Talbot (Abate-Valko) for originals that are smooth on (0, inf);
/// Abate-Whitt Euler summation of the Bromwich integral for originals with
/// jumps at positive abscissae (binomial averaging over 60 partial sums; the
/// 1e-4 class holds at least 0.3 x away from any jump). Throws InversionError
/// on non-finite values.
double laplace_invert(const std::function<std::complex<double>(std::complex<double>)>& F,
                      double x, const InversionConfig& cfg = {});

/// Nominal accuracy of each inversion algorithm for well-behaved originals.
double inversion_accuracy(InversionConfig::Algorithm algorithm);

}  // namespace shockrel
