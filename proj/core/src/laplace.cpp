#include "shockrel/laplace.hpp"

#include <algorithm>
#include <cmath>

#include "shockrel/error.hpp"

namespace shockrel {

namespace {

constexpr double kJumpGuard = 1e-9;
constexpr double kAtomExpansionAccuracy = 1e-8;

// Spacing of the atoms of the V2 sum when V2 is degenerate, else 0.
double atom_spacing(const IncrementLaw& inc) {
  if (!inc.second_has_positive_atom()) return 0.0;
  if (inc.structure() == IncrementLaw::Structure::kAdditive)
    return inc.first().value() + inc.second().value();
  return inc.second().value();
}

}  // namespace

NuTransform::NuTransform(const ModelSpec& spec, double t, const QuadratureConfig& cfg)
    : spec_(&spec), t_(t), cfg_(cfg) {
  if (!(t >= 0.0)) throw DomainError("nu transform: negative time");
  cumulative_intensity_ = spec.intensity.cumulative(t);
  if (spec.increments.structure() == IncrementLaw::Structure::kIndependent)
    a_ = convolve_a(spec, t, cfg);
  else
    breakpoints_ = convolution_breakpoints(spec, t);
}

std::complex<double> NuTransform::operator()(std::complex<double> s) const {
  return std::exp(exponent(s));
}

std::complex<double> NuTransform::exponent(std::complex<double> s) const {
  if (t_ == 0.0) return 0.0;
  const IncrementLaw& inc = spec_->increments;
  if (inc.structure() == IncrementLaw::Structure::kIndependent)
    return -cumulative_intensity_ + a_ * inc.transform_second(s);

  std::complex<double> conv = 0.0;
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    conv += integrate_complex(
        [&](double w) {
          return spec_->fatality.survive(w) * spec_->intensity.rate(w) * inc.transform(t_ - w, s);
        },
        breakpoints_[i - 1], breakpoints_[i], cfg_);
  }
  return -cumulative_intensity_ + conv;
}

std::complex<double> nu_transform(const ModelSpec& spec, double t, std::complex<double> s,
                                  const QuadratureConfig& cfg) {
  return NuTransform(spec, t, cfg)(s);
}

std::complex<double> degradation_transform(const DegradationLaw& d, double t,
                                           std::complex<double> s) {
  return d.cdf_transform(t, s);
}

InversionConfig choose_inversion(const ModelSpec& spec, double t) {
  InversionConfig cfg;
  const bool smooth_degradation =
      spec.degradation.family() == DegradationLaw::Family::kGamma && t > 0.0;
  if (!smooth_degradation && spec.increments.second_has_positive_atom() &&
      spec.intensity.cumulative(t) > 0.0)
    cfg.algorithm = InversionConfig::Algorithm::kEulerSummation;
  return cfg;
}

bool has_atom_expansion(const ModelSpec& spec) { return atom_spacing(spec.increments) > 0.0; }

double phi_atom_expansion(const ModelSpec& spec, double t, double L) {
  const double d = atom_spacing(spec.increments);
  if (!(d > 0.0)) throw CapabilityError("atom expansion needs a degenerate positive V2");
  // nu~_t(s) = exp(-Lambda + b e^{-s d}); each power inverts by the shift theorem
  const NuTransform nu(spec, t);
  const double log_floor = -spec.intensity.cumulative(t);
  const double b = std::real(nu.exponent(0.0)) - log_floor;
  double phi = 0.0;
  for (long n = 0; L - static_cast<double>(n) * d >= 0.0; ++n) {
    const double dn = static_cast<double>(n);
    if (n > 0 && b <= 0.0) break;
    const double log_w = log_floor + (n > 0 ? dn * std::log(b) : 0.0) - std::lgamma(dn + 1.0);
    if (dn > b && log_w < -745.0) break;
    phi += std::exp(log_w) * spec.degradation.cdf(t, L - dn * d);
  }
  return std::clamp(phi, 0.0, 1.0);
}

double phi_laplace(const ModelSpec& spec, double t, double L,
                   const std::optional<InversionConfig>& cfg) {
  if (!(L > 0.0)) throw DomainError("Laplace method: threshold must be > 0");
  if (!cfg && has_atom_expansion(spec)) return phi_atom_expansion(spec, t, L);
  const InversionConfig inv = cfg.value_or(choose_inversion(spec, t));
  const NuTransform nu(spec, t);

  // A drift G_t = c t only shifts the original: phi_t(L) = nu_t([0, L - c t]).
  const bool drift = spec.degradation.family() == DegradationLaw::Family::kDrift;
  double x = L - spec.degradation.jump_location(t);
  if (x < 0.0) return 0.0;
  if (x == 0.0) x = kJumpGuard;
  if (const double spacing = atom_spacing(spec.increments);
      spacing > 0.0 && !(spec.degradation.family() == DegradationLaw::Family::kGamma && t > 0.0)) {
    const double k = std::round(x / spacing);
    if (std::abs(x - k * spacing) < kJumpGuard) x = k * spacing + kJumpGuard;
  }

  const auto transform = [&](std::complex<double> s) -> std::complex<double> {
    const std::complex<double> g = drift ? 1.0 / s : spec.degradation.cdf_transform(t, s);
    return g * nu(s);
  };
  const double phi = laplace_invert(transform, x, inv);
  const double slack = inversion_accuracy(inv.algorithm);
  if (phi < -slack || phi > 1.0 + slack)
    throw InversionError("Laplace method: inverted phi = " + std::to_string(phi) +
                         " is not a probability");
  // values within the accuracy class of [0, 1] are snapped onto it
  return std::clamp(phi, 0.0, 1.0);
}

ReliabilityEstimate reliability_laplace(const ModelSpec& spec, double t, double L,
                                        const std::optional<InversionConfig>& cfg) {
  const double phi = phi_laplace(spec, t, L, cfg);
  const double accuracy =
      cfg ? inversion_accuracy(cfg->algorithm)
          : has_atom_expansion(spec)
                ? kAtomExpansionAccuracy
                : inversion_accuracy(choose_inversion(spec, t).algorithm);
  return {t, reliability_factorization(spec, t, phi), Method::kLaplace,
          ReliabilityEstimate::Uncertainty::kExactToTol, accuracy};
}

double complete_dependence_closed_form(double theta, double lambda, double q, double L, double t) {
  if (!(theta > 0.0) || !(lambda >= 0.0) || !(q >= 0.0 && q <= 1.0) || !(L >= 0.0))
    throw DomainError("complete dependence closed form: bad parameters");
  if (!(t >= 0.0)) throw DomainError("complete dependence closed form: negative time");
  if (!(t < theta)) throw DomainError("complete dependence closed form: requires t < theta");

  const double c = q * lambda * theta;
  const double ratio = t / theta;
  double sum = 1.0;
  if (c != 0.0 && t > 0.0 && L > 0.0) {
    // binom(c, n) kept as sign * exp(log_mag)
    double log_mag = 0.0;
    double sign = 1.0;
    int small_in_a_row = 0;
    for (int n = 1; n <= 1000000; ++n) {
      const double factor = (c - n + 1) / n;
      if (factor == 0.0) break;  // c is a non-negative integer: finite sum
      log_mag += std::log(std::abs(factor));
      if (factor < 0.0) sign = -sign;
      const double term =
          sign * std::exp(log_mag + n * std::log(ratio)) * regularized_lower_gamma(n, theta * L);
      sum += term;
      small_in_a_row = std::abs(term) < 1e-14 * std::abs(sum) ? small_in_a_row + 1 : 0;
      if (small_in_a_row >= 2) break;
    }
  }
  return std::exp(-lambda * t) * sum;
}

}  // namespace shockrel
