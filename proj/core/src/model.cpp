#include "shockrel/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "shockrel/error.hpp"
#include "shockrel/numerics.hpp"
#include "shockrel/rng.hpp"

namespace shockrel {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

void require_time(double t, const char* op) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw DomainError(std::string(op) + ": time must be finite and non-negative, got " +
                      std::to_string(t));
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }
bool finite_pos(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

// ---------------------------------------------------------------------------
// PiecewiseLinear

PiecewiseLinear::PiecewiseLinear(std::vector<Knot> knots) : knots_(std::move(knots)) {
  require(!knots_.empty(), "tabulated profile needs at least one knot");
  require(knots_.front().t == 0.0, "tabulated profile must start at t = 0");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    require(std::isfinite(knots_[i].t) && std::isfinite(knots_[i].value),
            "tabulated profile has a non-finite knot");
    if (i > 0)
      require(knots_[i].t > knots_[i - 1].t, "tabulated knots must be strictly increasing in t");
  }
  cumulative_.resize(knots_.size(), 0.0);
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    const double dt = knots_[i].t - knots_[i - 1].t;
    cumulative_[i] = cumulative_[i - 1] + 0.5 * dt * (knots_[i].value + knots_[i - 1].value);
  }
}

double PiecewiseLinear::value(double t) const {
  if (t >= knots_.back().t) return knots_.back().value;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                             [](double x, const Knot& k) { return x < k.t; });
  const Knot& hi = *it;
  const Knot& lo = *(it - 1);
  const double w = (t - lo.t) / (hi.t - lo.t);
  return lo.value + w * (hi.value - lo.value);
}

double PiecewiseLinear::integral(double t) const {
  if (t >= knots_.back().t)
    return cumulative_.back() + (t - knots_.back().t) * knots_.back().value;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                             [](double x, const Knot& k) { return x < k.t; });
  const std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
  return cumulative_[i] + 0.5 * (t - knots_[i].t) * (knots_[i].value + value(t));
}

bool PiecewiseLinear::is_non_decreasing() const {
  return std::is_sorted(knots_.begin(), knots_.end(),
                        [](const Knot& a, const Knot& b) { return a.value < b.value; });
}

bool PiecewiseLinear::is_non_increasing() const {
  return std::is_sorted(knots_.begin(), knots_.end(),
                        [](const Knot& a, const Knot& b) { return a.value > b.value; });
}

// ---------------------------------------------------------------------------
// IntensityProfile

IntensityProfile IntensityProfile::constant(double rate) {
  require(finite_nonneg(rate), "constant intensity must be finite and >= 0");
  IntensityProfile p;
  p.family_ = Family::kConstant;
  p.alpha_ = rate;
  return p;
}

IntensityProfile IntensityProfile::power(double alpha, double beta) {
  require(finite_nonneg(alpha), "power intensity alpha must be finite and >= 0");
  require(finite_pos(beta), "power intensity beta must be finite and > 0");
  IntensityProfile p;
  p.family_ = Family::kPower;
  p.alpha_ = alpha;
  p.beta_ = beta;
  return p;
}

IntensityProfile IntensityProfile::tabulated(std::vector<Knot> knots) {
  IntensityProfile p;
  p.family_ = Family::kTabulated;
  p.table_ = PiecewiseLinear(std::move(knots));
  for (const auto& k : p.table_.knots()) require(k.value >= 0.0, "intensity knots must be >= 0");
  return p;
}

double IntensityProfile::rate(double t) const {
  require_time(t, "intensity");
  switch (family_) {
    case Family::kConstant:
      return alpha_;
    case Family::kPower:
      if (t == 0.0) return beta_ < 1.0 ? HUGE_VAL : (beta_ == 1.0 ? alpha_ : 0.0);
      return alpha_ * beta_ * std::pow(t, beta_ - 1.0);
    case Family::kTabulated:
      return table_.value(t);
  }
  return 0.0;
}

double IntensityProfile::cumulative(double t) const {
  require_time(t, "cumulative intensity");
  switch (family_) {
    case Family::kConstant:
      return alpha_ * t;
    case Family::kPower:
      return alpha_ * std::pow(t, beta_);
    case Family::kTabulated:
      return table_.integral(t);
  }
  return 0.0;
}

double IntensityProfile::inverse_cumulative(double y, double horizon) const {
  switch (family_) {
    case Family::kConstant:
      return std::min(y / alpha_, horizon);
    case Family::kPower:
      return std::min(std::pow(y / alpha_, 1.0 / beta_), horizon);
    case Family::kTabulated:
      return invert_monotone([this](double x) { return table_.integral(x); }, y, 0.0, horizon);
  }
  return 0.0;
}

bool IntensityProfile::is_super_additive() const {
  switch (family_) {
    case Family::kConstant:
      return true;
    case Family::kPower:
      return beta_ >= 1.0 || alpha_ == 0.0;
    case Family::kTabulated:
      // convex Lambda with Lambda(0) = 0 is super-additive
      return table_.is_non_decreasing();
  }
  return false;
}

std::string to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::kConstant:
      return "constant";
    case Monotonicity::kNonIncreasing:
      return "non-increasing";
    case Monotonicity::kNonDecreasing:
      return "non-decreasing";
    case Monotonicity::kNeither:
      return "neither";
  }
  return "neither";
}

// ---------------------------------------------------------------------------
// FatalityProfile

FatalityProfile FatalityProfile::constant(double q) {
  require(std::isfinite(q) && q >= 0.0 && q <= 1.0, "constant q must lie in [0, 1]");
  FatalityProfile p;
  p.family_ = Family::kConstant;
  p.param_ = q;
  return p;
}

FatalityProfile FatalityProfile::exp_decay(double a) {
  require(finite_nonneg(a), "expDecay rate must be finite and >= 0");
  FatalityProfile p;
  p.family_ = Family::kExpDecay;
  p.param_ = a;
  return p;
}

FatalityProfile FatalityProfile::exp_growth(double a) {
  require(finite_nonneg(a), "expGrowth rate must be finite and >= 0");
  FatalityProfile p;
  p.family_ = Family::kExpGrowth;
  p.param_ = a;
  return p;
}

FatalityProfile FatalityProfile::tabulated(std::vector<Knot> knots) {
  FatalityProfile p;
  p.family_ = Family::kTabulated;
  p.table_ = PiecewiseLinear(std::move(knots));
  for (const auto& k : p.table_.knots())
    require(k.value >= 0.0 && k.value <= 1.0,
            "fatality knot value " + std::to_string(k.value) + " at t = " +
                std::to_string(k.t) + " is outside [0, 1]");
  return p;
}

double FatalityProfile::survive(double t) const {
  switch (family_) {
    case Family::kConstant:
      return param_;
    case Family::kExpDecay:
      return std::exp(-param_ * t);
    case Family::kExpGrowth:
      return -std::expm1(-param_ * t);
    case Family::kTabulated:
      return table_.value(t);
  }
  return 0.0;
}

Monotonicity FatalityProfile::monotonicity() const {
  switch (family_) {
    case Family::kConstant:
      return Monotonicity::kConstant;
    case Family::kExpDecay:
      return param_ == 0.0 ? Monotonicity::kConstant : Monotonicity::kNonIncreasing;
    case Family::kExpGrowth:
      return param_ == 0.0 ? Monotonicity::kConstant : Monotonicity::kNonDecreasing;
    case Family::kTabulated: {
      const bool up = table_.is_non_decreasing();
      const bool down = table_.is_non_increasing();
      if (up && down) return Monotonicity::kConstant;
      if (up) return Monotonicity::kNonDecreasing;
      if (down) return Monotonicity::kNonIncreasing;
      return Monotonicity::kNeither;
    }
  }
  return Monotonicity::kNeither;
}

bool FatalityProfile::is_non_increasing() const {
  const auto m = monotonicity();
  return m == Monotonicity::kConstant || m == Monotonicity::kNonIncreasing;
}

bool FatalityProfile::is_non_decreasing() const {
  const auto m = monotonicity();
  return m == Monotonicity::kConstant || m == Monotonicity::kNonDecreasing;
}

// ---------------------------------------------------------------------------
// HazardProfile

HazardProfile HazardProfile::none() { return HazardProfile(); }

HazardProfile HazardProfile::constant(double rate) {
  require(finite_nonneg(rate), "constant hazard must be finite and >= 0");
  HazardProfile p;
  p.family_ = Family::kConstant;
  p.alpha_ = rate;
  return p;
}

HazardProfile HazardProfile::power(double alpha, double beta) {
  require(finite_nonneg(alpha), "power hazard alpha must be finite and >= 0");
  require(finite_pos(beta), "power hazard beta must be finite and > 0");
  HazardProfile p;
  p.family_ = Family::kPower;
  p.alpha_ = alpha;
  p.beta_ = beta;
  return p;
}

HazardProfile HazardProfile::tabulated(std::vector<Knot> knots) {
  HazardProfile p;
  p.family_ = Family::kTabulated;
  p.table_ = PiecewiseLinear(std::move(knots));
  for (const auto& k : p.table_.knots()) require(k.value >= 0.0, "hazard knots must be >= 0");
  return p;
}

double HazardProfile::rate(double t) const {
  require_time(t, "hazard");
  switch (family_) {
    case Family::kNone:
      return 0.0;
    case Family::kConstant:
      return alpha_;
    case Family::kPower:
      if (t == 0.0) return beta_ < 1.0 ? HUGE_VAL : (beta_ == 1.0 ? alpha_ : 0.0);
      return alpha_ * beta_ * std::pow(t, beta_ - 1.0);
    case Family::kTabulated:
      return table_.value(t);
  }
  return 0.0;
}

double HazardProfile::cumulative(double t) const {
  require_time(t, "cumulative hazard");
  switch (family_) {
    case Family::kNone:
      return 0.0;
    case Family::kConstant:
      return alpha_ * t;
    case Family::kPower:
      return alpha_ * std::pow(t, beta_);
    case Family::kTabulated:
      return table_.integral(t);
  }
  return 0.0;
}

bool HazardProfile::is_super_additive() const {
  switch (family_) {
    case Family::kNone:
    case Family::kConstant:
      return true;
    case Family::kPower:
      return beta_ >= 1.0 || alpha_ == 0.0;
    case Family::kTabulated:
      return table_.is_non_decreasing();
  }
  return false;
}

// ---------------------------------------------------------------------------
// DegradationLaw

DegradationLaw DegradationLaw::none() { return DegradationLaw(); }

DegradationLaw DegradationLaw::drift(double c) {
  require(finite_nonneg(c), "drift rate must be finite and >= 0");
  DegradationLaw d;
  d.family_ = Family::kDrift;
  d.a_ = c;
  return d;
}

DegradationLaw DegradationLaw::gamma(double alpha, double beta) {
  require(finite_pos(alpha), "gamma process shape rate alpha must be > 0");
  require(finite_pos(beta), "gamma process rate beta must be > 0");
  DegradationLaw d;
  d.family_ = Family::kGamma;
  d.a_ = alpha;
  d.b_ = beta;
  return d;
}

double DegradationLaw::cdf(double t, double x) const {
  require_time(t, "degradation cdf");
  if (std::isnan(x)) throw DomainError("degradation cdf: x is NaN");
  if (x < 0.0) return 0.0;
  switch (family_) {
    case Family::kNone:
      return 1.0;
    case Family::kDrift:
      return x >= a_ * t ? 1.0 : 0.0;
    case Family::kGamma:
      if (t == 0.0) return 1.0;
      return regularized_lower_gamma(a_ * t, b_ * x);
  }
  return 1.0;
}

std::complex<double> DegradationLaw::cdf_transform(double t, std::complex<double> s) const {
  require_time(t, "degradation transform");
  if (s == 0.0) throw DomainError("degradation transform diverges at s = 0");
  switch (family_) {
    case Family::kNone:
      return 1.0 / s;
    case Family::kDrift:
      return std::exp(-s * (a_ * t)) / s;
    case Family::kGamma:
      return std::pow(b_ / (b_ + s), a_ * t) / s;
  }
  return 1.0 / s;
}

double DegradationLaw::sample(double t, RngStream& rng) const {
  switch (family_) {
    case Family::kNone:
      return 0.0;
    case Family::kDrift:
      return a_ * t;
    case Family::kGamma: {
      if (t == 0.0) return 0.0;
      std::gamma_distribution<double> g(a_ * t, 1.0 / b_);
      return g(rng);
    }
  }
  return 0.0;
}

double DegradationLaw::jump_location(double t) const {
  return family_ == Family::kDrift ? a_ * t : 0.0;
}

// ---------------------------------------------------------------------------
// MarginalLaw

MarginalLaw MarginalLaw::degenerate(double value) {
  require(finite_nonneg(value), "degenerate increment must be finite and >= 0");
  MarginalLaw m;
  m.family_ = Family::kDegenerate;
  m.a_ = value;
  return m;
}

MarginalLaw MarginalLaw::exponential(double rate) {
  require(finite_pos(rate), "exponential increment rate must be > 0");
  MarginalLaw m;
  m.family_ = Family::kExponential;
  m.a_ = 1.0;
  m.b_ = rate;
  return m;
}

MarginalLaw MarginalLaw::gamma(double shape, double rate) {
  require(finite_pos(shape), "gamma increment shape must be > 0");
  require(finite_pos(rate), "gamma increment rate must be > 0");
  MarginalLaw m;
  m.family_ = Family::kGamma;
  m.a_ = shape;
  m.b_ = rate;
  return m;
}

std::complex<double> MarginalLaw::transform(std::complex<double> s) const {
  switch (family_) {
    case Family::kDegenerate:
      return std::exp(-s * a_);
    case Family::kExponential:
      return b_ / (b_ + s);
    case Family::kGamma:
      return std::pow(b_ / (b_ + s), a_);
  }
  return 1.0;
}

double MarginalLaw::transform(double s) const {
  switch (family_) {
    case Family::kDegenerate:
      return std::exp(-s * a_);
    case Family::kExponential:
      return b_ / (b_ + s);
    case Family::kGamma:
      return std::pow(b_ / (b_ + s), a_);
  }
  return 1.0;
}

double MarginalLaw::sample(RngStream& rng) const {
  switch (family_) {
    case Family::kDegenerate:
      return a_;
    case Family::kExponential:
      return -std::log(rng.uniform_open()) / b_;
    case Family::kGamma: {
      std::gamma_distribution<double> g(a_, 1.0 / b_);
      return g(rng);
    }
  }
  return 0.0;
}

double MarginalLaw::survival(double x) const {
  if (x < 0.0) return 1.0;
  switch (family_) {
    case Family::kDegenerate:
      return x < a_ ? 1.0 : 0.0;
    case Family::kExponential:
      return std::exp(-b_ * x);
    case Family::kGamma:
      return regularized_upper_gamma(a_, b_ * x);
  }
  return 0.0;
}

double MarginalLaw::mean() const {
  switch (family_) {
    case Family::kDegenerate:
      return a_;
    case Family::kExponential:
      return 1.0 / b_;
    case Family::kGamma:
      return a_ / b_;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// IncrementLaw

IncrementLaw IncrementLaw::independent(MarginalLaw v1, MarginalLaw v2) {
  return IncrementLaw(Structure::kIndependent, v1, v2);
}

IncrementLaw IncrementLaw::complete_dependence(MarginalLaw m) {
  return IncrementLaw(Structure::kCompleteDependence, m, m);
}

IncrementLaw IncrementLaw::additive(MarginalLaw v1, MarginalLaw w) {
  return IncrementLaw(Structure::kAdditive, v1, w);
}

std::complex<double> IncrementLaw::transform(double u, std::complex<double> s) const {
  switch (structure_) {
    case Structure::kIndependent:
      return first_.transform(u) * second_.transform(s);
    case Structure::kCompleteDependence:
      return first_.transform(s + u);
    case Structure::kAdditive:
      return first_.transform(s + u) * second_.transform(s);
  }
  return 1.0;
}

double IncrementLaw::transform(double u, double s) const {
  switch (structure_) {
    case Structure::kIndependent:
      return first_.transform(u) * second_.transform(s);
    case Structure::kCompleteDependence:
      return first_.transform(u + s);
    case Structure::kAdditive:
      return first_.transform(u + s) * second_.transform(s);
  }
  return 1.0;
}

double IncrementLaw::transform_first(double u) const { return first_.transform(u); }

std::complex<double> IncrementLaw::transform_second(std::complex<double> s) const {
  return transform(0.0, s);
}

std::pair<double, double> IncrementLaw::sample(RngStream& rng) const {
  switch (structure_) {
    case Structure::kIndependent: {
      const double v1 = first_.sample(rng);
      return {v1, second_.sample(rng)};
    }
    case Structure::kCompleteDependence: {
      const double v = first_.sample(rng);
      return {v, v};
    }
    case Structure::kAdditive: {
      const double v1 = first_.sample(rng);
      return {v1, v1 + second_.sample(rng)};
    }
  }
  return {0.0, 0.0};
}

bool IncrementLaw::second_has_positive_atom() const {
  using F = MarginalLaw::Family;
  switch (structure_) {
    case Structure::kIndependent:
    case Structure::kCompleteDependence:
      return second_.family() == F::kDegenerate && second_.value() > 0.0;
    case Structure::kAdditive:
      return first_.family() == F::kDegenerate && second_.family() == F::kDegenerate &&
             first_.value() + second_.value() > 0.0;
  }
  return false;
}

// ---------------------------------------------------------------------------

void ModelSpec::validate() const {
  require(std::isfinite(threshold) && threshold >= 0.0, "threshold L must be finite and >= 0");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::kMc1:
      return "MC1";
    case Method::kMc2:
      return "MC2";
    case Method::kSeries:
      return "Series";
    case Method::kLaplace:
      return "Laplace";
    case Method::kClosedForm:
      return "ClosedForm";
  }
  return "?";
}

double ReliabilityEstimate::lower() const {
  return uncertainty == Uncertainty::kBound ? value : value - amount;
}

double ReliabilityEstimate::upper() const { return value + amount; }

double ReliabilityEstimate::lower_clipped() const { return std::clamp(lower(), 0.0, 1.0); }

double ReliabilityEstimate::upper_clipped() const { return std::clamp(upper(), 0.0, 1.0); }

double cumulative_intensity(const IntensityProfile& p, double t) { return p.cumulative(t); }

double cumulative_hazard(const HazardProfile& p, double t) { return p.cumulative(t); }

double degradation_cdf(const DegradationLaw& d, double t, double x) { return d.cdf(t, x); }

double reliability_factorization(const ModelSpec& spec, double t, double phi) {
  if (!(phi >= 0.0 && phi <= 1.0))
    throw ContractViolation("reliability factorization: phi = " + std::to_string(phi) +
                            " is not a probability");
  return std::exp(-spec.hazard.cumulative(t)) * phi;
}

}  // namespace shockrel
