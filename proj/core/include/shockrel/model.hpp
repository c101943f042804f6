#pragma once

// Model ingredients of the shock/degradation reliability model:
//   - shock arrivals: non-homogeneous Poisson process with intensity lambda(t)
//   - fatality: a shock at time t is harmless with probability q(t)
//   - intrinsic hazard h(t) of the sudden-failure component
//   - intrinsic degradation G_t of the soft-failure component, threshold L
//   - shock increments (V1, V2) added to the hazard rate and to the
//     degradation level respectively.
//
// Every object here is immutable after construction.

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace shockrel {

class RngStream;

/// (abscissa, value) node of a tabulated profile.
struct Knot {
  double t = 0.0;
  double value = 0.0;

  friend bool operator==(const Knot&, const Knot&) = default;
};

/// Piecewise-linear function through knots, constant beyond the last knot.
/// The first knot must sit at t = 0 and abscissae must be strictly increasing.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  explicit PiecewiseLinear(std::vector<Knot> knots);

  double value(double t) const;
  /// Exact integral over [0, t].
  double integral(double t) const;

  const std::vector<Knot>& knots() const noexcept { return knots_; }
  bool is_non_decreasing() const;
  bool is_non_increasing() const;

  friend bool operator==(const PiecewiseLinear&, const PiecewiseLinear&) = default;

 private:
  std::vector<Knot> knots_;
  std::vector<double> cumulative_;  // integral up to each knot
};

/// Shock arrival intensity lambda(t) and its integral Lambda(t).
class IntensityProfile {
 public:
  enum class Family { kConstant, kPower, kTabulated };

  static IntensityProfile constant(double rate);
  /// lambda(t) = alpha * beta * t^(beta - 1), Lambda(t) = alpha * t^beta.
  static IntensityProfile power(double alpha, double beta);
  static IntensityProfile tabulated(std::vector<Knot> knots);

  Family family() const noexcept { return family_; }
  double rate(double t) const;
  double cumulative(double t) const;
  /// Smallest t in [0, horizon] with Lambda(t) = y. Requires y <= Lambda(horizon).
  double inverse_cumulative(double y, double horizon) const;
  /// Lambda(x + y) >= Lambda(x) + Lambda(y) for all x, y >= 0.
  bool is_super_additive() const;

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  const PiecewiseLinear& table() const noexcept { return table_; }

  friend bool operator==(const IntensityProfile&, const IntensityProfile&) = default;

 private:
  IntensityProfile() = default;

  Family family_ = Family::kConstant;
  double alpha_ = 0.0;  // constant rate, or power-law scale
  double beta_ = 1.0;   // power-law exponent
  PiecewiseLinear table_;
};

enum class Monotonicity { kConstant, kNonIncreasing, kNonDecreasing, kNeither };

std::string to_string(Monotonicity m);

/// Probability q(t) that a shock arriving at time t is harmless.
class FatalityProfile {
 public:
  enum class Family { kConstant, kExpDecay, kExpGrowth, kTabulated };

  static FatalityProfile constant(double q);
  /// q(t) = exp(-a t)
  static FatalityProfile exp_decay(double a);
  /// q(t) = 1 - exp(-a t)
  static FatalityProfile exp_growth(double a);
  /// Knot values must lie in [0, 1]; anything else is rejected, not clamped.
  static FatalityProfile tabulated(std::vector<Knot> knots);

  Family family() const noexcept { return family_; }
  double survive(double t) const;  // q(t)
  double fatal(double t) const { return 1.0 - survive(t); }  // p(t)
  Monotonicity monotonicity() const;
  bool is_non_increasing() const;
  bool is_non_decreasing() const;

  double parameter() const noexcept { return param_; }
  const PiecewiseLinear& table() const noexcept { return table_; }

  friend bool operator==(const FatalityProfile&, const FatalityProfile&) = default;

 private:
  FatalityProfile() = default;

  Family family_ = Family::kConstant;
  double param_ = 1.0;
  PiecewiseLinear table_;
};

/// Intrinsic hazard rate h(t) of the sudden-failure component.
class HazardProfile {
 public:
  enum class Family { kNone, kConstant, kPower, kTabulated };

  static HazardProfile none();
  static HazardProfile constant(double rate);
  /// h(t) = alpha * beta * t^(beta - 1), H(t) = alpha * t^beta.
  static HazardProfile power(double alpha, double beta);
  static HazardProfile tabulated(std::vector<Knot> knots);

  Family family() const noexcept { return family_; }
  double rate(double t) const;
  double cumulative(double t) const;
  /// H(s + t) >= H(s) + H(t), i.e. exp(-H) is NBU.
  bool is_super_additive() const;

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  const PiecewiseLinear& table() const noexcept { return table_; }

  friend bool operator==(const HazardProfile&, const HazardProfile&) = default;

 private:
  HazardProfile() = default;

  Family family_ = Family::kNone;
  double alpha_ = 0.0;
  double beta_ = 1.0;
  PiecewiseLinear table_;
};

/// Intrinsic degradation process (G_t).
class DegradationLaw {
 public:
  enum class Family { kNone, kDrift, kGamma };

  static DegradationLaw none();
  /// G_t = c t
  static DegradationLaw drift(double c);
  /// G_t ~ Gamma(shape = alpha t, rate = beta)
  static DegradationLaw gamma(double alpha, double beta);

  Family family() const noexcept { return family_; }
  /// F_{G_t}(x) = P(G_t <= x).
  double cdf(double t, double x) const;
  /// Laplace transform of x -> F_{G_t}(x) (analytic continuation). Throws at s = 0.
  std::complex<double> cdf_transform(double t, std::complex<double> s) const;
  double sample(double t, RngStream& rng) const;
  /// Location of a jump of F_{G_t} at a positive abscissa, or 0 if continuous there.
  double jump_location(double t) const;

  double rate() const noexcept { return a_; }   // drift c, or gamma alpha
  double scale() const noexcept { return b_; }  // gamma beta

  friend bool operator==(const DegradationLaw&, const DegradationLaw&) = default;

 private:
  DegradationLaw() = default;

  Family family_ = Family::kNone;
  double a_ = 0.0;
  double b_ = 1.0;
};

/// Univariate law of one shock increment component.
class MarginalLaw {
 public:
  enum class Family { kDegenerate, kExponential, kGamma };

  static MarginalLaw degenerate(double value);
  static MarginalLaw exponential(double rate);
  static MarginalLaw gamma(double shape, double rate);

  Family family() const noexcept { return family_; }
  /// E[exp(-s V)], continued analytically to the plane cut along s <= -rate.
  std::complex<double> transform(std::complex<double> s) const;
  double transform(double s) const;
  double sample(RngStream& rng) const;
  double survival(double x) const;  // P(V > x)
  double mean() const;

  double value() const noexcept { return a_; }  // degenerate location
  double shape() const noexcept { return family_ == Family::kGamma ? a_ : 1.0; }
  double rate() const noexcept { return b_; }

  friend bool operator==(const MarginalLaw&, const MarginalLaw&) = default;

 private:
  MarginalLaw() = default;

  Family family_ = Family::kDegenerate;
  double a_ = 0.0;
  double b_ = 1.0;
};

/// Joint law of the increment pair (V1, V2).
class IncrementLaw {
 public:
  enum class Structure { kIndependent, kCompleteDependence, kAdditive };

  static IncrementLaw independent(MarginalLaw v1, MarginalLaw v2);
  /// V1 = V2 ~ m.
  static IncrementLaw complete_dependence(MarginalLaw m);
  /// V2 = V1 + W with V1 independent of W.
  static IncrementLaw additive(MarginalLaw v1, MarginalLaw w);

  Structure structure() const noexcept { return structure_; }
  const MarginalLaw& first() const noexcept { return first_; }
  /// V2 law for kIndependent, W law for kAdditive, V1 law for kCompleteDependence.
  const MarginalLaw& second() const noexcept { return second_; }

  /// E[exp(-u V1 - s V2)].
  std::complex<double> transform(double u, std::complex<double> s) const;
  double transform(double u, double s) const;
  double transform_first(double u) const;
  std::complex<double> transform_second(std::complex<double> s) const;
  std::pair<double, double> sample(RngStream& rng) const;
  /// True when V2 has an atom at a positive location.
  bool second_has_positive_atom() const;

  friend bool operator==(const IncrementLaw&, const IncrementLaw&) = default;

 private:
  IncrementLaw(Structure s, MarginalLaw a, MarginalLaw b)
      : structure_(s), first_(a), second_(b) {}

  Structure structure_;
  MarginalLaw first_;
  MarginalLaw second_;
};

/// One complete system description.
struct ModelSpec {
  IntensityProfile intensity = IntensityProfile::constant(1.0);
  FatalityProfile fatality = FatalityProfile::constant(1.0);
  HazardProfile hazard = HazardProfile::none();
  DegradationLaw degradation = DegradationLaw::none();
  IncrementLaw increments =
      IncrementLaw::independent(MarginalLaw::degenerate(0.0), MarginalLaw::degenerate(0.0));
  double threshold = 0.0;

  /// Throws InputError when an invariant does not hold.
  void validate() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

enum class Method { kMc1, kMc2, kSeries, kLaplace, kClosedForm };

std::string to_string(Method m);

/// R_L(t) together with how much it can be trusted.
struct ReliabilityEstimate {
  enum class Uncertainty {
    kCi95,        // value +- amount, 95% normal confidence interval
    kBound,       // true value in [value, value + amount]
    kExactToTol,  // value +- amount, deterministic accuracy class
  };

  double t = 0.0;
  double value = 0.0;
  Method method = Method::kSeries;
  Uncertainty uncertainty = Uncertainty::kExactToTol;
  double amount = 0.0;

  double lower() const;
  double upper() const;
  /// Interval clipped to [0, 1], for output only.
  double lower_clipped() const;
  double upper_clipped() const;
};

double cumulative_intensity(const IntensityProfile& p, double t);
double cumulative_hazard(const HazardProfile& p, double t);
double degradation_cdf(const DegradationLaw& d, double t, double x);

/// R_L(t) = exp(-H(t)) * phi. Every reliability method assembles its result here.
double reliability_factorization(const ModelSpec& spec, double t, double phi);

}  // namespace shockrel
