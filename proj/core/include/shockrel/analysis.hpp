#pragma once

// Grid experiments for ageing (NBU) and stochastic-order comparisons of
// reliability curves. Each grid point carries an interval (95% CI for Monte
// Carlo, truncation bound for the series, accuracy class for inversion);
// two curves are ordered at a point only when their intervals separate.

#include <optional>
#include <string>
#include <vector>

#include "shockrel/model.hpp"
#include "shockrel/montecarlo.hpp"
#include "shockrel/numerics.hpp"

namespace shockrel {

enum class EvalMethod { kAuto, kSeries, kLaplace, kMc1, kMc2 };

std::string to_string(EvalMethod m);
/// Parses "auto", "series", "laplace", "mc1", "mc2". Throws InputError otherwise.
EvalMethod parse_eval_method(const std::string& name);

struct Precision {
  double series_tol = 1e-10;
  std::optional<InversionConfig> inversion;  // chosen per spec when empty
  McConfig mc;
};

/// R_L(t) at the spec threshold. kAuto tries the series, then inversion,
/// then MC2; explicit methods surface CapabilityError when inapplicable.
ReliabilityEstimate evaluate_reliability(const ModelSpec& spec, double t, EvalMethod method,
                                         const Precision& precision = {});

std::vector<ReliabilityEstimate> reliability_curve(const ModelSpec& spec,
                                                   const std::vector<double>& grid,
                                                   EvalMethod method,
                                                   const Precision& precision = {});

/// 13 equally spaced points on (0, 3].
std::vector<double> default_comparison_grid();

enum class Relation { kDominates, kDominated, kIndistinguishable, kCrossing };

std::string to_string(Relation r);

struct Interval {
  double lo = 0.0;
  double value = 0.0;
  double hi = 0.0;
};

Interval interval_of(const ReliabilityEstimate& e);

struct GridComparison {
  double t = 0.0;
  Interval lhs;
  Interval rhs;
};

/// Separated-below points only -> kDominated, separated-above only ->
/// kDominates, both -> kCrossing, none -> kIndistinguishable.
Relation classify(const std::vector<GridComparison>& rows);

struct ComparisonVerdict {
  Relation relation = Relation::kIndistinguishable;
  Relation expected = Relation::kDominated;
  std::vector<GridComparison> grid;
  std::string decision_rule;

  /// The observed relation is the predicted one, or no point separates.
  bool matches_theory() const {
    return relation == expected || relation == Relation::kIndistinguishable;
  }
};

/// Text describing the per-point separation rule, stored in every verdict.
std::string decision_rule_text();

/// lhs = base spec, rhs = base spec with fatality q_tilde. Requires
/// q <= q_tilde on a dense mesh; predicted relation kDominated.
ComparisonVerdict compare_fatality(const ModelSpec& base, const FatalityProfile& q_tilde,
                                   const std::vector<double>& grid, EvalMethod method,
                                   const Precision& precision = {});

/// lhs = less dependent increments, rhs = more dependent. Requires identical
/// ingredients apart from the increment law, equal marginals, and lhs <=_lo rhs
/// on a sampled mesh; predicted relation kDominated.
ComparisonVerdict compare_dependence(const ModelSpec& lhs, const ModelSpec& rhs,
                                     const std::vector<double>& grid, EvalMethod method,
                                     const Precision& precision = {});

/// lhs = base spec, rhs = base spec with intensity lambda_tilde. Requires
/// Lambda >= Lambda_tilde on a dense mesh and q non-decreasing; predicted
/// relation kDominated.
ComparisonVerdict compare_intensity(const ModelSpec& base, const IntensityProfile& lambda_tilde,
                                    const std::vector<double>& grid, EvalMethod method,
                                    const Precision& precision = {});

/// compare_intensity without the q hypothesis. Reports only: nothing is
/// predicted for this configuration.
ComparisonVerdict probe_intensity_monotonicity(const ModelSpec& base,
                                               const IntensityProfile& lambda_tilde,
                                               const std::vector<double>& grid,
                                               EvalMethod method,
                                               const Precision& precision = {});

struct NbuPoint {
  double s = 0.0;
  double t = 0.0;
  Interval joint;    // R(s + t)
  Interval product;  // R(s) R(t)
  double violation = 0.0;   // R(s + t) - R(s) R(t)
  double half_width = 0.0;  // combined interval half-width
};

struct NbuVerdict {
  std::vector<NbuPoint> grid;
  NbuPoint worst;  // largest violation
  Relation relation = Relation::kIndistinguishable;  // of R(s + t) against R(s) R(t)
  bool hypotheses_hold = false;
  bool pass = true;  // no point with R(s + t) above R(s) R(t) beyond the intervals
};

/// Which of the ageing-theorem hypotheses the spec satisfies, if any.
/// Empty string when none holds.
std::string nbu_hypothesis(const ModelSpec& spec);

/// Evaluates R(s + t) <= R(s) R(t) on sGrid x tGrid. Throws InputError when
/// no hypothesis of the ageing theorem holds, unless falsification_probe.
NbuVerdict check_nbu(const ModelSpec& spec, const std::vector<double>& s_grid,
                     const std::vector<double>& t_grid, EvalMethod method,
                     const Precision& precision = {}, bool falsification_probe = false);

/// lhs = P(tau > age + t | tau > age), rhs = R(t); predicted relation is
/// kDominated for an NBU lifetime.
ComparisonVerdict residual_lifetime_comparison(const ModelSpec& spec, double age,
                                               const std::vector<double>& grid,
                                               EvalMethod method,
                                               const Precision& precision = {});

}  // namespace shockrel
