#include "shockrel/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "shockrel/error.hpp"
#include "shockrel/laplace.hpp"
#include "shockrel/series.hpp"

namespace shockrel {

namespace {

constexpr int kMeshPoints = 2001;
constexpr std::uint64_t kJointSamples = 20000;
constexpr double kJointSigmas = 3.0;

std::vector<double> dense_mesh(const std::vector<double>& grid) {
  const double horizon = grid.empty() ? 0.0 : *std::max_element(grid.begin(), grid.end());
  std::vector<double> mesh(kMeshPoints);
  for (int i = 0; i < kMeshPoints; ++i) mesh[i] = horizon * i / (kMeshPoints - 1);
  return mesh;
}

std::string format_number(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << x;
  return os.str();
}

void require_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw InputError("comparison grid is empty");
  for (double t : grid)
    if (!(t >= 0.0) || !std::isfinite(t)) throw InputError("comparison grid has a bad time");
}

ComparisonVerdict compare_curves(const ModelSpec& lhs, const ModelSpec& rhs,
                                 const std::vector<double>& grid, EvalMethod method,
                                 const Precision& precision, Relation expected) {
  require_grid(grid);
  ComparisonVerdict v;
  v.expected = expected;
  v.decision_rule = decision_rule_text();
  for (double t : grid)
    v.grid.push_back({t, interval_of(evaluate_reliability(lhs, t, method, precision)),
                      interval_of(evaluate_reliability(rhs, t, method, precision))});
  v.relation = classify(v.grid);
  return v;
}

double joint_survival(const IncrementLaw& law, double x1, double x2, std::uint64_t seed) {
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < kJointSamples; ++i) {
    RngStream rng(seed, i);
    const auto [v1, v2] = law.sample(rng);
    if (v1 > x1 && v2 > x2) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(kJointSamples);
}

}  // namespace

std::string to_string(EvalMethod m) {
  switch (m) {
    case EvalMethod::kAuto: return "auto";
    case EvalMethod::kSeries: return "series";
    case EvalMethod::kLaplace: return "laplace";
    case EvalMethod::kMc1: return "mc1";
    case EvalMethod::kMc2: return "mc2";
  }
  return "auto";
}

EvalMethod parse_eval_method(const std::string& name) {
  for (EvalMethod m : {EvalMethod::kAuto, EvalMethod::kSeries, EvalMethod::kLaplace,
                       EvalMethod::kMc1, EvalMethod::kMc2})
    if (to_string(m) == name) return m;
  throw InputError("unknown method '" + name + "' (expected auto, series, laplace, mc1 or mc2)");
}

ReliabilityEstimate evaluate_reliability(const ModelSpec& spec, double t, EvalMethod method,
                                         const Precision& precision) {
  switch (method) {
    case EvalMethod::kSeries:
      if (!(spec.intensity.cumulative(t) > 0.0) && t >= 0.0) {
        // no shocks by time t: the n = 0 term is exact
        const double phi = spec.degradation.cdf(t, spec.threshold);
        return {t, reliability_factorization(spec, t, phi), Method::kSeries,
                ReliabilityEstimate::Uncertainty::kBound, 0.0};
      }
      return reliability_series(spec, t, precision.series_tol);
    case EvalMethod::kLaplace:
      return reliability_laplace(spec, t, spec.threshold, precision.inversion);
    case EvalMethod::kMc1:
      return reliability_mc1(spec, t, precision.mc);
    case EvalMethod::kMc2:
      return reliability_mc2(spec, t, precision.mc);
    case EvalMethod::kAuto:
      break;
  }
  if (series_supported(spec) && spec.intensity.cumulative(t) > 0.0) {
    try {
      return reliability_series(spec, t, precision.series_tol);
    } catch (const TruncationError&) {
    } catch (const ConvergenceError&) {
    }
  }
  if (spec.threshold > 0.0) {
    try {
      return reliability_laplace(spec, t, spec.threshold, precision.inversion);
    } catch (const InversionError&) {
    } catch (const ConvergenceError&) {
    }
  }
  return reliability_mc2(spec, t, precision.mc);
}

std::vector<ReliabilityEstimate> reliability_curve(const ModelSpec& spec,
                                                   const std::vector<double>& grid,
                                                   EvalMethod method,
                                                   const Precision& precision) {
  std::vector<ReliabilityEstimate> out;
  out.reserve(grid.size());
  for (double t : grid) out.push_back(evaluate_reliability(spec, t, method, precision));
  return out;
}

std::vector<double> default_comparison_grid() {
  std::vector<double> grid(13);
  for (int k = 1; k <= 13; ++k) grid[k - 1] = 3.0 * k / 13.0;
  return grid;
}

std::string to_string(Relation r) {
  switch (r) {
    case Relation::kDominates: return "dominates";
    case Relation::kDominated: return "dominated";
    case Relation::kIndistinguishable: return "indistinguishable";
    case Relation::kCrossing: return "crossing";
  }
  return "indistinguishable";
}

Interval interval_of(const ReliabilityEstimate& e) {
  return {e.lower_clipped(), e.value, e.upper_clipped()};
}

Relation classify(const std::vector<GridComparison>& rows) {
  bool below = false;
  bool above = false;
  for (const auto& r : rows) {
    below = below || r.lhs.hi < r.rhs.lo;
    above = above || r.lhs.lo > r.rhs.hi;
  }
  if (below && above) return Relation::kCrossing;
  if (below) return Relation::kDominated;
  if (above) return Relation::kDominates;
  return Relation::kIndistinguishable;
}

std::string decision_rule_text() {
  return "per-point interval separation: lhs below rhs at t when hi(lhs) < lo(rhs); intervals "
         "are 95% normal CIs (Monte Carlo), [value, value + truncation bound] (series) or "
         "value +- accuracy class (inversion); no multiplicity correction";
}

ComparisonVerdict compare_fatality(const ModelSpec& base, const FatalityProfile& q_tilde,
                                   const std::vector<double>& grid, EvalMethod method,
                                   const Precision& precision) {
  require_grid(grid);
  for (double w : dense_mesh(grid))
    if (base.fatality.survive(w) > q_tilde.survive(w))
      throw InputError("fatality comparison needs q <= q~ pointwise; fails at w = " +
                       format_number(w) + " (q = " + format_number(base.fatality.survive(w)) +
                       ", q~ = " + format_number(q_tilde.survive(w)) + ")");
  ModelSpec tilde = base;
  tilde.fatality = q_tilde;
  return compare_curves(base, tilde, grid, method, precision, Relation::kDominated);
}

ComparisonVerdict compare_dependence(const ModelSpec& lhs, const ModelSpec& rhs,
                                     const std::vector<double>& grid, EvalMethod method,
                                     const Precision& precision) {
  require_grid(grid);
  if (!(lhs.intensity == rhs.intensity) || !(lhs.fatality == rhs.fatality) ||
      !(lhs.hazard == rhs.hazard) || !(lhs.degradation == rhs.degradation) ||
      lhs.threshold != rhs.threshold)
    throw InputError(
        "dependence comparison needs specs that differ only in the increment law");

  for (double s : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    if (std::abs(lhs.increments.transform(s, 0.0) - rhs.increments.transform(s, 0.0)) > 1e-12)
      throw InputError("dependence comparison: V1 marginals differ (transform at " +
                       format_number(s) + ")");
    if (std::abs(lhs.increments.transform(0.0, s) - rhs.increments.transform(0.0, s)) > 1e-12)
      throw InputError("dependence comparison: V2 marginals differ (transform at " +
                       format_number(s) + ")");
  }

  const std::uint64_t seed = precision.mc.seed ^ 0x9e3779b97f4a7c15ULL;
  const double n = static_cast<double>(kJointSamples);
  for (double x1 : {0.25, 0.5, 1.0, 2.0}) {
    for (double x2 : {0.25, 0.5, 1.0, 2.0}) {
      const double p = joint_survival(lhs.increments, x1, x2, seed);
      const double p_tilde = joint_survival(rhs.increments, x1, x2, seed + 1);
      const double se = std::sqrt((p * (1.0 - p) + p_tilde * (1.0 - p_tilde)) / n);
      if (p - p_tilde > kJointSigmas * se)
        throw InputError("dependence comparison needs lhs <=_lo rhs; joint survival at (" +
                         format_number(x1) + ", " + format_number(x2) + ") is " +
                         format_number(p) + " vs " + format_number(p_tilde));
    }
  }
  return compare_curves(lhs, rhs, grid, method, precision, Relation::kDominated);
}

ComparisonVerdict compare_intensity(const ModelSpec& base, const IntensityProfile& lambda_tilde,
                                    const std::vector<double>& grid, EvalMethod method,
                                    const Precision& precision) {
  require_grid(grid);
  if (!base.fatality.is_non_decreasing())
    throw InputError("intensity comparison needs q non-decreasing (q is " +
                     to_string(base.fatality.monotonicity()) + ")");
  for (double t : dense_mesh(grid))
    if (base.intensity.cumulative(t) < lambda_tilde.cumulative(t))
      throw InputError("intensity comparison needs Lambda >= Lambda~; fails at t = " +
                       format_number(t));
  ModelSpec tilde = base;
  tilde.intensity = lambda_tilde;
  return compare_curves(base, tilde, grid, method, precision, Relation::kDominated);
}

ComparisonVerdict probe_intensity_monotonicity(const ModelSpec& base,
                                               const IntensityProfile& lambda_tilde,
                                               const std::vector<double>& grid,
                                               EvalMethod method, const Precision& precision) {
  ModelSpec tilde = base;
  tilde.intensity = lambda_tilde;
  return compare_curves(base, tilde, grid, method, precision, Relation::kDominated);
}

std::string nbu_hypothesis(const ModelSpec& spec) {
  if (!spec.hazard.is_super_additive()) return "";
  if (spec.fatality.is_non_increasing() &&
      spec.intensity.family() == IntensityProfile::Family::kConstant)
    return "q non-increasing, lambda constant, H super-additive";
  if (spec.fatality.monotonicity() == Monotonicity::kConstant &&
      spec.intensity.is_super_additive())
    return "q constant, Lambda super-additive, H super-additive";
  return "";
}

NbuVerdict check_nbu(const ModelSpec& spec, const std::vector<double>& s_grid,
                     const std::vector<double>& t_grid, EvalMethod method,
                     const Precision& precision, bool falsification_probe) {
  require_grid(s_grid);
  require_grid(t_grid);
  NbuVerdict v;
  v.hypotheses_hold = !nbu_hypothesis(spec).empty();
  if (!v.hypotheses_hold && !falsification_probe)
    throw InputError(
        "NBU check: neither (q non-increasing, lambda constant) nor (q constant, Lambda "
        "super-additive) holds with H super-additive");

  std::map<double, Interval> cache;
  auto at = [&](double t) {
    auto it = cache.find(t);
    if (it == cache.end())
      it = cache.emplace(t, interval_of(evaluate_reliability(spec, t, method, precision))).first;
    return it->second;
  };

  std::vector<GridComparison> rows;
  for (double s : s_grid) {
    for (double t : t_grid) {
      NbuPoint p;
      p.s = s;
      p.t = t;
      p.joint = at(s + t);
      const Interval rs = at(s);
      const Interval rt = at(t);
      p.product = {rs.lo * rt.lo, rs.value * rt.value, rs.hi * rt.hi};
      p.violation = p.joint.value - p.product.value;
      p.half_width = 0.5 * ((p.joint.hi - p.joint.lo) + (p.product.hi - p.product.lo));
      if (p.joint.lo > p.product.hi) v.pass = false;
      if (v.grid.empty() || p.violation > v.worst.violation) v.worst = p;
      v.grid.push_back(p);
      rows.push_back({s + t, p.joint, p.product});
    }
  }
  v.relation = classify(rows);
  return v;
}

ComparisonVerdict residual_lifetime_comparison(const ModelSpec& spec, double age,
                                               const std::vector<double>& grid,
                                               EvalMethod method, const Precision& precision) {
  require_grid(grid);
  if (!(age >= 0.0)) throw InputError("residual lifetime: negative age");
  const Interval at_age = interval_of(evaluate_reliability(spec, age, method, precision));
  if (!(at_age.lo > 0.0)) throw DomainError("residual lifetime: R(age) is not positive");
  ComparisonVerdict v;
  v.decision_rule = decision_rule_text();
  for (double t : grid) {
    const Interval later = interval_of(evaluate_reliability(spec, age + t, method, precision));
    const Interval fresh = interval_of(evaluate_reliability(spec, t, method, precision));
    const Interval residual{later.lo / at_age.hi, later.value / at_age.value,
                            std::min(1.0, later.hi / at_age.lo)};
    v.grid.push_back({t, residual, fresh});
  }
  v.relation = classify(v.grid);
  return v;
}

}  // namespace shockrel
