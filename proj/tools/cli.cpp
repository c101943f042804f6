#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "shockrel/analysis.hpp"
#include "shockrel/error.hpp"
#include "shockrel/laplace.hpp"
#include "shockrel/series.hpp"
#include "shockrel/spec_io.hpp"

namespace shockrel::cli {

namespace {

constexpr const char* kBuiltinPrefix = "builtin:";
constexpr const char* kFallbackChain = "series -> laplace -> mc2";

std::string shortest(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string fixed(double x, int digits = 6) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, digits);
  return std::string(buf, r.ptr);
}

std::uint64_t parse_seed(const std::string& text, const std::string& source) {
  std::uint64_t v = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size() || text.empty())
    throw InputError(source + ": '" + text + "' is not a non-negative integer seed");
  return v;
}

SpecDocument load_spec(const std::string& ref) {
  if (ref.rfind(kBuiltinPrefix, 0) == 0) return builtin_spec(ref.substr(8));
  return load_spec_document(ref);
}

// Seed precedence: spec file < SHOCKREL_SEED < --seed.
std::uint64_t resolve_seed(std::uint64_t file_seed, const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SHOCKREL_SEED")) return parse_seed(env, "SHOCKREL_SEED");
  return file_seed;
}

struct CommonFlags {
  std::optional<std::string> method;
  std::optional<std::string> grid;
  std::optional<std::uint64_t> histories;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  unsigned workers = 0;
  std::optional<std::string> out;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_method) {
  if (with_method)
    cmd->add_option("--method", f.method, "auto | series | laplace | mc1 | mc2");
  cmd->add_option("--histories", f.histories, "Monte Carlo histories per point");
  cmd->add_option("--seed", f.seed, "root seed (overrides SHOCKREL_SEED and the spec file)");
  cmd->add_option("--workers", f.workers, "Monte Carlo worker threads (0 = all cores)");
  cmd->add_option("--out", f.out, "output file (default stdout)");
}

Precision precision_from(const CommonFlags& f, const RunSettings& run) {
  Precision p;
  p.series_tol = f.tol.value_or(run.tolerance);
  p.mc.histories = f.histories.value_or(run.histories);
  p.mc.seed = resolve_seed(run.seed, f.seed);
  p.mc.workers = f.workers;
  return p;
}

// Writes to --out when given, else to the caller's stream.
class Sink {
 public:
  Sink(const std::optional<std::string>& path, std::ostream& fallback) : stream_(&fallback) {
    if (path) {
      file_ = std::make_unique<std::ofstream>(*path, std::ios::binary);
      if (!*file_) throw InputError("cannot open output file '" + *path + "'");
      stream_ = file_.get();
    }
    stream_->imbue(std::locale::classic());
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

bool is_deterministic(Method m) { return m != Method::kMc1 && m != Method::kMc2; }

int cmd_reliability(const std::string& spec_ref, const CommonFlags& flags, std::ostream& out) {
  const SpecDocument doc = load_spec(spec_ref);
  const EvalMethod method = flags.method ? parse_eval_method(*flags.method) : doc.run.method;
  const std::vector<double> grid = flags.grid ? parse_time_grid(*flags.grid) : doc.run.time_grid;
  const Precision precision = precision_from(flags, doc.run);

  std::vector<ReliabilityEstimate> rows;
  try {
    rows = reliability_curve(doc.model, grid, method, precision);
  } catch (const CapabilityError& e) {
    throw CapabilityError(std::string(e.what()) + " (--method auto falls back " + kFallbackChain +
                          ")");
  }

  Sink sink(flags.out, out);
  std::ostream& os = sink.stream();
  os << "t,value,lo95,hi95,method,seed\n";
  for (const auto& r : rows) {
    os << shortest(r.t) << ',' << shortest(r.value) << ',' << shortest(r.lower_clipped()) << ','
       << shortest(r.upper_clipped()) << ',' << to_string(r.method) << ',';
    if (!is_deterministic(r.method)) os << precision.mc.seed;
    os << '\n';
  }
  return kOk;
}

struct ValidationLine {
  std::string row;
  std::string method;
  std::optional<ReliabilityEstimate> estimate;
  std::string reference;
  std::string criterion;
  bool pass = true;
};

bool contains(const ReliabilityEstimate& e, double x) { return e.lower() <= x && x <= e.upper(); }

int cmd_validate(const CommonFlags& flags, std::ostream& out) {
  RunSettings run;
  Precision precision = precision_from(flags, run);
  precision.mc.histories = flags.histories.value_or(100000);
  constexpr double t = 1.0;
  constexpr double kDeterministicTol = 5e-4;

  std::vector<ValidationLine> lines;
  auto mc_lines = [&](const std::string& row, const ModelSpec& spec, double reference,
                      const std::string& ref_text) {
    for (EvalMethod m : {EvalMethod::kMc1, EvalMethod::kMc2}) {
      const ReliabilityEstimate e = evaluate_reliability(spec, t, m, precision);
      lines.push_back({row, to_string(e.method), e, ref_text, "ci95 contains reference",
                       contains(e, reference)});
    }
  };
  auto deterministic_line = [&](const std::string& row, const ModelSpec& spec, EvalMethod m,
                                double reference, const std::string& ref_text) {
    const ReliabilityEstimate e = evaluate_reliability(spec, t, m, precision);
    lines.push_back({row, to_string(e.method), e, ref_text, "|estimate - reference| <= 5e-4",
                     std::abs(e.value - reference) <= kDeterministicTol});
  };

  {
    const std::string row = "validation-independent";
    const ModelSpec& spec = builtin_spec(row).model;
    mc_lines(row, spec, 0.5198, "0.5198");
    deterministic_line(row, spec, EvalMethod::kSeries, 0.5198, "0.5198");
    deterministic_line(row, spec, EvalMethod::kLaplace, 0.5198, "0.5198");
  }
  {
    const std::string row = "validation-complete";
    const ModelSpec& spec = builtin_spec(row).model;
    mc_lines(row, spec, 0.5054, "0.5054");
    lines.push_back({row, "Series", std::nullopt, "-", "not applicable (dependent increments)",
                     true});
    deterministic_line(row, spec, EvalMethod::kLaplace, 0.5054, "0.5054");
  }
  {
    // the inversion value is the reference
    const std::string row = "validation-additive";
    const ModelSpec& spec = builtin_spec(row).model;
    const ReliabilityEstimate lap = evaluate_reliability(spec, t, EvalMethod::kLaplace, precision);
    const std::string ref_text = fixed(lap.value);
    const ReliabilityEstimate mc1 = evaluate_reliability(spec, t, EvalMethod::kMc1, precision);
    const ReliabilityEstimate mc2 = evaluate_reliability(spec, t, EvalMethod::kMc2, precision);
    const bool overlap = mc1.lower() <= mc2.upper() && mc2.lower() <= mc1.upper();
    lines.push_back({row, "MC1", mc1, ref_text, "ci95 contains reference; overlaps MC2",
                     contains(mc1, lap.value) && overlap});
    lines.push_back({row, "MC2", mc2, ref_text, "ci95 contains reference; overlaps MC1",
                     contains(mc2, lap.value) && overlap});
    lines.push_back({row, "Series", std::nullopt, "-", "not applicable (dependent increments)",
                     true});
    lines.push_back({row, "Laplace", lap, ref_text, "reference", true});
  }

  Sink sink(flags.out, out);
  std::ostream& os = sink.stream();
  os << "# t = 1, histories = " << precision.mc.histories << ", seed = " << precision.mc.seed
     << '\n';
  os << "row,method,estimate,lo95,hi95,reference,criterion,status\n";
  bool all = true;
  for (const auto& l : lines) {
    os << l.row << ',' << l.method << ',';
    if (l.estimate)
      os << fixed(l.estimate->value) << ',' << fixed(l.estimate->lower()) << ','
         << fixed(l.estimate->upper());
    else
      os << "-,-,-";
    os << ',' << l.reference << ',' << l.criterion << ',' << (l.pass ? "PASS" : "FAIL") << '\n';
    all = all && l.pass;
  }
  os << "overall," << (all ? "PASS" : "FAIL") << '\n';
  return all ? kOk : kValidationFailure;
}

void write_interval(std::ostream& os, const Interval& i) {
  os << fixed(i.value, 8) << ',' << fixed(i.lo, 8) << ',' << fixed(i.hi, 8);
}

void write_verdict(std::ostream& os, const std::string& kind, const ComparisonVerdict& v,
                   bool probe) {
  os << "kind: " << kind << '\n';
  os << "relation: " << to_string(v.relation) << '\n';
  if (probe) {
    os << "expected: none (probe)\n";
  } else {
    os << "expected: " << to_string(v.expected) << '\n';
    os << "matches: " << (v.matches_theory() ? "yes" : "no") << '\n';
  }
  os << "rule: " << v.decision_rule << '\n';
  os << "t,lhs,lhs_lo,lhs_hi,rhs,rhs_lo,rhs_hi\n";
  for (const auto& r : v.grid) {
    os << shortest(r.t) << ',';
    write_interval(os, r.lhs);
    os << ',';
    write_interval(os, r.rhs);
    os << '\n';
  }
}

// The two documents must agree on everything except the compared ingredient.
void require_same_except(const ModelSpec& a, const ModelSpec& b, const std::string& kind) {
  ModelSpec aligned = b;
  if (kind == "fatality") aligned.fatality = a.fatality;
  if (kind == "intensity") aligned.intensity = a.intensity;
  if (!(aligned == a))
    throw InputError(kind + " comparison needs specs that differ only in the " + kind +
                     " profile");
}

int cmd_compare(const std::string& kind, const std::vector<std::string>& specs,
                const CommonFlags& flags, bool probe, std::ostream& out) {
  const bool single = kind == "nbu";
  if (kind != "nbu" && kind != "fatality" && kind != "dependence" && kind != "intensity")
    throw InputError("unknown comparison kind '" + kind + "'");
  if (specs.size() != (single ? 1u : 2u))
    throw InputError("compare --kind " + kind + " takes " + (single ? "one spec" : "two specs"));
  if (probe && kind != "nbu" && kind != "intensity")
    throw InputError("--probe applies to --kind nbu and --kind intensity only");

  const SpecDocument a = load_spec(specs[0]);
  const std::optional<SpecDocument> b =
      single ? std::nullopt : std::optional<SpecDocument>(load_spec(specs[1]));
  const EvalMethod method = flags.method ? parse_eval_method(*flags.method) : EvalMethod::kAuto;
  const Precision precision = precision_from(flags, a.run);

  const std::vector<double> grid =
      flags.grid ? parse_time_grid(*flags.grid)
                 : (single ? std::vector<double>{0.25, 0.5, 1.0, 2.0} : default_comparison_grid());

  Sink sink(flags.out, out);
  std::ostream& os = sink.stream();
  try {
    if (kind == "nbu") {
      const NbuVerdict v = check_nbu(a.model, grid, grid, method, precision, probe);
      os << "kind: nbu\n";
      os << "hypothesis: "
         << (v.hypotheses_hold ? nbu_hypothesis(a.model) : std::string("none")) << '\n';
      os << "relation: " << to_string(v.relation) << '\n';
      os << "worst: s=" << shortest(v.worst.s) << " t=" << shortest(v.worst.t)
         << " violation=" << fixed(v.worst.violation, 8) << " +- "
         << fixed(v.worst.half_width, 8) << '\n';
      os << "pass: " << (v.pass ? "yes" : "no") << '\n';
      os << "s,t,joint,joint_lo,joint_hi,product,product_lo,product_hi,violation\n";
      for (const auto& p : v.grid) {
        os << shortest(p.s) << ',' << shortest(p.t) << ',';
        write_interval(os, p.joint);
        os << ',';
        write_interval(os, p.product);
        os << ',' << fixed(p.violation, 8) << '\n';
      }
      return (v.pass || probe) ? kOk : kValidationFailure;
    }

    ComparisonVerdict v;
    if (kind == "fatality") {
      require_same_except(a.model, b->model, kind);
      v = compare_fatality(a.model, b->model.fatality, grid, method, precision);
    } else if (kind == "intensity") {
      require_same_except(a.model, b->model, kind);
      v = probe ? probe_intensity_monotonicity(a.model, b->model.intensity, grid, method,
                                               precision)
                : compare_intensity(a.model, b->model.intensity, grid, method, precision);
    } else {
      v = compare_dependence(a.model, b->model, grid, method, precision);
    }
    write_verdict(os, kind, v, probe);
    return (probe || v.matches_theory()) ? kOk : kValidationFailure;
  } catch (const InputError& e) {
    // hypotheses of the comparison are not met
    throw CapabilityError(e.what());
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reliability of systems under competing degradation and shock failures",
               "shockrel"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string spec_ref;
  auto* rel = app.add_subcommand("reliability", "reliability curve of one spec as CSV");
  rel->add_option("spec", spec_ref, "spec file, or builtin:NAME")->required();
  add_common(rel, flags, true);
  rel->add_option("--grid", flags.grid, "time grid start:stop:count");
  rel->add_option("--tol", flags.tol, "series truncation tolerance");

  auto* val = app.add_subcommand("validate", "reference validation suite at t = 1");
  add_common(val, flags, false);

  std::string kind;
  bool probe = false;
  std::vector<std::string> compare_specs;
  auto* cmp = app.add_subcommand("compare", "stochastic-order and ageing experiments");
  cmp->add_option("--kind", kind, "fatality | dependence | intensity | nbu")->required();
  cmp->add_option("specs", compare_specs, "spec files or builtin:NAME (lhs first)")->required();
  cmp->add_flag("--probe", probe, "skip hypothesis checks and only report");
  add_common(cmp, flags, true);
  cmp->add_option("--grid", flags.grid, "time grid start:stop:count");
  cmp->add_option("--tol", flags.tol, "series truncation tolerance");

  auto* list = app.add_subcommand("list", "list built-in specs");
  std::string show_name;
  auto* show = app.add_subcommand("show", "print a built-in spec document");
  show->add_option("name", show_name, "built-in spec name")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (rel->parsed()) return cmd_reliability(spec_ref, flags, out);
    if (val->parsed()) return cmd_validate(flags, out);
    if (cmp->parsed()) return cmd_compare(kind, compare_specs, flags, probe, out);
    if (list->parsed()) {
      for (const auto& s : builtin_specs()) out << s.name << "  " << s.description << '\n';
      return kOk;
    }
    if (show->parsed()) {
      out << serialize_spec_document(builtin_spec(show_name));
      return kOk;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const CapabilityError& e) {
    err << "error: " << e.what() << '\n';
    return kCapability;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kCapability;
  }
  return kUsage;
}

}  // namespace shockrel::cli
