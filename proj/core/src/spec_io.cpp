#include "shockrel/spec_io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "shockrel/error.hpp"

namespace shockrel {

namespace {

using nlohmann::json;

constexpr int kDefaultGridPoints = 61;
constexpr double kDefaultGridEnd = 3.0;

// Object reader that records which keys were consumed so leftovers can be
// reported as unknown.
class Fields {
 public:
  Fields(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError((path_.empty() ? std::string("document") : path_) + ": " + what);
  }

  std::string child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  const json& get(const std::string& key) {
    if (!node_.contains(key)) fail("missing field '" + key + "'");
    used_.insert(key);
    return node_.at(key);
  }

  double number(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number()) throw InputError(child(key) + ": expected a number");
    return v.get<double>();
  }

  std::uint64_t unsigned_integer(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number_unsigned()) throw InputError(child(key) + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  std::string string(const std::string& key) {
    const json& v = get(key);
    if (!v.is_string()) throw InputError(child(key) + ": expected a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (const auto& [key, value] : node_.items())
      if (!used_.count(key)) throw InputError(child(key) + ": unknown field");
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> used_;
};

template <typename F>
auto guarded(const std::string& path, F&& build) {
  try {
    return build();
  } catch (const Error& e) {
    const std::string what = e.what();
    if (what.rfind(path, 0) == 0) throw InputError(what);
    throw InputError(path + ": " + what);
  }
}

std::vector<Knot> read_knots(Fields& f) {
  const std::string path = f.child("knots");
  const json& arr = f.get("knots");
  if (!arr.is_array() || arr.empty()) throw InputError(path + ": expected a non-empty array");
  std::vector<Knot> knots;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& k = arr[i];
    if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number())
      throw InputError(path + "[" + std::to_string(i) + "]: expected [t, value]");
    knots.push_back({k[0].get<double>(), k[1].get<double>()});
  }
  return knots;
}

json write_knots(const PiecewiseLinear& table) {
  json arr = json::array();
  for (const Knot& k : table.knots()) arr.push_back({k.t, k.value});
  return arr;
}

IntensityProfile read_intensity(const json& node, const std::string& path) {
  Fields f(node, path);
  const std::string family = f.string("family");
  IntensityProfile p = guarded(path, [&] {
    if (family == "constant") return IntensityProfile::constant(f.number("rate"));
    if (family == "power") {
      const double alpha = f.number("alpha");
      return IntensityProfile::power(alpha, f.number("beta"));
    }
    if (family == "tabulated") return IntensityProfile::tabulated(read_knots(f));
    throw InputError(f.child("family") + ": unknown family '" + family + "'");
  });
  f.finish();
  return p;
}

json write_intensity(const IntensityProfile& p) {
  switch (p.family()) {
    case IntensityProfile::Family::kConstant:
      return {{"family", "constant"}, {"rate", p.alpha()}};
    case IntensityProfile::Family::kPower:
      return {{"family", "power"}, {"alpha", p.alpha()}, {"beta", p.beta()}};
    case IntensityProfile::Family::kTabulated:
      return {{"family", "tabulated"}, {"knots", write_knots(p.table())}};
  }
  return {};
}

FatalityProfile read_fatality(const json& node, const std::string& path) {
  Fields f(node, path);
  const std::string family = f.string("family");
  FatalityProfile p = guarded(path, [&] {
    if (family == "constant") return FatalityProfile::constant(f.number("q"));
    if (family == "exp_decay") return FatalityProfile::exp_decay(f.number("a"));
    if (family == "exp_growth") return FatalityProfile::exp_growth(f.number("a"));
    if (family == "tabulated") return FatalityProfile::tabulated(read_knots(f));
    throw InputError(f.child("family") + ": unknown family '" + family + "'");
  });
  f.finish();
  return p;
}

json write_fatality(const FatalityProfile& p) {
  switch (p.family()) {
    case FatalityProfile::Family::kConstant:
      return {{"family", "constant"}, {"q", p.parameter()}};
    case FatalityProfile::Family::kExpDecay:
      return {{"family", "exp_decay"}, {"a", p.parameter()}};
    case FatalityProfile::Family::kExpGrowth:
      return {{"family", "exp_growth"}, {"a", p.parameter()}};
    case FatalityProfile::Family::kTabulated:
      return {{"family", "tabulated"}, {"knots", write_knots(p.table())}};
  }
  return {};
}

HazardProfile read_hazard(const json& node, const std::string& path) {
  Fields f(node, path);
  const std::string family = f.string("family");
  HazardProfile p = guarded(path, [&] {
    if (family == "none") return HazardProfile::none();
    if (family == "constant") return HazardProfile::constant(f.number("rate"));
    if (family == "power") {
      const double alpha = f.number("alpha");
      return HazardProfile::power(alpha, f.number("beta"));
    }
    if (family == "tabulated") return HazardProfile::tabulated(read_knots(f));
    throw InputError(f.child("family") + ": unknown family '" + family + "'");
  });
  f.finish();
  return p;
}

json write_hazard(const HazardProfile& p) {
  switch (p.family()) {
    case HazardProfile::Family::kNone:
      return {{"family", "none"}};
    case HazardProfile::Family::kConstant:
      return {{"family", "constant"}, {"rate", p.alpha()}};
    case HazardProfile::Family::kPower:
      return {{"family", "power"}, {"alpha", p.alpha()}, {"beta", p.beta()}};
    case HazardProfile::Family::kTabulated:
      return {{"family", "tabulated"}, {"knots", write_knots(p.table())}};
  }
  return {};
}

DegradationLaw read_degradation(const json& node, const std::string& path) {
  Fields f(node, path);
  const std::string family = f.string("family");
  DegradationLaw d = guarded(path, [&] {
    if (family == "none") return DegradationLaw::none();
    if (family == "drift") return DegradationLaw::drift(f.number("c"));
    if (family == "gamma") {
      const double alpha = f.number("alpha");
      return DegradationLaw::gamma(alpha, f.number("beta"));
    }
    throw InputError(f.child("family") + ": unknown family '" + family + "'");
  });
  f.finish();
  return d;
}

json write_degradation(const DegradationLaw& d) {
  switch (d.family()) {
    case DegradationLaw::Family::kNone:
      return {{"family", "none"}};
    case DegradationLaw::Family::kDrift:
      return {{"family", "drift"}, {"c", d.rate()}};
    case DegradationLaw::Family::kGamma:
      return {{"family", "gamma"}, {"alpha", d.rate()}, {"beta", d.scale()}};
  }
  return {};
}

MarginalLaw read_marginal(const json& node, const std::string& path) {
  Fields f(node, path);
  const std::string law = f.string("law");
  MarginalLaw m = guarded(path, [&] {
    if (law == "degenerate") return MarginalLaw::degenerate(f.number("value"));
    if (law == "exponential") return MarginalLaw::exponential(f.number("rate"));
    if (law == "gamma") {
      const double shape = f.number("shape");
      return MarginalLaw::gamma(shape, f.number("rate"));
    }
    throw InputError(f.child("law") + ": unknown law '" + law + "'");
  });
  f.finish();
  return m;
}

json write_marginal(const MarginalLaw& m) {
  switch (m.family()) {
    case MarginalLaw::Family::kDegenerate:
      return {{"law", "degenerate"}, {"value", m.value()}};
    case MarginalLaw::Family::kExponential:
      return {{"law", "exponential"}, {"rate", m.rate()}};
    case MarginalLaw::Family::kGamma:
      return {{"law", "gamma"}, {"shape", m.shape()}, {"rate", m.rate()}};
  }
  return {};
}

IncrementLaw read_increments(const json& node, const std::string& path) {
  Fields f(node, path);
  const std::string structure = f.string("structure");
  IncrementLaw law = [&] {
    if (structure == "independent") {
      const MarginalLaw v1 = read_marginal(f.get("v1"), f.child("v1"));
      return IncrementLaw::independent(v1, read_marginal(f.get("v2"), f.child("v2")));
    }
    if (structure == "complete_dependence")
      return IncrementLaw::complete_dependence(read_marginal(f.get("v"), f.child("v")));
    if (structure == "additive") {
      const MarginalLaw v1 = read_marginal(f.get("v1"), f.child("v1"));
      return IncrementLaw::additive(v1, read_marginal(f.get("w2"), f.child("w2")));
    }
    throw InputError(f.child("structure") + ": unknown structure '" + structure + "'");
  }();
  f.finish();
  return law;
}

json write_increments(const IncrementLaw& law) {
  switch (law.structure()) {
    case IncrementLaw::Structure::kIndependent:
      return {{"structure", "independent"},
              {"v1", write_marginal(law.first())},
              {"v2", write_marginal(law.second())}};
    case IncrementLaw::Structure::kCompleteDependence:
      return {{"structure", "complete_dependence"}, {"v", write_marginal(law.second())}};
    case IncrementLaw::Structure::kAdditive:
      return {{"structure", "additive"},
              {"v1", write_marginal(law.first())},
              {"w2", write_marginal(law.second())}};
  }
  return {};
}

RunSettings read_run(const json& node, const std::string& path) {
  Fields f(node, path);
  RunSettings run;
  if (f.has("method")) {
    const std::string name = f.string("method");
    run.method = guarded(f.child("method"), [&] { return parse_eval_method(name); });
  }
  if (f.has("timeGrid")) {
    const json& g = f.get("timeGrid");
    const std::string gpath = f.child("timeGrid");
    if (g.is_string()) {
      run.time_grid = guarded(gpath, [&] { return parse_time_grid(g.get<std::string>()); });
    } else if (g.is_array()) {
      if (g.empty()) throw InputError(gpath + ": time grid is empty");
      run.time_grid.clear();
      for (const json& t : g) {
        if (!t.is_number() || !(t.get<double>() >= 0.0))
          throw InputError(gpath + ": times must be non-negative numbers");
        run.time_grid.push_back(t.get<double>());
      }
    } else {
      throw InputError(gpath + ": expected \"start:stop:count\" or an array");
    }
  }
  if (f.has("histories")) run.histories = f.unsigned_integer("histories");
  if (f.has("seed")) run.seed = f.unsigned_integer("seed");
  if (f.has("tolerance")) {
    run.tolerance = f.number("tolerance");
    if (!(run.tolerance > 0.0)) throw InputError(f.child("tolerance") + ": must be > 0");
  }
  f.finish();
  return run;
}

SpecDocument make_doc(ModelSpec model) {
  model.validate();
  SpecDocument doc;
  doc.model = std::move(model);
  return doc;
}

ModelSpec base_model(double threshold) {
  ModelSpec m;
  m.intensity = IntensityProfile::constant(1.0);
  m.threshold = threshold;
  return m;
}

std::vector<BuiltinSpec> make_builtins() {
  const MarginalLaw exp1 = MarginalLaw::exponential(1.0);
  std::vector<BuiltinSpec> out;

  ModelSpec indep = base_model(2.0);
  indep.fatality = FatalityProfile::exp_decay(1.0);
  indep.increments = IncrementLaw::independent(exp1, exp1);
  out.push_back({"validation-independent",
                 "q(x) = exp(-x), independent Exp(1) increments, lambda = 1, L = 2",
                 make_doc(indep)});

  ModelSpec complete = base_model(2.0);
  complete.fatality = FatalityProfile::constant(0.5);
  complete.increments = IncrementLaw::complete_dependence(exp1);
  out.push_back({"validation-complete", "q = 0.5, V1 = V2 ~ Exp(1), lambda = 1, L = 2",
                 make_doc(complete)});

  ModelSpec additive = indep;
  additive.increments = IncrementLaw::additive(exp1, exp1);
  out.push_back({"validation-additive",
                 "q(x) = exp(-x), V2 = V1 + W with V1, W ~ Exp(1), lambda = 1, L = 2",
                 make_doc(additive)});

  out.push_back({"nbu-decreasing-q",
                 "q(x) = exp(-x), independent Exp(1) increments, lambda = 1, L = 2",
                 make_doc(indep)});

  ModelSpec growth = indep;
  growth.fatality = FatalityProfile::exp_growth(3.0);
  growth.threshold = 4.0;
  out.push_back({"nbu-increasing-q",
                 "q(x) = 1 - exp(-3x), independent Exp(1) increments, lambda = 1, L = 4",
                 make_doc(growth)});

  ModelSpec dep_indep = base_model(2.0);
  dep_indep.increments = IncrementLaw::independent(exp1, exp1);
  out.push_back({"dependence-independent", "q = 1, independent Exp(1) increments, L = 2",
                 make_doc(dep_indep)});

  ModelSpec dep_complete = dep_indep;
  dep_complete.increments = IncrementLaw::complete_dependence(exp1);
  out.push_back({"dependence-complete", "q = 1, V1 = V2 ~ Exp(1), L = 2",
                 make_doc(dep_complete)});

  ModelSpec high = base_model(2.0);
  high.intensity = IntensityProfile::constant(2.0);
  high.fatality = FatalityProfile::exp_growth(1.0);
  high.increments = IncrementLaw::independent(MarginalLaw::degenerate(1.0), exp1);
  out.push_back({"intensity-high", "lambda = 2, q(x) = 1 - exp(-x), V1 = 1, V2 ~ Exp(1), L = 2",
                 make_doc(high)});

  ModelSpec low = high;
  low.intensity = IntensityProfile::constant(1.0);
  out.push_back({"intensity-low", "lambda = 1, q(x) = 1 - exp(-x), V1 = 1, V2 ~ Exp(1), L = 2",
                 make_doc(low)});

  return out;
}

}  // namespace

RunSettings::RunSettings() : time_grid(kDefaultGridPoints) {
  for (int i = 0; i < kDefaultGridPoints; ++i)
    time_grid[i] = kDefaultGridEnd * i / (kDefaultGridPoints - 1);
}

std::vector<double> parse_time_grid(const std::string& text) {
  const auto bad = [&] {
    return InputError("time grid '" + text + "': expected start:stop:count");
  };
  const auto first = text.find(':');
  const auto second = first == std::string::npos ? first : text.find(':', first + 1);
  if (second == std::string::npos || text.find(':', second + 1) != std::string::npos) throw bad();

  const auto parse_double = [&](std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) throw bad();
    return v;
  };
  const std::string_view view(text);
  const double start = parse_double(view.substr(0, first));
  const double stop = parse_double(view.substr(first + 1, second - first - 1));
  long count = 0;
  {
    const std::string_view c = view.substr(second + 1);
    const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), count);
    if (ec != std::errc() || ptr != c.data() + c.size() || c.empty()) throw bad();
  }
  if (count <= 0) throw InputError("time grid '" + text + "' is empty");
  if (!(start >= 0.0) || !(stop >= start))
    throw InputError("time grid '" + text + "': needs 0 <= start <= stop");
  if (count == 1) return {start};
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i)
    grid[static_cast<std::size_t>(i)] =
        i == count - 1 ? stop : start + (stop - start) * static_cast<double>(i) /
                                            static_cast<double>(count - 1);
  return grid;
}

SpecDocument parse_spec_document(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed document: ") + e.what());
  }
  Fields f(root, "");
  SpecDocument doc;
  doc.model.intensity = read_intensity(f.get("intensity"), "intensity");
  doc.model.fatality = read_fatality(f.get("fatality"), "fatality");
  if (f.has("hazard")) doc.model.hazard = read_hazard(f.get("hazard"), "hazard");
  if (f.has("degradation"))
    doc.model.degradation = read_degradation(f.get("degradation"), "degradation");
  doc.model.increments = read_increments(f.get("increments"), "increments");
  doc.model.threshold = f.number("threshold");
  if (f.has("run")) doc.run = read_run(f.get("run"), "run");
  f.finish();
  guarded("document", [&] {
    doc.model.validate();
    return 0;
  });
  return doc;
}

SpecDocument load_spec_document(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open spec file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_spec_document(buffer.str());
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::string serialize_spec_document(const SpecDocument& doc) {
  json root;
  root["intensity"] = write_intensity(doc.model.intensity);
  root["fatality"] = write_fatality(doc.model.fatality);
  root["hazard"] = write_hazard(doc.model.hazard);
  root["degradation"] = write_degradation(doc.model.degradation);
  root["increments"] = write_increments(doc.model.increments);
  root["threshold"] = doc.model.threshold;
  root["run"] = {{"method", to_string(doc.run.method)},
                 {"timeGrid", doc.run.time_grid},
                 {"histories", doc.run.histories},
                 {"seed", doc.run.seed},
                 {"tolerance", doc.run.tolerance}};
  return root.dump(2) + "\n";
}

const std::vector<BuiltinSpec>& builtin_specs() {
  static const std::vector<BuiltinSpec> specs = make_builtins();
  return specs;
}

const SpecDocument& builtin_spec(const std::string& name) {
  for (const auto& s : builtin_specs())
    if (s.name == name) return s.document;
  throw InputError("unknown built-in spec '" + name + "'");
}

}  // namespace shockrel
