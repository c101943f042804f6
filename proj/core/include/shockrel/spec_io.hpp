#pragma once

// JSON spec documents. Layout (all numbers are JSON numbers):
//
//   {
//     "intensity":   {"family": "constant", "rate": 1}
//                  | {"family": "power", "alpha": a, "beta": b}
//                  | {"family": "tabulated", "knots": [[t, value], ...]},
//     "fatality":    {"family": "constant", "q": 0.5}
//                  | {"family": "exp_decay" | "exp_growth", "a": 1}
//                  | {"family": "tabulated", "knots": [[t, q], ...]},
//     "hazard":      {"family": "none"} | {"family": "constant", "rate": r}
//                  | {"family": "power", "alpha": a, "beta": b}
//                  | {"family": "tabulated", "knots": [...]},          optional, default none
//     "degradation": {"family": "none"} | {"family": "drift", "c": c}
//                  | {"family": "gamma", "alpha": a, "beta": b},      optional, default none
//     "increments":  {"structure": "independent", "v1": M, "v2": M}
//                  | {"structure": "complete_dependence", "v": M}
//                  | {"structure": "additive", "v1": M, "w2": M},
//     "threshold":   L,
//     "run": {"method": "auto", "timeGrid": "0:3:61" | [t, ...],
//             "histories": 100000, "seed": 20140831, "tolerance": 1e-10}  optional
//   }
//
// with marginals M = {"law": "degenerate", "value": c}
//                  | {"law": "exponential", "rate": theta}
//                  | {"law": "gamma", "shape": k, "rate": theta}.
// Unknown keys are rejected.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "shockrel/analysis.hpp"
#include "shockrel/model.hpp"

namespace shockrel {

struct RunSettings {
  EvalMethod method = EvalMethod::kAuto;
  std::vector<double> time_grid;  // 61 points on [0, 3]
  std::uint64_t histories = 100000;
  std::uint64_t seed = 20140831;
  double tolerance = 1e-10;

  RunSettings();

  friend bool operator==(const RunSettings&, const RunSettings&) = default;
};

struct SpecDocument {
  ModelSpec model;
  RunSettings run;

  friend bool operator==(const SpecDocument&, const SpecDocument&) = default;
};

/// "start:stop:count" -> count equally spaced points. Throws InputError on a
/// malformed or empty grid.
std::vector<double> parse_time_grid(const std::string& text);

/// Throws InputError naming the offending field path (e.g. increments.v1.rate).
SpecDocument parse_spec_document(const std::string& text);
SpecDocument load_spec_document(const std::filesystem::path& path);
std::string serialize_spec_document(const SpecDocument& doc);

struct BuiltinSpec {
  std::string name;
  std::string description;
  SpecDocument document;
};

const std::vector<BuiltinSpec>& builtin_specs();
/// Throws InputError for an unknown name.
const SpecDocument& builtin_spec(const std::string& name);

}  // namespace shockrel
