#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "shockrel/model.hpp"
#include "shockrel/rng.hpp"

namespace shockrel {

/// Shocks on [0, t] for one simulated history.
struct ShockHistory {
  std::vector<double> times;                           // T_1 < ... < T_N
  std::vector<std::pair<double, double>> increments;   // (V1_i, V2_i)
  std::vector<std::uint8_t> harmless;                  // Z_i: 1 = non-fatal shock

  std::size_t size() const noexcept { return times.size(); }
  void clear() noexcept {
    times.clear();
    increments.clear();
    harmless.clear();
  }
};

struct McConfig {
  std::uint64_t histories = 100000;
  std::uint64_t seed = 20140831;
  /// 0 picks std::thread::hardware_concurrency(). Results do not depend on it.
  unsigned workers = 0;
};

struct McResult {
  double estimate = 0.0;
  double half_width95 = 0.0;
  std::uint64_t histories = 0;
  std::uint64_t seed = 0;
};

/// Streaming mean/variance of a block of histories (Chan et al. merge).
struct McMoments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept;
  static McMoments merge(const McMoments& a, const McMoments& b) noexcept;
  double sample_variance() const noexcept;
};

/// Runs `histories` independent draws of `sample` and reduces them.
///
/// History i draws only from RngStream(seed, i). Histories are grouped into
/// fixed blocks and block moments are merged in a fixed pairwise tree, so the
/// result is bit-identical for any number of workers.
McMoments run_histories(std::uint64_t histories, std::uint64_t seed, unsigned workers,
                        const std::function<double(RngStream&)>& sample);

/// Shock arrival times, increments and fatality outcomes on [0, t].
ShockHistory sample_shock_history(const ModelSpec& spec, double t, RngStream& rng);
void sample_shock_history(const ModelSpec& spec, double t, RngStream& rng, ShockHistory& out);

/// Lifetime Y of the sudden-failure component given the shock history, whose
/// conditional cumulative hazard is H(s) + sum_{T_i <= s} V1_i (s - T_i).
/// Returns +infinity when Y exceeds the horizon t (the only fact needed).
double sample_sudden_lifetime(const HazardProfile& hazard, const ShockHistory& history,
                              double t, RngStream& rng);

/// Full-trajectory simulation: mean of 1{Y > t} 1{G_t + sum V2 <= L} prod Z_i.
McResult estimate_reliability_mc1(const ModelSpec& spec, double t, const McConfig& cfg = {});

/// Conditional-expectation estimator of phi_t(L):
/// mean of F_{G_t}(L - sum V2) exp(-sum V1 (t - T_i)) prod q(T_i).
McResult estimate_phi_mc2(const ModelSpec& spec, double t, const McConfig& cfg = {});

ReliabilityEstimate reliability_mc1(const ModelSpec& spec, double t, const McConfig& cfg = {});
ReliabilityEstimate reliability_mc2(const ModelSpec& spec, double t, const McConfig& cfg = {});

}  // namespace shockrel
