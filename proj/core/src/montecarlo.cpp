#include "shockrel/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "shockrel/error.hpp"
#include "shockrel/numerics.hpp"

namespace shockrel {

namespace {

constexpr std::uint64_t kBlockSize = 1024;
constexpr double kZ95 = 1.96;

McMoments reduce_tree(std::vector<McMoments> level) {
  if (level.empty()) return {};
  while (level.size() > 1) {
    std::vector<McMoments> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2)
      next.push_back(McMoments::merge(level[i], level[i + 1]));
    if (level.size() % 2 == 1) next.push_back(level.back());
    level = std::move(next);
  }
  return level.front();
}

void require_histories(const McConfig& cfg) {
  if (cfg.histories < 100) throw InputError("Monte Carlo needs at least 100 histories");
}

}  // namespace

void McMoments::add(double x) noexcept {
  ++count;
  const double delta = x - mean;
  mean += delta / static_cast<double>(count);
  m2 += delta * (x - mean);
}

McMoments McMoments::merge(const McMoments& a, const McMoments& b) noexcept {
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  McMoments out;
  out.count = a.count + b.count;
  const double na = static_cast<double>(a.count);
  const double nb = static_cast<double>(b.count);
  const double n = static_cast<double>(out.count);
  const double delta = b.mean - a.mean;
  out.mean = a.mean + delta * nb / n;
  out.m2 = a.m2 + b.m2 + delta * delta * na * nb / n;
  return out;
}

double McMoments::sample_variance() const noexcept {
  return count > 1 ? std::max(0.0, m2 / static_cast<double>(count - 1)) : 0.0;
}

McMoments run_histories(std::uint64_t histories, std::uint64_t seed, unsigned workers,
                        const std::function<double(RngStream&)>& sample) {
  const std::uint64_t blocks = (histories + kBlockSize - 1) / kBlockSize;
  std::vector<McMoments> block_moments(blocks);
  std::atomic<std::uint64_t> next_block{0};

  auto work = [&] {
    for (;;) {
      const std::uint64_t b = next_block.fetch_add(1);
      if (b >= blocks) return;
      McMoments m;
      const std::uint64_t end = std::min(histories, (b + 1) * kBlockSize);
      for (std::uint64_t i = b * kBlockSize; i < end; ++i) {
        RngStream rng(seed, i);
        m.add(sample(rng));
      }
      block_moments[b] = m;
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(blocks, 1)));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return reduce_tree(std::move(block_moments));
}

void sample_shock_history(const ModelSpec& spec, double t, RngStream& rng, ShockHistory& out) {
  if (!(t >= 0.0)) throw DomainError("sample_shock_history: negative horizon");
  out.clear();
  const double total = spec.intensity.cumulative(t);
  if (!std::isfinite(total)) throw DomainError("sample_shock_history: Lambda(t) is not finite");
  if (total <= 0.0) return;

  std::poisson_distribution<long> count_dist(total);
  const long n = count_dist(rng);
  if (n == 0) return;

  out.times.resize(static_cast<std::size_t>(n));
  for (auto& w : out.times) w = spec.intensity.inverse_cumulative(rng.uniform_open() * total, t);
  std::sort(out.times.begin(), out.times.end());

  out.harmless.resize(out.times.size());
  for (std::size_t i = 0; i < out.times.size(); ++i)
    out.harmless[i] = rng.uniform_open() < spec.fatality.survive(out.times[i]) ? 1 : 0;

  out.increments.resize(out.times.size());
  for (auto& v : out.increments) v = spec.increments.sample(rng);
}

ShockHistory sample_shock_history(const ModelSpec& spec, double t, RngStream& rng) {
  ShockHistory h;
  sample_shock_history(spec, t, rng, h);
  return h;
}

double sample_sudden_lifetime(const HazardProfile& hazard, const ShockHistory& history, double t,
                              RngStream& rng) {
  constexpr double kCensored = std::numeric_limits<double>::infinity();
  const double target = -std::log(rng.uniform_open());

  auto kappa = [&](double s) {
    double k = 0.0;
    for (std::size_t i = 0; i < history.size() && history.times[i] <= s; ++i)
      k += history.increments[i].first * (s - history.times[i]);
    return k;
  };

  const double total = hazard.cumulative(t) + kappa(t);
  if (target > total) return kCensored;

  if (hazard.family() != HazardProfile::Family::kNone)
    return invert_monotone([&](double s) { return hazard.cumulative(s) + kappa(s); }, target,
                           0.0, t);

  // h = 0: kappa is piecewise linear, kappa^{-1}(u) = (u + sum T_i V_i) / sum V_i
  // on the segment [T_j, T_{j+1}) containing u.
  double slope = 0.0;
  double weighted = 0.0;
  for (std::size_t j = 0; j < history.size(); ++j) {
    slope += history.increments[j].first;
    weighted += history.increments[j].first * history.times[j];
    const double seg_end = j + 1 < history.size() ? history.times[j + 1] : t;
    if (slope > 0.0 && slope * seg_end - weighted >= target)
      return std::min((target + weighted) / slope, t);
  }
  return t;
}

McResult estimate_reliability_mc1(const ModelSpec& spec, double t, const McConfig& cfg) {
  require_histories(cfg);
  const double threshold = spec.threshold;
  auto one = [&](RngStream& rng) {
    thread_local ShockHistory history;
    const double degradation = spec.degradation.sample(t, rng);
    sample_shock_history(spec, t, rng, history);
    const double lifetime = sample_sudden_lifetime(spec.hazard, history, t, rng);
    double damage = degradation;
    bool all_harmless = true;
    for (std::size_t i = 0; i < history.size(); ++i) {
      damage += history.increments[i].second;
      all_harmless = all_harmless && history.harmless[i] != 0;
    }
    return (lifetime > t && damage <= threshold && all_harmless) ? 1.0 : 0.0;
  };
  const McMoments m = run_histories(cfg.histories, cfg.seed, cfg.workers, one);
  const double p = m.mean;
  return {p, kZ95 * std::sqrt(p * (1.0 - p) / static_cast<double>(m.count)), m.count, cfg.seed};
}

McResult estimate_phi_mc2(const ModelSpec& spec, double t, const McConfig& cfg) {
  require_histories(cfg);
  const double threshold = spec.threshold;
  auto one = [&](RngStream& rng) {
    thread_local ShockHistory history;
    sample_shock_history(spec, t, rng, history);
    double damage = 0.0;
    double exponent = 0.0;
    double survive = 1.0;
    for (std::size_t i = 0; i < history.size(); ++i) {
      damage += history.increments[i].second;
      exponent += history.increments[i].first * (t - history.times[i]);
      survive *= spec.fatality.survive(history.times[i]);
    }
    return spec.degradation.cdf(t, threshold - damage) * std::exp(-exponent) * survive;
  };
  const McMoments m = run_histories(cfg.histories, cfg.seed, cfg.workers, one);
  return {m.mean, kZ95 * std::sqrt(m.sample_variance() / static_cast<double>(m.count)), m.count,
          cfg.seed};
}

ReliabilityEstimate reliability_mc1(const ModelSpec& spec, double t, const McConfig& cfg) {
  const McResult r = estimate_reliability_mc1(spec, t, cfg);
  return {t, r.estimate, Method::kMc1, ReliabilityEstimate::Uncertainty::kCi95, r.half_width95};
}

ReliabilityEstimate reliability_mc2(const ModelSpec& spec, double t, const McConfig& cfg) {
  const McResult r = estimate_phi_mc2(spec, t, cfg);
  const double survival = std::exp(-spec.hazard.cumulative(t));
  return {t, reliability_factorization(spec, t, r.estimate), Method::kMc2,
          ReliabilityEstimate::Uncertainty::kCi95, survival * r.half_width95};
}

}  // namespace shockrel
