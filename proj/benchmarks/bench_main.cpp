#include <benchmark/benchmark.h>

#include <cmath>

#include "shockrel/laplace.hpp"
#include "shockrel/montecarlo.hpp"
#include "shockrel/numerics.hpp"
#include "shockrel/series.hpp"
#include "shockrel/spec_io.hpp"

using namespace shockrel;

namespace {

const ModelSpec& spec(const char* name) { return builtin_spec(name).model; }

void BM_Series(benchmark::State& state) {
  const auto& s = spec("validation-independent");
  const double t = static_cast<double>(state.range(0)) / 4.0;
  for (auto _ : state) benchmark::DoNotOptimize(reliability_series(s, t));
}
BENCHMARK(BM_Series)->Arg(1)->Arg(4)->Arg(12);

void BM_LaplaceIndependent(benchmark::State& state) {
  const auto& s = spec("validation-independent");
  for (auto _ : state) benchmark::DoNotOptimize(reliability_laplace(s, 1.0, s.threshold));
}
BENCHMARK(BM_LaplaceIndependent);

void BM_LaplaceComplete(benchmark::State& state) {
  const auto& s = spec("validation-complete");
  for (auto _ : state) benchmark::DoNotOptimize(reliability_laplace(s, 1.0, s.threshold));
}
BENCHMARK(BM_LaplaceComplete);

void BM_Mc2(benchmark::State& state) {
  const auto& s = spec("validation-additive");
  McConfig cfg;
  cfg.histories = static_cast<std::uint64_t>(state.range(0));
  cfg.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_phi_mc2(s, 1.0, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Mc2)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_Mc1(benchmark::State& state) {
  const auto& s = spec("validation-additive");
  McConfig cfg;
  cfg.histories = 100000;
  cfg.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_reliability_mc1(s, 1.0, cfg));
  state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_Mc1)->Unit(benchmark::kMillisecond);

void BM_Quadrature(benchmark::State& state) {
  const auto f = [](double x) { return 1.0 / std::sqrt(x) + std::cos(5.0 * x); };
  for (auto _ : state) benchmark::DoNotOptimize(integrate(f, 0.0, 2.0));
}
BENCHMARK(BM_Quadrature);

void BM_ConvolveA(benchmark::State& state) {
  const auto& s = spec("validation-independent");
  for (auto _ : state) benchmark::DoNotOptimize(convolve_a(s, 1.5));
}
BENCHMARK(BM_ConvolveA);

}  // namespace

BENCHMARK_MAIN();
