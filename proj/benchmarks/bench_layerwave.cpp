#include <benchmark/benchmark.h>

#include <layerwave/continuation.hpp>
#include <layerwave/dynamics.hpp>
#include <layerwave/localbranch.hpp>
#include <layerwave/pencil.hpp>
#include <layerwave/steady.hpp>

using namespace layerwave;

namespace {

const LayerConfig& symmetric() {
  static const auto cfg = classify_config({-1, 1, -1, 1});
  return cfg;
}

LocalExpansion origin() { return local_expansion(1, symmetric(), bifurcation_speeds(1, symmetric()).admissible().back()); }

void BM_QuarticRoots(benchmark::State& state) {
  const auto cfg = classify_config({0, 1, 2.5, 3.5});
  const auto poly = det_poly(static_cast<int>(state.range(0)), cfg);
  for (auto _ : state) benchmark::DoNotOptimize(quartic_roots(poly));
}
BENCHMARK(BM_QuarticRoots)->Arg(1)->Arg(64);

void BM_Residual(benchmark::State& state) {
  const auto loc = origin();
  const auto [c, r] = predictor(loc, 0.1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(residual_F(loc.cfg, c, r));
}
BENCHMARK(BM_Residual)->RangeMultiplier(2)->Range(16, 256);

void BM_Jacobian(benchmark::State& state) {
  const auto loc = origin();
  const auto [c, r] = predictor(loc, 0.1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(jacobian_dr(loc.cfg, c, r));
}
BENCHMARK(BM_Jacobian)->RangeMultiplier(2)->Range(16, 128);

void BM_NewtonFromPredictor(benchmark::State& state) {
  const auto loc = origin();
  const auto [c, guess] = predictor(loc, 0.05, static_cast<int>(state.range(0)));
  ArclengthConstraint pin;
  pin.anchor = pack(c, guess);
  for (auto _ : state) benchmark::DoNotOptimize(newton_correct(loc.cfg, c, guess, pin, {}));
}
BENCHMARK(BM_NewtonFromPredictor)->Arg(32)->Arg(64);

void BM_RK4Step(benchmark::State& state) {
  const auto loc = origin();
  const auto r = phase_state(predictor(loc, 0.1, static_cast<int>(state.range(0))).second);
  const double dt = max_stable_dt(loc.cfg, r);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(loc.cfg, r, dt, 1, {0, 0}));
}
BENCHMARK(BM_RK4Step)->Arg(32)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
