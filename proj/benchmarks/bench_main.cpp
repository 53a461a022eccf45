#include <benchmark/benchmark.h>

#include <cmath>

#include <random>

#include "alber/dynamics.hpp"
#include "alber/inequality_lab.hpp"
#include "alber/penrose.hpp"

namespace {

using namespace alber;

MixedState bench_state(int cutoff, int rank) {
  EnsembleConfig c;
  c.cutoff = cutoff;
  c.rank_min = c.rank_max = rank;
  c.decay = 3.0;
  auto rng = sample_engine(1, 0);
  return random_state(SpectralGrid(cutoff), c, rng);
}

BackgroundSymbol broad(int support) {
  std::vector<double> v(2 * support + 1);
  for (int n = -support; n <= support; ++n) v[n + support] = 0.1 * std::pow(bracket(n), -4.0);
  return BackgroundSymbol(std::move(v));
}

void BM_StrangStep(benchmark::State& state) {
  const MixedState s0 = bench_state(static_cast<int>(state.range(0)), 4);
  EvolveConfig cfg;
  cfg.dt = 1e-3;
  MixedState s = s0;
  for (auto _ : state) {
    s = strang_step(s, cfg);
    benchmark::DoNotOptimize(s.orbitals().front().coeffs().data());
  }
}
BENCHMARK(BM_StrangStep)->Arg(16)->Arg(64)->Arg(256);

void BM_PenroseMargin(benchmark::State& state) {
  const BackgroundSymbol bg = broad(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(penrose_margin(bg, 1.0, -1.0, 3).margin);
  }
}
BENCHMARK(BM_PenroseMargin)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_VolterraSolve(benchmark::State& state) {
  const BackgroundSymbol bg = broad(8);
  OperatorMatrix u0(SpectralGrid(10));
  for (int j = -10; j < 10; ++j) u0(j + 1, j) = 1.0 / (1.0 + j * j);
  const double dt = 10.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(volterra_solve(bg, u0, 1.0, -1.0, 1, dt, 10.0).rho.back());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_VolterraSolve)->Arg(1000)->Arg(10000)->Arg(100000)->Complexity()->Unit(
    benchmark::kMillisecond);

void BM_LinearizedEvolve(benchmark::State& state) {
  const BackgroundSymbol bg = broad(8);
  OperatorMatrix u0(SpectralGrid(static_cast<int>(state.range(0))));
  u0(1, 0) = 1.0;
  EvolveConfig cfg;
  cfg.q = -1.0;
  cfg.dt = 1e-3;
  cfg.horizon = 1.0;
  cfg.record_every = 1000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(linearized_evolve(u0, bg, cfg).times.size());
  }
}
BENCHMARK(BM_LinearizedEvolve)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
