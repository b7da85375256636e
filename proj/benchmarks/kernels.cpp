#include <benchmark/benchmark.h>

#include <complex>
#include <numbers>
#include <vector>

#include "slogs/config.hpp"
#include "slogs/fft.hpp"
#include "slogs/noise.hpp"
#include "slogs/solver.hpp"

using namespace slogs;

namespace {

void BM_Fft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Fft fft(n);
  std::vector<std::complex<double>> data(n);
  for (std::size_t i = 0; i < n; ++i) data[i] = {std::cos(0.1 * i), std::sin(0.3 * i)};
  for (auto _ : state) {
    fft.forward(data);
    fft.inverse(data);
    benchmark::DoNotOptimize(data.data());
  }
  state.SetItemsProcessed(state.iterations() * 2);
}
BENCHMARK(BM_Fft)->RangeMultiplier(4)->Range(64, 4096);

struct Setup {
  Grid grid;
  EquationSpec eq;
  NoiseModel noise;
  ComplexField u0;
};

Setup make_setup(std::size_t n) {
  const Grid grid(1, 2.0 * std::numbers::pi, n, Boundary::PeriodicTorus);
  const EquationSpec eq{-1.0, RegKind::log_rational(1e-3)};
  NoiseSpec ns;
  ns.noise_case = NoiseCase::MultiplicativeReal;
  ns.spectrum = {3.0, 0.5, 8};
  ns.g = {GFamily::Rational, 1.0};
  ns.master_seed = 1;
  InitialCondition ic;
  ic.width = 0.7;
  auto u0 = ic.make(grid, eq);
  return {grid, eq, NoiseModel(grid, ns), std::move(u0)};
}

void run_steps(benchmark::State& state, Scheme scheme) {
  const auto s = make_setup(static_cast<std::size_t>(state.range(0)));
  SolverConfig cfg;
  cfg.scheme = scheme;
  cfg.dt = 2.5e-4;
  cfg.t_end = 1.0;
  const Stepper stepper(s.eq, s.noise, cfg);
  auto st = initial_state(s.u0, 0, cfg);
  for (auto _ : state) {
    st = stepper.step(st);
    benchmark::DoNotOptimize(st.u.values().data());
  }
}

void BM_StepSplit(benchmark::State& state) { run_steps(state, Scheme::SplitStep); }
void BM_StepExpEuler(benchmark::State& state) { run_steps(state, Scheme::ExpEuler); }
void BM_StepMidpoint(benchmark::State& state) { run_steps(state, Scheme::StratonovichMidpoint); }
BENCHMARK(BM_StepSplit)->Arg(256)->Arg(1024);
BENCHMARK(BM_StepExpEuler)->Arg(256)->Arg(1024);
BENCHMARK(BM_StepMidpoint)->Arg(256)->Arg(1024);

void BM_NoiseIncrement(benchmark::State& state) {
  const auto s = make_setup(static_cast<std::size_t>(state.range(0)));
  std::uint64_t step = 0;
  for (auto _ : state) {
    auto dw = sample_increment(s.noise, 2.5e-4, 0, step++);
    benchmark::DoNotOptimize(dw.values().data());
  }
}
BENCHMARK(BM_NoiseIncrement)->Arg(256)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
