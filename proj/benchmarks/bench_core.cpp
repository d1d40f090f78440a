#include <benchmark/benchmark.h>

#include <cmath>

#include "fpk/evolution.hpp"
#include "fpk/fields.hpp"
#include "fpk/grid.hpp"
#include "fpk/operator.hpp"
#include "fpk/spectral.hpp"

using namespace fpk;

namespace {

GridPtr grid_1d(int n) { return build_grid(1, 8.0, n); }

void BM_AssembleOperator1D(benchmark::State& state) {
  auto g = grid_1d(static_cast<int>(state.range(0)));
  const auto E = ForceField::linear(1);
  for (auto _ : state) {
    auto op = assemble_operator(g, E);
    benchmark::DoNotOptimize(op.matrix().nonZeros());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AssembleOperator1D)->Arg(101)->Arg(401)->Arg(1601)->Complexity();

void BM_AssembleOperator2D(benchmark::State& state) {
  auto g = build_grid(2, 6.0, static_cast<int>(state.range(0)));
  const auto E = ForceField::gradient_power_plus_rotation(1.5, 1.0);
  for (auto _ : state) {
    auto op = assemble_operator(g, E);
    benchmark::DoNotOptimize(op.matrix().nonZeros());
  }
}
BENCHMARK(BM_AssembleOperator2D)->Arg(51)->Arg(101);

void BM_StationarySolve(benchmark::State& state) {
  auto g = grid_1d(static_cast<int>(state.range(0)));
  const auto op = assemble_operator(g, ForceField::linear(1));
  for (auto _ : state) {
    auto st = stationary(op, 1e-10, 50);
    benchmark::DoNotOptimize(st.residual);
  }
}
BENCHMARK(BM_StationarySolve)->Arg(401)->Arg(1601);

void BM_ImplicitEulerStep(benchmark::State& state) {
  auto g = build_grid(2, 6.0, static_cast<int>(state.range(0)));
  const auto op = assemble_operator(g, ForceField::gradient_power_plus_rotation(1.5, 1.0));
  Stepper s(op, 0.01);
  GridFunction f = sample_on_grid(g, [](const Vec& x) { return std::exp(-x.norm_sq()); });
  for (auto _ : state) {
    f = s.step(f);
    benchmark::DoNotOptimize(f[0]);
  }
}
BENCHMARK(BM_ImplicitEulerStep)->Arg(51)->Arg(101);

void BM_WeightedNorm(benchmark::State& state) {
  auto g = grid_1d(static_cast<int>(state.range(0)));
  const GridFunction f =
      sample_on_grid(g, [](const Vec& x) { return std::exp(-0.5 * x.norm_sq()); });
  for (auto _ : state) benchmark::DoNotOptimize(weighted_norm(f, 2.0, 2.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_WeightedNorm)->Arg(401)->Arg(1601)->Arg(6401)->Complexity();

void BM_DenseSpectrum(benchmark::State& state) {
  auto g = grid_1d(static_cast<int>(state.range(0)));
  const auto op = assemble_operator(g, ForceField::linear(1));
  for (auto _ : state) {
    auto spec = spectral_gap(op);
    benchmark::DoNotOptimize(spec.gap);
  }
}
BENCHMARK(BM_DenseSpectrum)->Arg(101)->Arg(201)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
