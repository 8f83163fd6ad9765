#include <benchmark/benchmark.h>

#include "pfspec/spectral_scan.hpp"

using namespace pfspec;

static void BM_DavidsonGroundCluster(benchmark::State& state) {
  const ModeGrid grid = build_grid({std::ldexp(1.0, -static_cast<int>(state.range(0))), 1.0}, 1, 2);
  const FiberSpace space = make_fiber_space(grid, {1.0, 1.0}, 1, 2);
  const FiberOperator k = assemble_K(space, 0.02, 0.0);
  SolverOptions options;
  options.n_pairs = 6;
  for (auto _ : state) {
    const SpectrumResult spectrum = lowest_eigenpairs(k, 6, options, &space);
    benchmark::DoNotOptimize(spectrum.eigenvalues(0));
  }
  state.counters["dim"] = static_cast<double>(space.dim());
}
BENCHMARK(BM_DavidsonGroundCluster)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_FeshbachSchur(benchmark::State& state) {
  const ModeGrid grid = build_grid({0.125, 1.0}, 1, 2);
  const FiberSpace space = make_fiber_space(grid, {1.0, 1.0}, 1, 2);
  const FiberOperator k0 = assemble_K0(space, 0.0);
  const FiberOperator w = assemble_W(space, 0.02, 0.0);
  SolverOptions options;
  options.n_pairs = 4;
  const SpectrumResult spectrum = lowest_eigenpairs(k0 + w, 4, options, &space);
  FeshbachOptions fopts;
  fopts.check_inner_positivity = false;
  for (auto _ : state) {
    const FeshbachOperator fesh =
        feshbach_operator(space, k0, w, spectrum.eigenvalues(0), 0.0, fopts);
    benchmark::DoNotOptimize(fesh.matrix(0, 0));
  }
}
BENCHMARK(BM_FeshbachSchur)->Unit(benchmark::kMillisecond);
