#include <benchmark/benchmark.h>

#include "pfspec/feshbach_effective.hpp"
#include "pfspec/quadrature.hpp"

using namespace pfspec;

static void BM_GaussLegendre(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto rule = gauss_legendre(n, 0.0, 1.0);
    benchmark::DoNotOptimize(rule.nodes.data());
  }
}
BENCHMARK(BM_GaussLegendre)->Arg(8)->Arg(32)->Arg(128);

static void BM_BuildGrid(benchmark::State& state) {
  const int n_radial = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const ModeGrid grid = build_grid({1.0 / 256.0, 1.0}, n_radial, 2);
    benchmark::DoNotOptimize(grid.size());
  }
}
BENCHMARK(BM_BuildGrid)->Arg(1)->Arg(4)->Arg(12);

static void BM_GammaIntegrals(benchmark::State& state) {
  const ModeGrid quad = build_grid({1.0 / 256.0, 1.0}, static_cast<int>(state.range(0)), 4);
  const Masses masses{1.0, 1.0};
  for (auto _ : state) {
    const GammaIntegrals g = gamma_integrals(0.1, quad.window(), masses, quad);
    benchmark::DoNotOptimize(g.gamma0);
  }
  state.SetItemsProcessed(state.iterations() * quad.size());
}
BENCHMARK(BM_GammaIntegrals)->Arg(2)->Arg(8);

static void BM_SharpCoefficients(benchmark::State& state) {
  const ModeGrid quad = build_grid({1.0 / 64.0, 1.0}, 4, 4);
  const Masses masses{1.0, 1.0};
  for (auto _ : state) {
    const Eigen::Vector3d c = gamma_sharp_coefficients(0.1, quad.window(), masses, quad);
    benchmark::DoNotOptimize(c(0));
  }
}
BENCHMARK(BM_SharpCoefficients);
