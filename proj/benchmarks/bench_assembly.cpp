#include <benchmark/benchmark.h>

#include "pfspec/fock_hamiltonian.hpp"

using namespace pfspec;

namespace {

ModeGrid grid_with_shells(int shells) {
  return build_grid({std::ldexp(1.0, -shells), 1.0}, 1, 2);
}

}  // namespace

static void BM_FockBasis(benchmark::State& state) {
  const std::size_t modes = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    const FockBasis basis = FockBasis::build(modes, 2);
    benchmark::DoNotOptimize(basis.dim());
  }
}
BENCHMARK(BM_FockBasis)->Arg(32)->Arg(96)->Arg(160);

static void BM_AssembleK0(benchmark::State& state) {
  const FiberSpace space =
      make_fiber_space(grid_with_shells(static_cast<int>(state.range(0))), {1.0, 1.0}, 1, 2);
  for (auto _ : state) {
    const FiberOperator k0 = assemble_K0(space, 0.1);
    benchmark::DoNotOptimize(k0.dim());
  }
  state.counters["dim"] = static_cast<double>(space.dim());
}
BENCHMARK(BM_AssembleK0)->Arg(2)->Arg(4)->Arg(6);

static void BM_AssembleW(benchmark::State& state) {
  const FiberSpace space =
      make_fiber_space(grid_with_shells(static_cast<int>(state.range(0))), {1.0, 1.0}, 1, 2);
  for (auto _ : state) {
    const FiberOperator w = assemble_W(space, 0.01, 0.1);
    benchmark::DoNotOptimize(w.matrix().nonZeros());
  }
  state.counters["dim"] = static_cast<double>(space.dim());
}
BENCHMARK(BM_AssembleW)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_Matvec(benchmark::State& state) {
  const FiberSpace space =
      make_fiber_space(grid_with_shells(static_cast<int>(state.range(0))), {1.0, 1.0}, 1, 2);
  const FiberOperator k = assemble_K(space, 0.01, 0.1);
  Eigen::VectorXcd x = Eigen::VectorXcd::Random(k.dim());
  Eigen::VectorXcd y(k.dim());
  for (auto _ : state) {
    k.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["nnz"] = static_cast<double>(k.matrix().nonZeros());
}
BENCHMARK(BM_Matvec)->Arg(4)->Arg(6)->Unit(benchmark::kMicrosecond);
