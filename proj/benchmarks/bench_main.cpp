#include <benchmark/benchmark.h>

#include "coulomb2d/elements.hpp"
#include "coulomb2d/kernel.hpp"
#include "coulomb2d/oracle.hpp"
#include "coulomb2d/tables.hpp"

using namespace coulomb2d;

static void BM_KernelFill(benchmark::State& state) {
  const auto extent = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(KernelTable::fill(0.5, extent, extent));
  }
}
BENCHMARK(BM_KernelFill)->Arg(4)->Arg(8)->Arg(16);

static void BM_KernelDirect(benchmark::State& state) {
  const double gamma = static_cast<double>(state.range(0)) / 100.0;
  const double z = 1.0 - gamma * gamma;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel_direct(6, 6, z));
  }
}
BENCHMARK(BM_KernelDirect)->Arg(10)->Arg(50)->Arg(90);

static void BM_Element(benchmark::State& state) {
  const auto n = static_cast<std::uint16_t>(state.range(0));
  const Geometry geom{1.0, 0.5, 1.0};
  const ElementIndex idx{{{{n, n}, {n, 0}, {0, n}, {n, n}}}};
  const auto [i, j] = required_kernel_extent(geom, idx);
  const KernelTable kernel = KernelTable::fill(geom.gamma(), i, j);
  for (auto _ : state) {
    benchmark::DoNotOptimize(element(geom, idx, kernel));
  }
}
BENCHMARK(BM_Element)->Arg(1)->Arg(4)->Arg(8);

static void BM_Quadrature(benchmark::State& state) {
  const Geometry geom{1.0, 0.5, 1.0};
  oracle::ElementQuadrature quad(geom);
  const ElementIndex idx{{{{2, 1}, {0, 1}, {1, 2}, {1, 0}}}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(quad(idx));
  }
}
BENCHMARK(BM_Quadrature);

static void BM_BuildTable(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const unsigned threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        build_table({1.0, 0.5, 1.0}, BasisSpec::rectangular(n, n), threads));
  }
}
BENCHMARK(BM_BuildTable)->Args({2, 1})->Args({4, 1})->Args({4, 4})->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
