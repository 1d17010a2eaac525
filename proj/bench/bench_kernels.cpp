#include <benchmark/benchmark.h>

#include <random>

#include "ted/maxplus.hpp"

namespace {

// Bounded-difference input: each entry is a small step away from its
// left and upper neighbours, the shape the kernels see in practice.
ted::DenseBlock bounded_difference(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> step(0, 1);
  ted::DenseBlock m(n, n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const ted::Value up = i > 0 ? m.at(i - 1, j) : 0;
      const ted::Value left = j > 0 ? m.at(i, j - 1) : up;
      m.at(i, j) = std::max(up, left) + step(rng) - (i > 0 && j > 0 ? step(rng) : 0);
    }
  }
  return m;
}

template <ted::DenseBlock (*Kernel)(const ted::DenseBlock&, const ted::DenseBlock&)>
void BM_Kernel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ted::DenseBlock a = bounded_difference(n, 1);
  const ted::DenseBlock b = bounded_difference(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Kernel(a, b));
  }
  state.SetComplexityN(n);
  state.counters["cells"] = benchmark::Counter(static_cast<double>(n) * n * n,
                                               benchmark::Counter::kIsIterationInvariantRate);
}

BENCHMARK_TEMPLATE(BM_Kernel, ted::naive_maxplus)
    ->Name("naive_maxplus")
    ->RangeMultiplier(2)
    ->Range(32, 512)
    ->Unit(benchmark::kMicrosecond)
    ->UseRealTime()
    ->Complexity(benchmark::oNCubed);

BENCHMARK_TEMPLATE(BM_Kernel, ted::maxplus_omp)
    ->Name("maxplus_omp")
    ->RangeMultiplier(2)
    ->Range(32, 512)
    ->Unit(benchmark::kMicrosecond)
    ->UseRealTime()
    ->Complexity(benchmark::oNCubed);

}  // namespace

BENCHMARK_MAIN();
