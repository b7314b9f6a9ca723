// Serial reference vs OpenMP kernels. Pass --benchmark_filter to narrow.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "d4census/census.hpp"
#include "d4census/charsum.hpp"

using namespace d4;

namespace {

const SieveTables& tables() {
  static const SieveTables t = SieveTables::build(1'000'000);
  return t;
}

void BM_CensusSerial(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(exact_census_serial({x, x, x, x}, tables()));
}

void BM_CensusParallel(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  CensusOptions opt;
  opt.workers = static_cast<int>(state.range(1));
  opt.spec.pmax = 3;  // keep the Euler product for the main term out of the timing
  for (auto _ : state) benchmark::DoNotOptimize(exact_census({x, x, x, x}, tables(), opt).exact);
}

void BM_CharsumSerial(benchmark::State& state) {
  const auto spec = CharacterSpec::kronecker(-20, 40, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(character_sum_f_serial(static_cast<double>(state.range(0)), spec, std::nullopt, tables()));
  }
}

void BM_CharsumParallel(benchmark::State& state) {
  const auto spec = CharacterSpec::kronecker(-20, 40, 3);
  CharacterSumOptions opt;
  opt.exact_limit = 0;
  opt.workers = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        character_sum_f(static_cast<double>(state.range(0)), spec, std::nullopt, tables(), opt).value);
  }
}

void worker_grid(benchmark::internal::Benchmark* b, std::int64_t size) {
  const int top = std::max(omp_get_max_threads(), 1);
  for (int w = 1; w <= top; w *= 2) b->Args({size, w});
  if ((top & (top - 1)) != 0) b->Args({size, top});
}

}  // namespace

BENCHMARK(BM_CensusSerial)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CensusParallel)->Apply([](auto* b) {
  worker_grid(b, 20);
  worker_grid(b, 40);
})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CharsumSerial)->Arg(1'000'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CharsumParallel)->Apply([](auto* b) { worker_grid(b, 1'000'000); })->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
