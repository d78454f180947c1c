#include <benchmark/benchmark.h>

#include "pythlab/element.hpp"
#include "pythlab/repr_search.hpp"
#include "pythlab/scanner.hpp"
#include "pythlab/witnesses.hpp"

namespace {

using namespace pythlab;

void BM_FieldMul(benchmark::State& state) {
    const FieldPtr f = Field::make(7, 13);
    const Quad x = f->from_basis_coordinates({3, -2, 5, 1});
    const Quad y = f->from_basis_coordinates({-1, 4, 2, -3});
    for (auto _ : state) benchmark::DoNotOptimize(f->mul(x, y));
}
BENCHMARK(BM_FieldMul);

void BM_TotallyPositive(benchmark::State& state) {
    const WitnessRecord w = witness(7, 13);
    for (auto _ : state) benchmark::DoNotOptimize(is_totally_positive(w.element));
}
BENCHMARK(BM_TotallyPositive);

void BM_WitnessLength(benchmark::State& state) {
    const WitnessRecord w = witness(7, static_cast<Int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(length(w.element));
}
BENCHMARK(BM_WitnessLength)->Arg(13)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Scan(benchmark::State& state) {
    const FieldPtr f = Field::make(7, 13);
    const ScanConfig config{state.range(0), 7, 3};
    for (auto _ : state) benchmark::DoNotOptimize(scan_lengths(f, config, 1));
}
BENCHMARK(BM_Scan)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
