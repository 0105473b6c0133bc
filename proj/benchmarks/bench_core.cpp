#include <benchmark/benchmark.h>

#include "loancost/loancost.hpp"

using namespace loancost;

namespace {

const LoanTerms kTerms(0.03, 0.04, 0.4, 25.0);
const PaymentBounds kBounds = bounds_from_profile(reference_profile());

void BM_CostCompound(benchmark::State& state) {
    const auto s = Strategy::max_min(critical_horizon(kTerms), 25.0);
    for (auto _ : state) benchmark::DoNotOptimize(cost(kTerms, 200.0, s, kBounds, InterestMode::Compound));
}
BENCHMARK(BM_CostCompound);

void BM_CostSimple(benchmark::State& state) {
    const auto s = Strategy::min_max_min(3.0, 12.0, 25.0);
    for (auto _ : state) benchmark::DoNotOptimize(cost(kTerms, 200.0, s, kBounds, InterestMode::Simple));
}
BENCHMARK(BM_CostSimple);

void BM_Thresholds(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(thresholds(kTerms, kBounds));
}
BENCHMARK(BM_Thresholds);

void BM_OptimizeSimple(benchmark::State& state) {
    const int grid = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(optimize_simple(kTerms, 200.0, kBounds, grid));
}
BENCHMARK(BM_OptimizeSimple)->Arg(24)->Arg(96)->Unit(benchmark::kMillisecond);

void BM_DpCompound(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(dp_oracle(kTerms, 200.0, kBounds, 64, 128));
}
BENCHMARK(BM_DpCompound)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
