#include <benchmark/benchmark.h>

#include "xcfb/analysis.hpp"
#include "xcfb/ic_scheme.hpp"
#include "xcfb/kx_scheme.hpp"
#include "xcfb/mat_scheme.hpp"
#include "xcfb/x2_scheme.hpp"

namespace {

using namespace xcfb;

void BM_X2RegimeB(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const int n = static_cast<int>(state.range(1));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_x2(m, n, 100.0, true, seed++));
    }
}
BENCHMARK(BM_X2RegimeB)->Args({2, 3})->Args({3, 4})->Args({4, 4});

void BM_MatRun(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_mat_standalone(k, 1, 100.0, true, seed++));
    }
}
BENCHMARK(BM_MatRun)->Arg(2)->Arg(3)->Arg(4);

void BM_KxPartial(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_kx(k, KxMode::PartialFB, 100.0, true, seed++));
    }
}
BENCHMARK(BM_KxPartial)->Arg(3)->Arg(5)->Arg(8);

void BM_IcRun(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_ic(k, 100.0, true, seed++));
    }
}
BENCHMARK(BM_IcRun)->Arg(2)->Arg(3)->Arg(4);

void BM_VerifyDecodability(benchmark::State& state) {
    const Transcript tr = run_ic(static_cast<int>(state.range(0)), 100.0, true, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(verify_decodability(tr));
    }
}
BENCHMARK(BM_VerifyDecodability)->Arg(2)->Arg(3)->Arg(4);

void BM_AchievableRate(benchmark::State& state) {
    const Transcript tr = run_x2(2, 3, 1e4, false, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(achievable_rate(tr, 1e4));
    }
}
BENCHMARK(BM_AchievableRate);

}  // namespace

BENCHMARK_MAIN();
