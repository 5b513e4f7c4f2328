#include <benchmark/benchmark.h>

#include "voromesh/pattern_engine.hpp"

using namespace voromesh;

namespace {

const std::vector<RefinementKey>& keys3() {
    static const auto k = enumerate_valid_keys(3);
    return k;
}

const PatternTable& table3() {
    static const PatternTable t = build_table(3);
    return t;
}

}  // namespace

static void BM_EnumerateValidKeys(benchmark::State& state) {
    for (auto _ : state) {
        auto keys = enumerate_valid_keys(3);
        benchmark::DoNotOptimize(keys);
    }
}
BENCHMARK(BM_EnumerateValidKeys)->Unit(benchmark::kMillisecond);

static void BM_BuildPattern(benchmark::State& state) {
    const RefinementKey key = keys3()[size_t(state.range(0))];
    for (auto _ : state) {
        LocalPattern p = build_pattern(3, key);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_BuildPattern)->Arg(0)->Arg(3000)->Arg(6209)->Unit(benchmark::kMicrosecond);

static void BM_Canonicalize(benchmark::State& state) {
    size_t i = 0;
    for (auto _ : state) {
        auto c = canonicalize(3, keys3()[i]);
        benchmark::DoNotOptimize(c);
        i = (i + 997) % keys3().size();
    }
}
BENCHMARK(BM_Canonicalize)->Unit(benchmark::kMicrosecond);

static void BM_TableLookupInstantiate(benchmark::State& state) {
    const PatternTable& t = table3();
    size_t i = 0;
    for (auto _ : state) {
        LocalPattern p = instantiate(t, keys3()[i]);
        benchmark::DoNotOptimize(p);
        i = (i + 997) % keys3().size();
    }
}
BENCHMARK(BM_TableLookupInstantiate)->Unit(benchmark::kMicrosecond);

static void BM_LocalVoronoiOracle(benchmark::State& state) {
    for (auto _ : state) {
        auto vols = local_voronoi_oracle(3, (RefinementKey(1) << 18) - 1,
                                         int(state.range(0)));
        benchmark::DoNotOptimize(vols);
    }
}
BENCHMARK(BM_LocalVoronoiOracle)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);
