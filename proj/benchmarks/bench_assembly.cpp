#include <benchmark/benchmark.h>

#include "voromesh/staggered_solver.hpp"

using namespace voromesh;

namespace {

const PatternTable& table3() {
    static const PatternTable t = build_table(3);
    return t;
}

PrimalGrid paraboloid_grid(int level) {
    return refine_by_indicator(PrimalGrid::unit_cube(3), paraboloid_indicator(), level);
}

}  // namespace

static void BM_AssembleUniform(benchmark::State& state) {
    const PrimalGrid g = PrimalGrid::uniform(3, int(state.range(0)));
    for (auto _ : state) {
        DualMesh m = assemble(g, table3());
        benchmark::DoNotOptimize(m);
    }
    state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(g.leaves().size()));
}
BENCHMARK(BM_AssembleUniform)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_AssembleParaboloid(benchmark::State& state) {
    const PrimalGrid g = paraboloid_grid(int(state.range(0)));
    for (auto _ : state) {
        DualMesh m = assemble(g, table3());
        benchmark::DoNotOptimize(m);
    }
    state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(g.leaves().size()));
}
BENCHMARK(BM_AssembleParaboloid)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_GaussCheck(benchmark::State& state) {
    const PrimalGrid g = paraboloid_grid(int(state.range(0)));
    const DualMesh m = assemble(g, table3());
    for (auto _ : state) {
        GaussReport rep = gauss_check(m);
        benchmark::DoNotOptimize(rep);
    }
    state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(m.cells().size()));
}
BENCHMARK(BM_GaussCheck)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_HalfStepPair(benchmark::State& state) {
    const PrimalGrid g = PrimalGrid::uniform(3, int(state.range(0)));
    const DualMesh m = assemble(g, table3());
    const StaggeredScheme s(m);
    const VelocityModel model;
    const VelocityField vel = [&model](Vec3d x) { return model(x); };
    Field f = s.init_cone(model);
    const double dt = s.max_timestep(vel, 0.45, 1e9);
    for (auto _ : state) {
        const Field d =
            s.half_step_primal_to_dual(f, vel, dt, SchemeConfig::Boundary::ZeroInflow, dt);
        Field p =
            s.half_step_dual_to_primal(d, vel, dt, SchemeConfig::Boundary::ZeroInflow, dt);
        benchmark::DoNotOptimize(p);
    }
    state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(g.leaves().size()));
}
BENCHMARK(BM_HalfStepPair)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
