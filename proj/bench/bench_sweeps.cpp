// Serial reference against the OpenMP path for the two sample-point kernels.

#include <benchmark/benchmark.h>

#include "emsep/verify.hpp"

using namespace emsep;

namespace {

const SeparatedSolution& solution() {
    static const SeparatedSolution sol = [] {
        FrameProfiles p;
        p.alpha = TimeProfile::sinusoid(0.2, 0.7, 1.3, 0.1);
        p.beta = TimeProfile::sinusoid(0.4, 0.3, 0.9, 0.5);
        p.gamma = TimeProfile::polynomial({0.1, 0.6, -0.2});
        const TimeProfile grow = TimeProfile::exponential(1.1, 0.25);
        p.h = {grow, grow, grow};
        const auto sys = CoordinateSystem::make(SystemId::ellipsoidal, 1.0, 0.6);
        const auto spec = PotentialSpec::magnetic(sys, FrameSpec(p, SplitClass::nonsplit),
                                                  {AxisProfile::polynomial({0.3, -0.2}), AxisProfile::zero(),
                                                   AxisProfile::polynomial({0.1, 0.0, 0.05})},
                                                  TimeProfile::constant(0.0));
        SeparationSetup setup;
        setup.omega_ranges = {{{0.3, 1.2}, {0.3, 1.0}, {0.3, 1.5}}};
        return SeparatedSolution::build(spec, {0.4, 0.9, -0.6}, setup);
    }();
    return sol;
}

void BM_se_sweep(benchmark::State& state, Execution exec) {
    const auto& sol = solution();
    const auto pts = sample_points({0, 1}, {{{0.3, 1.2}, {0.3, 1.0}, {0.3, 1.5}}},
                                   static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(se_sweep(sol, pts, {}, exec).max_relative());
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_geometry_audit(benchmark::State& state, Execution exec) {
    const auto sys = CoordinateSystem::make(SystemId::ellipsoidal, 1.0, 0.6);
    const auto frame = FrameSpec::identity(SplitClass::nonsplit);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            geometry_audit(sys, frame, 0.0, static_cast<std::size_t>(state.range(0)), 1, exec).max_harmonicity());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK_CAPTURE(BM_se_sweep, serial, Execution::serial)->Arg(64)->Arg(256)->UseRealTime();
BENCHMARK_CAPTURE(BM_se_sweep, parallel, Execution::parallel)->Arg(64)->Arg(256)->UseRealTime();
BENCHMARK_CAPTURE(BM_geometry_audit, serial, Execution::serial)->Arg(200)->UseRealTime();
BENCHMARK_CAPTURE(BM_geometry_audit, parallel, Execution::parallel)->Arg(200)->UseRealTime();

BENCHMARK_MAIN();
