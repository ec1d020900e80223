#include <benchmark/benchmark.h>

#include "consensus/circulant.hpp"
#include "consensus/netgen.hpp"
#include "consensus/spectral.hpp"
#include "consensus/structopt.hpp"
#include "consensus/system.hpp"
#include "consensus/weightopt.hpp"

using namespace consensus;

static void BM_DenseLuResponse(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto sys = build_consensus_system(ring_lattice(n, 4));
    for (auto _ : state)
        benchmark::DoNotOptimize(collective_response(frequency_response(sys, 0.1)));
    state.SetComplexityN(n);
}
BENCHMARK(BM_DenseLuResponse)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

static void BM_EigenSpectrum(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto sys = build_consensus_system(ring_lattice(n, 4));
    const auto grid = log_grid(1e-4, 1.0, 24);
    for (auto _ : state) {
        const GroundedEigenSolver solver(sys);
        double acc = 0.0;
        for (double w : grid) acc += solver.h_squared(w);
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_EigenSpectrum)->RangeMultiplier(2)->Range(64, 1024);

static void BM_CirculantSpectrum(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto ring = RingResponse::unweighted(n, 4, 1.0);
    const auto grid = log_grid(1e-4, 1.0, 24);
    for (auto _ : state) {
        double acc = 0.0;
        for (double w : grid) acc += ring.h_squared(w);
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_CirculantSpectrum)->RangeMultiplier(4)->Range(64, 4096);

static void BM_KStarSweep(benchmark::State& state) {
    ModelSpec model;
    model.kind = ModelKind::Ring;
    model.n_total = static_cast<int>(state.range(0));
    const auto grid = log_grid(1e-2, 1.0, 8);
    for (auto _ : state) benchmark::DoNotOptimize(kstar_curve(model, grid));
}
BENCHMARK(BM_KStarSweep)->Arg(257)->Arg(513)->Unit(benchmark::kMillisecond);

static void BM_WeightGradient(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    WeightProfile p;
    p.n_total = n;
    p.omega = 0.2;
    p.coeffs.assign(n / 2, 0.0);
    const auto mult = distance_multiplicity(n);
    double total = 0.0;
    for (double m : mult) total += m;
    for (auto& c : p.coeffs) c = 1.0 / total;
    for (auto _ : state) benchmark::DoNotOptimize(response_gradient_coeffs(p));
}
BENCHMARK(BM_WeightGradient)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_AnnealChain(benchmark::State& state) {
    AnnealSchedule schedule;
    schedule.steps = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(anneal_topology(11, 0.2, schedule, 3, 1));
}
BENCHMARK(BM_AnnealChain)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
