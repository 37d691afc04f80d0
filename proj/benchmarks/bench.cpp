#include <benchmark/benchmark.h>

#include "fppinv/invasion.hpp"
#include "fppinv/passage.hpp"
#include "fppinv/percolation.hpp"
#include "fppinv/scaling.hpp"
#include "fppinv/theorem.hpp"

using namespace fppinv;

static void BM_SampleConfig(benchmark::State& state) {
    const Box box = Box::centered(int(state.range(0)));
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(LatticeConfig::sample(box, ++seed));
    state.SetItemsProcessed(state.iterations() * Grid(box).num_edges());
}
BENCHMARK(BM_SampleConfig)->Arg(27)->Arg(81)->Arg(243);

static void BM_BoundaryProfile(benchmark::State& state) {
    const int n = int(state.range(0));
    const auto cfg = LatticeConfig::sample(Box::centered(n), 7);
    const auto w = weight_field(WeightModel::half_uniform(), cfg);
    for (auto _ : state) benchmark::DoNotOptimize(boundary_profile(cfg.grid(), w, n));
}
BENCHMARK(BM_BoundaryProfile)->Arg(27)->Arg(81)->Arg(243);

static void BM_InvasionTouch(benchmark::State& state) {
    const int n = int(state.range(0));
    const auto cfg = LatticeConfig::sample(Box::centered(4 * n), 7);
    for (auto _ : state) benchmark::DoNotOptimize(invade(cfg, StopRule::touch(n)));
}
BENCHMARK(BM_InvasionTouch)->Arg(27)->Arg(81);

static void BM_Crossing(benchmark::State& state) {
    const int n = int(state.range(0));
    const Box rect = Box::rect(n + 1, n);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        const auto cfg = LatticeConfig::sample(rect, ++seed);
        benchmark::DoNotOptimize(has_left_right_crossing(cfg, 0.5, rect));
    }
}
BENCHMARK(BM_Crossing)->Arg(16)->Arg(64);

static void BM_OutermostCircuit(benchmark::State& state) {
    const int n = int(state.range(0));
    const auto cfg = LatticeConfig::sample(Box::centered(n), 3);
    for (auto _ : state) benchmark::DoNotOptimize(outermost_circuit(cfg, 0.5, Annulus(n / 3, n)));
}
BENCHMARK(BM_OutermostCircuit)->Arg(27)->Arg(81);

static void BM_DetectEkPainted(benchmark::State& state) {
    const auto p = painted_ek_config();
    for (auto _ : state) benchmark::DoNotOptimize(detect_E_k(p.cfg, p.spec));
}
BENCHMARK(BM_DetectEkPainted)->Unit(benchmark::kMillisecond);

static void BM_DetectEkRandom(benchmark::State& state) {
    const std::vector<double> q = {0.79, 0.70, 0.62, 0.555};
    const auto spec = EkSpec::make(int(state.range(0)), q, choose_alpha_beta(q));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        const auto cfg = LatticeConfig::sample(Box::centered(spec.far_radius()), ++seed);
        benchmark::DoNotOptimize(detect_E_k(cfg, spec));
    }
}
BENCHMARK(BM_DetectEkRandom)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
