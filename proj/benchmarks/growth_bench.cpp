#include <benchmark/benchmark.h>

#include "wfpp/dmetric.hpp"
#include "wfpp/engine.hpp"

namespace {

wfpp::RunConfig base_config(std::uint64_t edges) {
    wfpp::RunConfig cfg;
    cfg.dim = 2;
    cfg.weight = wfpp::AlphaWeight(0.5, wfpp::SphereProfile::constant(2, 1.0));
    cfg.seed = 12345;
    cfg.stop = wfpp::StopRule::edges(edges);
    return cfg;
}

void BM_FppRun(benchmark::State& state) {
    auto edges = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        wfpp::RunResult res = wfpp::run_fpp(base_config(edges));
        benchmark::DoNotOptimize(res.state.clock);
    }
    state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(edges));
}
BENCHMARK(BM_FppRun)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_EdenRun(benchmark::State& state) {
    auto edges = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        wfpp::RunResult res = wfpp::run_eden_chain(base_config(edges));
        benchmark::DoNotOptimize(res.state.clock);
    }
    state.SetItemsProcessed(std::int64_t(state.iterations()) * std::int64_t(edges));
}
BENCHMARK(BM_EdenRun)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_GridSolve(benchmark::State& state) {
    wfpp::AlphaWeight f(0.5, wfpp::SphereProfile::constant(2, 1.0));
    wfpp::Norm mu = wfpp::Norm::euclidean(2);
    wfpp::RVec z{1.0, 0.0}, w{0.0, 1.0};
    double h = 1.0 / double(state.range(0));
    wfpp::GeodesicGrid grid(2, wfpp::default_region_for(z, w, 0.5, h));
    for (auto _ : state) {
        wfpp::DistanceReport rep = wfpp::d_distance_report(z, w, f, mu, grid);
        benchmark::DoNotOptimize(rep.distance);
    }
}
BENCHMARK(BM_GridSolve)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_WeightEval(benchmark::State& state) {
    wfpp::AlphaWeight f(2.0, wfpp::SphereProfile::norm_power(wfpp::Norm::l1(2), 1.0));
    wfpp::RVec z{0.7, -1.3};
    for (auto _ : state) {
        benchmark::DoNotOptimize(f.evaluate(z));
        z[0] += 1e-9;  // defeat value caching
    }
}
BENCHMARK(BM_WeightEval);

}  // namespace

BENCHMARK_MAIN();
