#include <benchmark/benchmark.h>

#include <vector>

#include "ousv/euler_baseline.hpp"
#include "ousv/kl_engine.hpp"
#include "ousv/pricing.hpp"
#include "ousv/series_tails.hpp"

using namespace ousv;

static void BM_MakeTail(benchmark::State& state) {
    const int l = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto tail = series::make_tail(4.0, l);
        benchmark::DoNotOptimize(tail);
    }
}
BENCHMARK(BM_MakeTail)->Arg(2)->Arg(8)->Arg(16)->Arg(64);

static void BM_SampleTriplet(benchmark::State& state) {
    const int l = static_cast<int>(state.range(0));
    const ModelParams p;
    const double t = 1.0;
    const auto tail = series::make_tail(p.kappa * t, l);
    NormalRng rng(1, 0);
    DrawBlock d(l);
    for (auto _ : state) {
        fill_draws(rng, d);
        benchmark::DoNotOptimize(sample_triplet(d, p, t, tail));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SampleTriplet)->Arg(2)->Arg(4)->Arg(6)->Arg(8)->Arg(16);

static void BM_CondBsPrice(benchmark::State& state) {
    const ModelParams p;
    const double t = 1.0;
    const auto tail = series::make_tail(p.kappa * t, 6);
    NormalRng rng(2, 0);
    DrawBlock d(6);
    fill_draws(rng, d);
    const Triplet tr = sample_triplet(d, p, t, tail);
    for (auto _ : state) {
        const CondLaw cl = cond_law(tr, p, t);
        benchmark::DoNotOptimize(bs_call(100.0, cl.fwd, cl.sig_total));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CondBsPrice);

static void BM_EulerPath(benchmark::State& state) {
    const int steps = static_cast<int>(state.range(0));
    const ModelParams p;
    NormalRng rng(3, 0);
    std::vector<double> draws(2 * steps);
    const EulerConfig cfg{steps};
    for (auto _ : state) {
        rng.fill(draws);
        benchmark::DoNotOptimize(simulate_euler(p, 1.0, cfg, draws));
    }
    state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_EulerPath)->Arg(4)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
