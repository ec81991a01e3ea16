#include <benchmark/benchmark.h>

#include "protoglad/detection.hpp"
#include "protoglad/embedding.hpp"
#include "protoglad/eval.hpp"
#include "protoglad/isolation_kernel.hpp"
#include "protoglad/rng.hpp"
#include "protoglad/synthetic.hpp"

namespace {

using namespace protoglad;

GraphDataset bench_dataset() {
    SyntheticConfig cfg;
    cfg.num_normal = 200;
    cfg.num_anomalous = 10;
    cfg.seed = 42;
    return gen_synthetic(cfg);
}

void BM_fit_ik(benchmark::State& state) {
    auto ds = bench_dataset();
    auto pooled = pool_node_vectors(ds);
    const int psi = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(fit_ik(pooled, psi, 100, 7));
}
BENCHMARK(BM_fit_ik)->Arg(4)->Arg(16)->Arg(32);

void BM_ik_map(benchmark::State& state) {
    auto ds = bench_dataset();
    auto pooled = pool_node_vectors(ds);
    auto model = fit_ik(pooled, static_cast<int>(state.range(0)), 100, 7);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ik_map(model, pooled.row(i)));
        i = (i + 1) % pooled.rows;
    }
}
BENCHMARK(BM_ik_map)->Arg(4)->Arg(16)->Arg(32);

void BM_wl_propagate(benchmark::State& state) {
    auto ds = bench_dataset();
    auto model = fit_ik(pool_node_vectors(ds), 16, 100, 7);
    const int h = static_cast<int>(state.range(0));
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(wl_propagate(ds.graphs[i], model, h));
        i = (i + 1) % ds.graphs.size();
    }
}
BENCHMARK(BM_wl_propagate)->Arg(0)->Arg(2)->Arg(4);

void BM_detect(benchmark::State& state) {
    auto ds = bench_dataset();
    auto model = fit_ik(pool_node_vectors(ds), 16, 100, 7);
    auto embeddings = embed_dataset(ds, model, {});
    const double tau = auto_tau(embeddings, 0.85);
    for (auto _ : state)
        benchmark::DoNotOptimize(detect(embeddings, tau, 0.1));
}
BENCHMARK(BM_detect);

void BM_auc(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(3);
    std::vector<double> scores(n);
    std::vector<bool> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        scores[i] = rng.real01();
        labels[i] = rng.below(10) == 0;
    }
    labels[0] = true;
    labels[1] = false;
    for (auto _ : state)
        benchmark::DoNotOptimize(auc(scores, labels));
}
BENCHMARK(BM_auc)->Arg(1000)->Arg(100000);

} // namespace

BENCHMARK_MAIN();
