#include <benchmark/benchmark.h>

#include "qtdlab/env_suite.hpp"
#include "qtdlab/quantile_dp.hpp"

using namespace qtdlab;

namespace {

void QdpSweepPointMass(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const Mrp mrp = make_env(suite_spec(TransitionKind::Dirichlet, RewardKind::PointMass, 3));
    QuantileTable table(mrp.n_states(), m);
    for (auto _ : state) {
        table = qdp_iterate(mrp, table);
        benchmark::DoNotOptimize(table.theta.data());
    }
    state.SetComplexityN(m);
}
BENCHMARK(QdpSweepPointMass)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void QdpSweepGaussian(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const Mrp mrp = make_env(suite_spec(TransitionKind::Garnet, RewardKind::Gaussian, 3));
    QuantileTable table(mrp.n_states(), m);
    for (auto _ : state) {
        table = qdp_iterate(mrp, table);
        benchmark::DoNotOptimize(table.theta.data());
    }
    state.SetComplexityN(m);
}
BENCHMARK(QdpSweepGaussian)->RangeMultiplier(2)->Range(8, 64)->Complexity();

void TargetQuantileGaussian(benchmark::State& state) {
    const Mrp mrp = make_env(suite_spec(TransitionKind::Garnet, RewardKind::Gaussian, 3));
    QuantileTable table(mrp.n_states(), 64);
    RngStream rng(5);
    for (auto& v : table.theta) v = rng.normal();
    for (auto _ : state) {
        benchmark::DoNotOptimize(target_quantile(mrp, table, 0, 0.3));
    }
}
BENCHMARK(TargetQuantileGaussian);

}  // namespace
