#include <benchmark/benchmark.h>

#include "qtdlab/agents.hpp"
#include "qtdlab/rng.hpp"

using namespace qtdlab;

namespace {

QuantileTable random_table(int n, int m, std::uint64_t seed) {
    RngStream rng(seed);
    QuantileTable table(n, m);
    for (auto& v : table.theta) v = 10.0 * (rng.uniform() - 0.5);
    return table;
}

void QtdUpdateDirect(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    QuantileTable table = random_table(4, m, 1);
    RngStream rng(2);
    for (auto _ : state) {
        const Transition t{static_cast<int>(rng.below(4)), rng.normal(),
                           static_cast<int>(rng.below(4))};
        qtd_update(table, t, 0.1, 0.9);
        benchmark::DoNotOptimize(table.theta.data());
    }
    state.SetComplexityN(m);
}
BENCHMARK(QtdUpdateDirect)->RangeMultiplier(2)->Range(8, 512)->Complexity(benchmark::oNSquared);

void QtdUpdateSorted(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    QuantileTable table = random_table(4, m, 1);
    RngStream rng(2);
    QtdScratch scratch;
    for (auto _ : state) {
        const Transition t{static_cast<int>(rng.below(4)), rng.normal(),
                           static_cast<int>(rng.below(4))};
        qtd_update_fast(table, t, 0.1, 0.9, &scratch);
        benchmark::DoNotOptimize(table.theta.data());
    }
    state.SetComplexityN(m);
}
BENCHMARK(QtdUpdateSorted)->RangeMultiplier(2)->Range(8, 512)->Complexity(benchmark::oNLogN);

void PqtdUpdate(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    QuantileTable table = random_table(4, m, 1);
    RngStream rng(2);
    for (auto _ : state) {
        const Transition t{static_cast<int>(rng.below(4)), rng.normal(),
                           static_cast<int>(rng.below(4))};
        pqtd_update(table, t, 0.1, 0.9);
        benchmark::DoNotOptimize(table.theta.data());
    }
    state.SetComplexityN(m);
}
BENCHMARK(PqtdUpdate)->RangeMultiplier(2)->Range(8, 512)->Complexity(benchmark::oN);

void TdUpdate(benchmark::State& state) {
    ValueTable value(4);
    RngStream rng(2);
    for (auto _ : state) {
        const Transition t{static_cast<int>(rng.below(4)), rng.normal(),
                           static_cast<int>(rng.below(4))};
        td_update(value, t, 0.1, 0.9);
        benchmark::DoNotOptimize(value.v.data());
    }
}
BENCHMARK(TdUpdate);

}  // namespace
