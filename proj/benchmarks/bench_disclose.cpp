#include <benchmark/benchmark.h>

#include "disclose/endogenous.hpp"
#include "disclose/exogenous.hpp"
#include "disclose/montecarlo.hpp"
#include "disclose/verify.hpp"
#include "disclose/welfare.hpp"

using namespace disclose;

static void BM_SolveExog(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Prior p = Prior::uniform();
    const double rl = r_lower_bar(p, n, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(solve_exog(p, n, 0.5, 0.45, rl).v_L_eq);
}
BENCHMARK(BM_SolveExog)->Arg(2)->Arg(5)->Arg(20);

static void BM_SolveEndog(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Prior p = Prior::power(2.0);
    for (auto _ : state) benchmark::DoNotOptimize(solve_endog(p, n, 0.5, 0.1).r_star);
}
BENCHMARK(BM_SolveEndog)->Arg(2)->Arg(5)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_Certificate(benchmark::State& state) {
    Market m = market_from(solve_endog(Prior::uniform(), 5, 0.5, 0.1));
    for (auto _ : state) benchmark::DoNotOptimize(check_dm_conditions(m).pass);
}
BENCHMARK(BM_Certificate)->Unit(benchmark::kMillisecond);

static void BM_OracleGap(benchmark::State& state) {
    Market m = market_from(solve_endog(Prior::uniform(), 5, 0.5, 0.1));
    const int size = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(oracle_gap(m, size).gap);
}
BENCHMARK(BM_OracleGap)->Arg(101)->Arg(201)->Unit(benchmark::kMillisecond);

static void BM_Informativeness(benchmark::State& state) {
    Prior p = Prior::uniform();
    Equilibrium a = solve_endog(p, 5, 0.5, 0.1), b = solve_endog(p, 6, 0.5, 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(informativeness_compare(a.G, b.G).verdict);
}
BENCHMARK(BM_Informativeness)->Unit(benchmark::kMicrosecond);

static void BM_Simulate(benchmark::State& state) {
    Equilibrium eq = solve_endog(Prior::uniform(), 5, 0.5, 0.1);
    SimConfig c;
    c.consumers = static_cast<std::uint64_t>(state.range(0));
    c.seed = 1;
    c.cost_model = SingleCost{0.1};
    for (auto _ : state) benchmark::DoNotOptimize(simulate_market(eq, c).eta.value);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
