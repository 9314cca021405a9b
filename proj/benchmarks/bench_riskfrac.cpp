#include "riskfrac/riskfrac.hpp"

#include <benchmark/benchmark.h>

using namespace riskfrac;

namespace {

TradeDistribution toss() { return TradeDistribution::from_exact({-1.0, 2.0}, {Rational(1, 2), Rational(1, 2)}); }

TradeDistribution toss_real() { return TradeDistribution::uniform({-1.0, 2.0}); }

void BM_DrawdownEnumeration(benchmark::State& state) {
    const auto d = toss_real();
    const auto M = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(drawdown_coefficients_enum(d, M));
}
BENCHMARK(BM_DrawdownEnumeration)->DenseRange(6, 18, 4)->Unit(benchmark::kMillisecond);

void BM_DrawdownDp(benchmark::State& state) {
    const auto d = toss_real();
    const auto M = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(drawdown_coefficients_dp(d, M));
}
BENCHMARK(BM_DrawdownDp)->Arg(10)->Arg(50)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_UpDownExact(benchmark::State& state) {
    const auto d = toss();
    const auto M = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(updown_coefficients(d, M));
}
BENCHMARK(BM_UpDownExact)->Arg(10)->Arg(20)->Unit(benchmark::kMicrosecond);

void BM_ExactExpectations(benchmark::State& state) {
    const auto d = TradeDistribution::uniform({-1.0, 0.5, 2.0});
    const auto M = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(exact_expectations(d, Fraction(0.2), M));
}
BENCHMARK(BM_ExactExpectations)->Arg(6)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_RiskAverseSweep(benchmark::State& state) {
    const auto d = toss();
    const std::vector<std::size_t> Ms = {2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20, 25, 30, 40, 50, 60, 70, 80, 90, 100};
    for (auto _ : state) benchmark::DoNotOptimize(sweep_M(d, Ms));
}
BENCHMARK(BM_RiskAverseSweep)->Unit(benchmark::kMillisecond);

void BM_Simulation(benchmark::State& state) {
    SimulationConfig cfg{toss_real(), Fraction(0.25)};
    cfg.steps = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(simulate_run(cfg, 0));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulation)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
