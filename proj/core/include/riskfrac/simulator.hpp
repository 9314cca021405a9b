#pragma once

#include "riskfrac/trade_distribution.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace riskfrac {

struct SimulationConfig {
    TradeDistribution dist;
    Fraction f;
    std::size_t steps = 10'000;
    double starting_capital = 1000.0;
    std::uint64_t seed = 0;
    std::size_t runs = 1;
};

// One fixed-fraction equity curve. Capital is tracked through its log;
// series have steps + 1 entries (index 0 is the starting point).
struct EquityPath {
    std::vector<std::uint32_t> draws;     // zero-based trade index per step
    std::vector<double> log_equity;       // log c_t
    std::vector<double> running_max_log;  // max_{s <= t} log c_s
    std::vector<double> drawdown;         // c_t / max_{s <= t} c_s - 1, in (-1, 0]

    double capital(std::size_t t) const;
    double max_drawdown() const;  // min_t drawdown
    std::size_t steps() const noexcept { return draws.size(); }
};

// Per-run seed: SplitMix64 over the base seed and the run index, so runs
// are independent streams regardless of execution order.
std::uint64_t run_seed(std::uint64_t seed, std::size_t run_index);

// Draws come from std::mt19937_64 with the trade chosen by inverting the
// cumulative distribution at a 53-bit uniform, which is reproducible
// across standard libraries.
EquityPath simulate_run(const SimulationConfig& config, std::size_t run_index);

std::vector<EquityPath> simulate(const SimulationConfig& config);

// Current relative drawdowns pooled over time and runs, in 1% bins over
// (-1, 0]. Bin k covers (-(k+1)/100, -k/100]; bin 0 holds drawdown 0.
class DrawdownHistogram {
public:
    static constexpr std::size_t bin_count = 100;

    void add(const EquityPath& path);
    void add(double drawdown);

    std::uint64_t total() const noexcept { return total_; }
    std::span<const std::uint64_t> counts() const noexcept { return counts_; }
    double frequency(std::size_t bin) const;
    // Upper edge of bin k, i.e. -k/100.
    static double bin_upper(std::size_t bin);

private:
    std::array<std::uint64_t, bin_count> counts_{};
    std::uint64_t total_ = 0;
};

DrawdownHistogram drawdown_distribution(std::span<const EquityPath> paths);

// Share of pooled drawdown observations strictly below `threshold`.
double pooled_fraction_below(std::span<const EquityPath> paths, double threshold);

} // namespace riskfrac
