#pragma once

#include "riskfrac/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace riskfrac {

// Investment fraction f in [0, 1).
class Fraction {
public:
    constexpr Fraction() noexcept = default;
    explicit Fraction(double value);

    constexpr double value() const noexcept { return value_; }

    friend constexpr bool operator==(Fraction, Fraction) noexcept = default;
    friend constexpr auto operator<=>(Fraction, Fraction) noexcept = default;

private:
    double value_ = 0.0;
};

// Discrete trade distribution: nonzero trade results t_n with positive
// probabilities p_n, at least one losing trade. The maximal loss
// t_hat = max{|t_n| : t_n < 0} normalises trades to a_n = t_n / t_hat >= -1.
//
// Probabilities are always available as doubles; when they were supplied
// exactly (fractions, counts, or decimals summing to exactly 1) the exact
// rationals are kept alongside so coefficient routes can stay exact.
class TradeDistribution {
public:
    static TradeDistribution from_probabilities(std::vector<double> trades, std::vector<double> probs);
    static TradeDistribution from_exact(std::vector<double> trades, std::vector<Rational> probs);
    static TradeDistribution from_counts(std::vector<double> trades, std::span<const std::uint64_t> counts);
    static TradeDistribution uniform(std::vector<double> trades);

    std::size_t size() const noexcept { return trades_.size(); }
    std::span<const double> trades() const noexcept { return trades_; }
    std::span<const double> probs() const noexcept { return probs_; }
    std::span<const double> normalized_trades() const noexcept { return normalized_; }
    const std::optional<std::vector<Rational>>& exact_probs() const noexcept { return exact_probs_; }
    bool is_exact() const noexcept { return exact_probs_.has_value(); }

    double trade(std::size_t n) const { return trades_.at(n); }
    double prob(std::size_t n) const { return probs_.at(n); }
    double max_loss() const noexcept { return max_loss_; }

private:
    TradeDistribution(std::vector<double> trades, std::vector<double> probs,
                      std::optional<std::vector<Rational>> exact);

    std::vector<double> trades_;
    std::vector<double> probs_;
    std::vector<double> normalized_;
    std::optional<std::vector<Rational>> exact_probs_;
    double max_loss_ = 0.0;
};

// A draw sequence omega in {0..N-1}^M (zero-based trade indices) together
// with its probability prod_j p_{omega_j}.
class Outcome {
public:
    Outcome(const TradeDistribution& dist, std::vector<std::size_t> draws);

    std::span<const std::size_t> draws() const noexcept { return draws_; }
    std::size_t length() const noexcept { return draws_.size(); }
    double probability() const noexcept { return probability_; }

private:
    std::vector<std::size_t> draws_;
    double probability_ = 1.0;
};

// Trades mapped onto the integer lattice: scaled[n] = scale * t_n exactly
// (up to the rational-approximation tolerance), reduced by their gcd.
struct IntegerTrades {
    std::vector<std::int64_t> scaled;
    double scale = 1.0;
    std::int64_t max_abs = 0;
};

// Finds an integer scaling with per-trade denominators <= max_denominator
// and |scaled| <= max_abs, or nullopt.
std::optional<IntegerTrades> integer_scaling(const TradeDistribution& dist,
                                             std::int64_t max_abs = 64,
                                             std::int64_t max_denominator = 1'000'000);

// sum_n p_n t_n
double expectation(const TradeDistribution& dist);

// log Gamma(f) = sum_n p_n log(1 + f a_n)
double log_gamma(const TradeDistribution& dist, Fraction f);

// Holding-period return log(1 + f a_n) for every trade.
std::vector<double> log_hprs(const TradeDistribution& dist, Fraction f);

// TWR_first^last(f, omega) = prod_{j=first..last} (1 + f a_{omega_j}), with
// 1-based inclusive bounds as in the usual notation. An empty range
// (first == last + 1) yields 1.
double twr_path(const TradeDistribution& dist, Fraction f, const Outcome& omega,
                std::size_t first, std::size_t last);

// Full-path TWR_1^M.
double twr_path(const TradeDistribution& dist, Fraction f, const Outcome& omega);

} // namespace riskfrac
