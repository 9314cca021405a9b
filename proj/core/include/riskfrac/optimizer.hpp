#pragma once

#include "riskfrac/trade_distribution.hpp"

#include <span>
#include <vector>

namespace riskfrac {

// h(f) = sum_n q_n log(1 + f t_n / t_hat) with nonnegative weights q_n.
// With q = p this is log Gamma(f); the risk-averse problem uses other q.
class WeightedObjective {
public:
    WeightedObjective(const TradeDistribution& dist, std::vector<double> weights);

    static WeightedObjective classical(const TradeDistribution& dist);

    std::span<const double> weights() const noexcept { return weights_; }
    std::span<const double> trades() const noexcept { return trades_; }
    std::span<const double> normalized_trades() const noexcept { return normalized_; }
    double max_loss() const noexcept { return max_loss_; }

    // sum_n q_n t_n; the sign decides between an interior and a boundary optimum.
    double weighted_trade_sum() const noexcept;
    double value(Fraction f) const;

private:
    std::vector<double> weights_;
    std::vector<double> trades_;
    std::vector<double> normalized_;
    double max_loss_ = 0.0;
};

struct OptimalFraction {
    Fraction f_opt;
    double objective_value = 0.0;
    // f_opt = 0 because sum_n q_n t_n <= 0.
    bool boundary = false;
    // The derivative was still positive at the upper end of the search
    // interval; only possible when the maximal loss carries no weight.
    bool hit_cap = false;
};

struct SolverOptions {
    double tol = 1e-12;
    double lower = 0.0;
    double upper = 1.0 - 1e-12;
    bool newton_polish = true;
};

// g(f) = h'(f) = sum_n q_n a_n / (1 + f a_n); strictly decreasing on [0, 1).
double derivative_g(const WeightedObjective& obj, Fraction f);

// Maximizes h on [0, 1). Bisection on g (which is strictly decreasing)
// followed by a few guarded Newton steps. Brackets in `options` that do not
// straddle the root are widened back to [0, 1 - 1e-12].
OptimalFraction solve_optimal_f(const WeightedObjective& obj, const SolverOptions& options = {});

// p - (1 - p) / B for a game winning B with probability p and losing 1
// otherwise. Not clamped: a nonpositive result marks an unprofitable game.
double kelly_fraction(double p, double B);

} // namespace riskfrac
