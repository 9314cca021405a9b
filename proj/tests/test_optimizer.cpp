#include "riskfrac/errors.hpp"
#include "riskfrac/optimizer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace riskfrac;

namespace {

TradeDistribution toss() { return TradeDistribution::uniform({-1.0, 2.0}); }

WeightedObjective weighted_toss(double q_loss, double q_win) {
    return WeightedObjective(toss(), {q_loss, q_win});
}

} // namespace

TEST(Optimizer, DerivativeValues) {
    const auto obj = WeightedObjective::classical(toss());
    EXPECT_NEAR(derivative_g(obj, Fraction(0.25)), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(derivative_g(obj, Fraction(0.0)), 0.5);  // mean trade / max loss
    EXPECT_NEAR(derivative_g(weighted_toss(6.0 / 11, 5.0 / 11), Fraction(2.0 / 11)), 0.0, 1e-15);
}

TEST(Optimizer, DerivativeStrictlyDecreasing) {
    const auto obj = WeightedObjective(TradeDistribution::from_probabilities({-3.0, -1.0, 2.0, 5.0}, {0.2, 0.3, 0.3, 0.2}),
                                       {0.1, 0.7, 0.4, 0.05});
    double prev = derivative_g(obj, Fraction(0.0));
    for (int i = 1; i < 2000; ++i) {
        const double g = derivative_g(obj, Fraction(i / 2000.0));
        ASSERT_LT(g, prev) << "at f=" << i / 2000.0;
        prev = g;
    }
}

TEST(Optimizer, SolvesToss) {
    const auto r = solve_optimal_f(WeightedObjective::classical(toss()));
    EXPECT_FALSE(r.boundary);
    EXPECT_NEAR(r.f_opt.value(), 0.25, 1e-12);
    EXPECT_NEAR(r.objective_value, 0.5 * std::log(0.75) + 0.5 * std::log(1.5), 1e-14);

    const auto w = solve_optimal_f(weighted_toss(6.0 / 11, 5.0 / 11));
    EXPECT_NEAR(w.f_opt.value(), 2.0 / 11, 1e-12);
}

TEST(Optimizer, UnprofitableIsBoundary) {
    const auto r = solve_optimal_f(WeightedObjective::classical(TradeDistribution::uniform({-1.0, 0.5})));
    EXPECT_TRUE(r.boundary);
    EXPECT_EQ(r.f_opt.value(), 0.0);
    EXPECT_EQ(r.objective_value, 0.0);
    // break-even game too
    EXPECT_TRUE(solve_optimal_f(WeightedObjective::classical(TradeDistribution::uniform({-1.0, 1.0}))).boundary);
}

TEST(Optimizer, InvalidObjectives) {
    EXPECT_THROW(WeightedObjective(toss(), {0.0, 1.0}), invalid_objective);  // unbounded towards 1
    EXPECT_THROW(WeightedObjective(toss(), {0.0, 0.0}), invalid_objective);
    EXPECT_THROW(WeightedObjective(toss(), {-1.0, 2.0}), invalid_objective);
    EXPECT_THROW(WeightedObjective(toss(), {1.0}), invalid_objective);
    EXPECT_THROW(kelly_fraction(0.0, 2.0), domain_error);
    EXPECT_THROW(kelly_fraction(0.5, 0.0), domain_error);
}

TEST(Optimizer, RootNearCapWhenMaximalLossUnweighted) {
    // Only the small loss carries weight: the optimum is pushed towards 1.
    auto d = TradeDistribution::uniform({-1.0, -0.01, 5.0});
    const auto r = solve_optimal_f(WeightedObjective(d, {0.0, 0.5, 0.5}));
    EXPECT_TRUE(r.hit_cap);
    EXPECT_GT(r.f_opt.value(), 0.999);
}

TEST(Optimizer, Kelly) {
    EXPECT_DOUBLE_EQ(kelly_fraction(0.5, 2.0), 0.25);
    EXPECT_NEAR(kelly_fraction(5.0 / 11, 2.0), 2.0 / 11, 1e-15);
    EXPECT_NEAR(kelly_fraction(1.0 / 3, 2.0), 0.0, 1e-15);
    EXPECT_LT(kelly_fraction(0.2, 2.0), 0.0);
}

TEST(Optimizer, Properties) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t N = 2 + trial % 4;
        std::vector<double> trades(N), weights(N);
        for (std::size_t n = 0; n < N; ++n) {
            trades[n] = (n == 0 ? -1.0 : 1.0) * (0.1 + 3.0 * unit(rng));
            weights[n] = 0.05 + unit(rng);
        }
        std::vector<double> probs(N, 1.0 / static_cast<double>(N));
        probs.back() = 1.0 - (N - 1) * (1.0 / static_cast<double>(N));
        auto d = TradeDistribution::from_probabilities(trades, probs);
        WeightedObjective obj(d, weights);
        const auto r = solve_optimal_f(obj);
        if (r.boundary) {
            EXPECT_LE(obj.weighted_trade_sum(), 0.0);
            continue;
        }
        // scale invariance
        std::vector<double> scaled = weights;
        for (auto& w : scaled) w *= 17.5;
        EXPECT_NEAR(solve_optimal_f(WeightedObjective(d, scaled)).f_opt.value(), r.f_opt.value(), 1e-12);
        // bracket independence
        SolverOptions narrow;
        narrow.lower = r.f_opt.value() * 0.5;
        narrow.upper = std::min(1.0 - 1e-12, r.f_opt.value() + 0.5 * (1.0 - r.f_opt.value()));
        EXPECT_NEAR(solve_optimal_f(obj, narrow).f_opt.value(), r.f_opt.value(), 2e-12);
        SolverOptions misplaced;
        misplaced.lower = 0.999;  // does not straddle; widened
        EXPECT_NEAR(solve_optimal_f(obj, misplaced).f_opt.value(), r.f_opt.value(), 2e-12);
        // optimality sandwich
        for (int i = 0; i <= 1000; ++i) {
            const double f = (1.0 - 1e-6) * i / 1000.0;
            ASSERT_GE(r.objective_value, obj.value(Fraction(f)) - 1e-13);
        }
    }
}

TEST(Optimizer, KellyMatchesSolver) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> pu(0.05, 0.95), bu(0.1, 10.0);
    int checked = 0;
    while (checked < 100) {
        const double p = pu(rng), B = bu(rng);
        if (kelly_fraction(p, B) <= 1e-6) continue;
        auto d = TradeDistribution::from_probabilities({-1.0, B}, {1.0 - p, p});
        const auto r = solve_optimal_f(WeightedObjective::classical(d));
        EXPECT_NEAR(r.f_opt.value(), kelly_fraction(p, B), 1e-10);
        ++checked;
    }
}
