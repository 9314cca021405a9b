#include "riskfrac/optimizer.hpp"

#include "riskfrac/errors.hpp"

#include <cmath>
#include <string>

namespace riskfrac {

WeightedObjective::WeightedObjective(const TradeDistribution& dist, std::vector<double> weights)
    : weights_(std::move(weights)),
      trades_(dist.trades().begin(), dist.trades().end()),
      normalized_(dist.normalized_trades().begin(), dist.normalized_trades().end()),
      max_loss_(dist.max_loss()) {
    if (weights_.size() != trades_.size()) {
        throw invalid_objective("weight count does not match trade count");
    }
    double total = 0.0;
    bool weighted_loss = false;
    for (std::size_t n = 0; n < weights_.size(); ++n) {
        if (!(weights_[n] >= 0.0) || !std::isfinite(weights_[n])) {
            throw invalid_objective("weights must be finite and nonnegative");
        }
        total += weights_[n];
        weighted_loss = weighted_loss || (weights_[n] > 0.0 && trades_[n] < 0.0);
    }
    if (!(total > 0.0)) throw invalid_objective("weights must not all be zero");
    if (!weighted_loss) {
        throw invalid_objective("no losing trade carries positive weight; the objective is unbounded towards f = 1");
    }
}

WeightedObjective WeightedObjective::classical(const TradeDistribution& dist) {
    return WeightedObjective(dist, std::vector<double>(dist.probs().begin(), dist.probs().end()));
}

double WeightedObjective::weighted_trade_sum() const noexcept {
    double sum = 0.0;
    for (std::size_t n = 0; n < weights_.size(); ++n) sum += weights_[n] * trades_[n];
    return sum;
}

double WeightedObjective::value(Fraction f) const {
    double sum = 0.0;
    for (std::size_t n = 0; n < weights_.size(); ++n) {
        if (weights_[n] != 0.0) sum += weights_[n] * std::log1p(f.value() * normalized_[n]);
    }
    return sum;
}

namespace {

double g_at(const WeightedObjective& obj, double f) {
    const auto q = obj.weights();
    const auto a = obj.normalized_trades();
    double sum = 0.0;
    for (std::size_t n = 0; n < q.size(); ++n) sum += q[n] * a[n] / (1.0 + f * a[n]);
    return sum;
}

double g_prime_at(const WeightedObjective& obj, double f) {
    const auto q = obj.weights();
    const auto a = obj.normalized_trades();
    double sum = 0.0;
    for (std::size_t n = 0; n < q.size(); ++n) {
        const double denom = 1.0 + f * a[n];
        sum -= q[n] * a[n] * a[n] / (denom * denom);
    }
    return sum;
}

} // namespace

double derivative_g(const WeightedObjective& obj, Fraction f) {
    return g_at(obj, f.value());
}

OptimalFraction solve_optimal_f(const WeightedObjective& obj, const SolverOptions& options) {
    if (!(options.tol > 0.0)) throw domain_error("solver tolerance must be positive");
    constexpr double default_upper = 1.0 - 1e-12;

    OptimalFraction result;
    if (obj.weighted_trade_sum() <= 0.0) {
        result.boundary = true;
        result.objective_value = 0.0;
        return result;
    }

    double lo = options.lower;
    double hi = options.upper;
    if (!(lo >= 0.0 && lo < 1.0) || g_at(obj, lo) <= 0.0) lo = 0.0;
    if (!(hi > lo && hi <= default_upper) || g_at(obj, hi) >= 0.0) hi = default_upper;

    if (g_at(obj, hi) > 0.0) {
        result.f_opt = Fraction(hi);
        result.hit_cap = true;
        result.objective_value = obj.value(result.f_opt);
        return result;
    }

    while (hi - lo > options.tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double g = g_at(obj, mid);
        if (g > 0.0) {
            lo = mid;
        } else if (g < 0.0) {
            hi = mid;
        } else {
            lo = hi = mid;
        }
    }

    double f = 0.5 * (lo + hi);
    if (options.newton_polish) {
        for (int i = 0; i < 4; ++i) {
            const double g = g_at(obj, f);
            const double gp = g_prime_at(obj, f);
            if (g == 0.0 || gp == 0.0) break;
            const double next = f - g / gp;
            if (!(next >= lo && next <= hi)) break;
            if (std::abs(g_at(obj, next)) >= std::abs(g)) break;
            f = next;
        }
    }
    result.f_opt = Fraction(f);
    result.objective_value = obj.value(result.f_opt);
    return result;
}

double kelly_fraction(double p, double B) {
    if (!(p > 0.0 && p < 1.0)) throw domain_error("Kelly win probability must lie in (0, 1)");
    if (!(B > 0.0) || !std::isfinite(B)) throw domain_error("Kelly payoff ratio must be positive");
    return p - (1.0 - p) / B;
}

} // namespace riskfrac
