#include "riskfrac/trade_distribution.hpp"

#include "riskfrac/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace riskfrac {

Fraction::Fraction(double value) : value_(value) {
    if (!(value >= 0.0 && value < 1.0)) {
        throw domain_error("fraction must lie in [0, 1), got " + std::to_string(value));
    }
}

namespace {

constexpr double probability_sum_tolerance = 1e-12;

void validate_trades(const std::vector<double>& trades) {
    if (trades.empty()) throw domain_error("trade distribution is empty");
    bool has_loss = false;
    for (double t : trades) {
        if (!std::isfinite(t)) throw domain_error("trade results must be finite");
        if (t == 0.0) throw domain_error("trade results must be nonzero");
        has_loss = has_loss || t < 0.0;
    }
    if (!has_loss) throw domain_error("trade distribution needs at least one losing trade");
}

} // namespace

TradeDistribution::TradeDistribution(std::vector<double> trades, std::vector<double> probs,
                                     std::optional<std::vector<Rational>> exact)
    : trades_(std::move(trades)), probs_(std::move(probs)), exact_probs_(std::move(exact)) {
    validate_trades(trades_);
    if (probs_.size() != trades_.size()) {
        throw domain_error("trades and probabilities differ in length");
    }
    for (double p : probs_) {
        if (!(p > 0.0) || !std::isfinite(p)) throw domain_error("probabilities must be positive");
    }
    for (double t : trades_) {
        if (t < 0.0) max_loss_ = std::max(max_loss_, -t);
    }
    normalized_.reserve(trades_.size());
    for (double t : trades_) normalized_.push_back(t / max_loss_);
}

TradeDistribution TradeDistribution::from_probabilities(std::vector<double> trades, std::vector<double> probs) {
    double sum = 0.0;
    for (double p : probs) sum += p;
    if (std::abs(sum - 1.0) > probability_sum_tolerance) {
        throw domain_error("probabilities must sum to 1 (got " + std::to_string(sum) + ")");
    }
    return TradeDistribution(std::move(trades), std::move(probs), std::nullopt);
}

TradeDistribution TradeDistribution::from_exact(std::vector<double> trades, std::vector<Rational> probs) {
    Rational sum = 0;
    std::vector<double> approx;
    approx.reserve(probs.size());
    for (const auto& p : probs) {
        if (p <= 0) throw domain_error("probabilities must be positive");
        sum += p;
        approx.push_back(to_double(p));
    }
    if (sum != 1) throw domain_error("exact probabilities must sum to 1 (got " + to_string(sum) + ")");
    return TradeDistribution(std::move(trades), std::move(approx), std::move(probs));
}

TradeDistribution TradeDistribution::from_counts(std::vector<double> trades, std::span<const std::uint64_t> counts) {
    BigInt total = 0;
    for (auto c : counts) {
        if (c == 0) throw domain_error("trade counts must be positive");
        total += c;
    }
    std::vector<Rational> probs;
    probs.reserve(counts.size());
    for (auto c : counts) probs.emplace_back(BigInt(c), total);
    return from_exact(std::move(trades), std::move(probs));
}

TradeDistribution TradeDistribution::uniform(std::vector<double> trades) {
    std::vector<std::uint64_t> ones(trades.size(), 1);
    return from_counts(std::move(trades), ones);
}

Outcome::Outcome(const TradeDistribution& dist, std::vector<std::size_t> draws) : draws_(std::move(draws)) {
    for (auto n : draws_) {
        if (n >= dist.size()) throw domain_error("outcome index out of range");
        probability_ *= dist.prob(n);
    }
}

namespace {

struct Approximation {
    std::int64_t numerator;
    std::int64_t denominator;
};

// Continued-fraction convergent with denominator <= max_denominator.
Approximation best_rational(double x, std::int64_t max_denominator) {
    const bool negative = x < 0.0;
    long double y = std::fabs(static_cast<long double>(x));
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int iter = 0; iter < 64; ++iter) {
        const long double a_ld = std::floor(y);
        if (a_ld > 1e15L) break;
        const auto a = static_cast<std::int64_t>(a_ld);
        const std::int64_t q2 = a * q1 + q0;
        if (q2 > max_denominator) break;
        const std::int64_t p2 = a * p1 + p0;
        p0 = p1; q0 = q1;
        p1 = p2; q1 = q2;
        const long double frac = y - a_ld;
        if (frac < 1e-15L) break;
        y = 1.0L / frac;
    }
    if (q1 == 0) return {0, 1};
    return {negative ? -p1 : p1, q1};
}

} // namespace

std::optional<IntegerTrades> integer_scaling(const TradeDistribution& dist, std::int64_t max_abs,
                                             std::int64_t max_denominator) {
    std::vector<Approximation> approx;
    approx.reserve(dist.size());
    std::int64_t common = 1;
    for (double t : dist.trades()) {
        const auto a = best_rational(t, max_denominator);
        const double err = std::abs(t - static_cast<double>(a.numerator) / static_cast<double>(a.denominator));
        if (a.numerator == 0 || err > 1e-9 * std::max(1.0, std::abs(t))) return std::nullopt;
        common = std::lcm(common, a.denominator);
        if (common > max_denominator) return std::nullopt;
        approx.push_back(a);
    }
    IntegerTrades out;
    out.scaled.reserve(approx.size());
    std::int64_t g = 0;
    for (const auto& a : approx) {
        const std::int64_t factor = common / a.denominator;
        if (std::abs(a.numerator) > (std::int64_t{1} << 40) / factor) return std::nullopt;
        const std::int64_t v = a.numerator * factor;
        out.scaled.push_back(v);
        g = std::gcd(g, v);
    }
    for (auto& v : out.scaled) {
        v /= g;
        out.max_abs = std::max(out.max_abs, v < 0 ? -v : v);
    }
    if (out.max_abs > max_abs) return std::nullopt;
    out.scale = static_cast<double>(common) / static_cast<double>(g);
    return out;
}

double expectation(const TradeDistribution& dist) {
    double sum = 0.0;
    for (std::size_t n = 0; n < dist.size(); ++n) sum += dist.prob(n) * dist.trade(n);
    return sum;
}

std::vector<double> log_hprs(const TradeDistribution& dist, Fraction f) {
    std::vector<double> out;
    out.reserve(dist.size());
    for (double a : dist.normalized_trades()) out.push_back(std::log1p(f.value() * a));
    return out;
}

double log_gamma(const TradeDistribution& dist, Fraction f) {
    const auto logs = log_hprs(dist, f);
    double sum = 0.0;
    for (std::size_t n = 0; n < dist.size(); ++n) sum += dist.prob(n) * logs[n];
    return sum;
}

double twr_path(const TradeDistribution& dist, Fraction f, const Outcome& omega, std::size_t first,
                std::size_t last) {
    const std::size_t m = omega.length();
    if (first == 0 || first > last + 1 || last > m) {
        throw domain_error("TWR index range [" + std::to_string(first) + ", " + std::to_string(last) +
                           "] outside 1.." + std::to_string(m));
    }
    const auto a = dist.normalized_trades();
    double twr = 1.0;
    for (std::size_t j = first; j <= last; ++j) twr *= 1.0 + f.value() * a[omega.draws()[j - 1]];
    return twr;
}

double twr_path(const TradeDistribution& dist, Fraction f, const Outcome& omega) {
    return twr_path(dist, f, omega, 1, omega.length());
}

} // namespace riskfrac
