#include "riskfrac/outcome_space.hpp"

#include "enumeration.hpp"
#include "riskfrac/errors.hpp"
#include "riskfrac/summation.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <vector>

namespace riskfrac {

namespace {

template <class Index>
PathDecomposition decompose_logs(std::span<const double> logs, std::span<const Index> draws) {
    PathDecomposition out;
    double running = 0.0;
    double best = 0.0;
    std::size_t lstar = 0;
    for (std::size_t k = 0; k < draws.size(); ++k) {
        running += logs[draws[k]];
        if (running > best + topping_tie_tolerance) {
            best = running;
            lstar = k + 1;
        }
    }
    double tail = 0.0;
    for (std::size_t k = lstar; k < draws.size(); ++k) tail += logs[draws[k]];
    out.topping_index = lstar;
    out.z = running;
    out.u = std::max(0.0, running);
    out.d = std::min(0.0, running);
    out.r = lstar > 0 ? best : 0.0;
    out.d_cur = tail;
    return out;
}

} // namespace

std::size_t topping_index(const TradeDistribution& dist, Fraction f, const Outcome& omega) {
    return decompose_path(dist, f, omega).topping_index;
}

PathDecomposition decompose_path(const TradeDistribution& dist, Fraction f, const Outcome& omega) {
    const auto logs = log_hprs(dist, f);
    auto out = decompose_logs(std::span<const double>(logs), omega.draws());
    out.f = f;
    return out;
}

ExactExpectations exact_expectations(const TradeDistribution& dist, Fraction f, std::size_t M,
                                     const EnumerationOptions& options) {
    const std::size_t N = dist.size();
    const auto total = detail::bounded_power(N, M, options.cap);
    if (!total) {
        throw cap_exceeded("exact enumeration of " + std::to_string(N) + "^" + std::to_string(M) +
                           " paths exceeds the cap of " + std::to_string(options.cap) +
                           "; use the coefficient/DP route or Monte Carlo simulation");
    }
    const auto logs = log_hprs(dist, f);
    const auto probs = dist.probs();

    constexpr std::size_t fields = 5;
    const std::uint64_t blocks = detail::block_count(*total);
    std::vector<std::array<double, fields>> partial(blocks);

    detail::for_each_block(*total, options.workers, [&](std::uint64_t b, std::uint64_t begin, std::uint64_t end) {
        std::vector<std::uint32_t> digits(M);
        detail::decode(begin, N, digits);
        std::array<CompensatedSum, fields> acc{};
        for (std::uint64_t i = begin; i < end; ++i) {
            double p = 1.0;
            for (auto d : digits) p *= probs[d];
            const auto dec = decompose_logs(std::span<const double>(logs), std::span<const std::uint32_t>(digits));
            acc[0].add(p * dec.z);
            acc[1].add(p * dec.u);
            acc[2].add(p * dec.d);
            acc[3].add(p * dec.d_cur);
            acc[4].add(p * dec.r);
            detail::advance(digits, N);
        }
        for (std::size_t k = 0; k < fields; ++k) partial[b][k] = acc[k].value();
    });

    std::array<double, fields> totals{};
    std::vector<double> column(blocks);
    for (std::size_t k = 0; k < fields; ++k) {
        for (std::uint64_t b = 0; b < blocks; ++b) column[b] = partial[b][k];
        totals[k] = pairwise_sum(column);
    }
    return {totals[0], totals[1], totals[2], totals[3], totals[4]};
}

} // namespace riskfrac
