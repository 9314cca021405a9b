#include "riskfrac/risk_averse.hpp"

#include "enumeration.hpp"
#include "riskfrac/errors.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace riskfrac {

RiskAverseResult risk_averse_fraction(const TradeDistribution& dist, const CoefficientSet& coeffs,
                                      const SolverOptions& solver) {
    RiskAverseResult out;
    out.M = coeffs.M;
    out.method = coeffs.drawdown.method;
    const auto sum_lambda = coeffs.drawdown.sum_lambda();
    out.q.resize(dist.size());
    for (std::size_t n = 0; n < dist.size(); ++n) out.q[n] = coeffs.updown.U[n] + sum_lambda[n];
    if (coeffs.updown.U_exact && coeffs.drawdown.lambda_exact) {
        const auto exact_lambda = coeffs.drawdown.lambda_exact->column_sums();
        std::vector<Rational> q(dist.size());
        for (std::size_t n = 0; n < dist.size(); ++n) {
            q[n] = (*coeffs.updown.U_exact)[n] + exact_lambda[n];
            out.q[n] = to_double(q[n]);
        }
        out.q_exact = std::move(q);
    }
    out.risk_averse = solve_optimal_f(WeightedObjective(dist, out.q), solver);
    out.classical = solve_optimal_f(WeightedObjective::classical(dist), solver);
    return out;
}

RiskAverseResult risk_averse_fraction(const TradeDistribution& dist, std::size_t M, CoefficientMethod method,
                                      const RiskAverseOptions& options) {
    return risk_averse_fraction(dist, coefficient_set(dist, M, method, options.coefficients), options.solver);
}

SweepResult sweep_M(const TradeDistribution& dist, std::span<const std::size_t> Ms, CoefficientMethod method,
                    const RiskAverseOptions& options) {
    if (Ms.empty()) throw domain_error("sweep needs at least one M");
    SweepResult out;
    out.results.resize(Ms.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < Ms.size(); i = next++) {
            try {
                out.results[i] = risk_averse_fraction(dist, Ms[i], method, options);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const unsigned workers = std::min<unsigned>(detail::resolve_workers(options.sweep_workers),
                                                static_cast<unsigned>(Ms.size()));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    for (std::size_t i = 1; i < out.results.size(); ++i) {
        if (out.results[i].f_riskaverse() < out.results[out.argmin].f_riskaverse()) out.argmin = i;
    }
    out.conservative_min = out.results[out.argmin].f_riskaverse();
    return out;
}

} // namespace riskfrac
