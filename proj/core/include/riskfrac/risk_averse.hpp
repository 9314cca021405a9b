#pragma once

#include "riskfrac/coefficients.hpp"
#include "riskfrac/optimizer.hpp"
#include "riskfrac/trade_distribution.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace riskfrac {

struct RiskAverseOptions {
    CoefficientOptions coefficients;
    SolverOptions solver;
    // Sweep entries evaluated concurrently; 0 selects hardware concurrency.
    unsigned sweep_workers = 0;
};

// Maximizer of sum_n q_n log(1 + f a_n) with q_n = U_n + sum_l lambda(l, n),
// the small-f expansion of E(U) + E(D_cur) over M draws.
struct RiskAverseResult {
    std::size_t M = 0;
    std::vector<double> q;
    std::optional<std::vector<Rational>> q_exact;
    CoefficientMethod method = CoefficientMethod::enumeration;
    OptimalFraction risk_averse;
    OptimalFraction classical;

    Fraction f_riskaverse() const noexcept { return risk_averse.f_opt; }
    Fraction f_opt() const noexcept { return classical.f_opt; }
    // The risk-averse fraction is expected not to exceed the classical one;
    // this flags distributions where it does.
    bool exceeds_classical() const noexcept {
        return risk_averse.f_opt.value() > classical.f_opt.value() + 1e-9;
    }
};

RiskAverseResult risk_averse_fraction(const TradeDistribution& dist, std::size_t M,
                                      CoefficientMethod method = CoefficientMethod::automatic,
                                      const RiskAverseOptions& options = {});

// Same, from precomputed coefficients.
RiskAverseResult risk_averse_fraction(const TradeDistribution& dist, const CoefficientSet& coeffs,
                                      const SolverOptions& solver = {});

struct SweepResult {
    std::vector<RiskAverseResult> results;  // in input order
    std::size_t argmin = 0;                 // index of the smallest fraction
    Fraction conservative_min;
};

SweepResult sweep_M(const TradeDistribution& dist, std::span<const std::size_t> Ms,
                    CoefficientMethod method = CoefficientMethod::automatic, const RiskAverseOptions& options = {});

} // namespace riskfrac
