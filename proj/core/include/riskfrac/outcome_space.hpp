#pragma once

#include "riskfrac/trade_distribution.hpp"

#include <cstddef>
#include <cstdint>

namespace riskfrac {

// Running maxima closer than this are treated as equal, so the earlier
// index keeps the topping position.
inline constexpr double topping_tie_tolerance = 1e-14;

// Chance/risk split of one path's log TWR.
//   z     = log TWR_1^M
//   u, d  = positive / negative part of z
//   r     = log TWR_1^{l*}        (run-up, 0 when l* = 0)
//   d_cur = log TWR_{l*+1}^M     (current drawdown, 0 when l* = M)
struct PathDecomposition {
    Fraction f;
    std::size_t topping_index = 0;
    double z = 0.0;
    double u = 0.0;
    double d = 0.0;
    double d_cur = 0.0;
    double r = 0.0;
};

// 0 when the running TWR never exceeds 1, otherwise the first index at
// which it reaches its maximum.
std::size_t topping_index(const TradeDistribution& dist, Fraction f, const Outcome& omega);

PathDecomposition decompose_path(const TradeDistribution& dist, Fraction f, const Outcome& omega);

struct ExactExpectations {
    double E_Z = 0.0;
    double E_U = 0.0;
    double E_D = 0.0;
    double E_Dcur = 0.0;
    double E_R = 0.0;
};

struct EnumerationOptions {
    // Maximum number of paths N^M.
    std::uint64_t cap = 20'000'000;
    // 0 selects std::thread::hardware_concurrency().
    unsigned workers = 0;
};

// Probability-weighted sums of decompose_path over all of {1..N}^M.
// Throws cap_exceeded when N^M is above options.cap.
ExactExpectations exact_expectations(const TradeDistribution& dist, Fraction f, std::size_t M,
                                     const EnumerationOptions& options = {});

} // namespace riskfrac
