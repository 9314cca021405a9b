#pragma once

#include "riskfrac/trade_distribution.hpp"

#include <filesystem>
#include <string_view>

namespace riskfrac {

// CSV with header `trade,prob` or `trade,count`. Probabilities may be
// decimals or exact fractions such as "1/2" (optionally double-quoted).
TradeDistribution parse_distribution_csv(std::string_view text);

// {"trades": [...], "probs": [...]} or {"trades": [...], "counts": [...]}.
// String entries in "probs" are read as exact rationals.
TradeDistribution parse_distribution_json(std::string_view text);

// Dispatches on extension (.json) or on a leading '{'.
TradeDistribution read_distribution(const std::filesystem::path& path);

} // namespace riskfrac
