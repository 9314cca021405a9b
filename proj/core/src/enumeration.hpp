#pragma once

// Odometer enumeration of {0..N-1}^M in fixed-size blocks. Blocks are the
// unit of parallel work and of partial-sum bookkeeping, so results never
// depend on how many workers ran.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <thread>
#include <vector>

namespace riskfrac::detail {

inline constexpr std::uint64_t enumeration_block_size = std::uint64_t{1} << 14;

// base^exp, or nullopt once the value exceeds `limit`.
inline std::optional<std::uint64_t> bounded_power(std::uint64_t base, std::size_t exp, std::uint64_t limit) {
    std::uint64_t value = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (base != 0 && value > limit / base) return std::nullopt;
        value *= base;
    }
    if (value > limit) return std::nullopt;
    return value;
}

// Most significant digit first: digit 0 is the first draw.
inline void decode(std::uint64_t index, std::size_t base, std::span<std::uint32_t> digits) {
    for (std::size_t j = digits.size(); j-- > 0;) {
        digits[j] = static_cast<std::uint32_t>(index % base);
        index /= base;
    }
}

inline void advance(std::span<std::uint32_t> digits, std::size_t base) {
    for (std::size_t j = digits.size(); j-- > 0;) {
        if (++digits[j] < base) return;
        digits[j] = 0;
    }
}

inline unsigned resolve_workers(unsigned requested) {
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Calls fn(block, begin, end) for every block of [0, total).
template <class Fn>
void for_each_block(std::uint64_t total, unsigned workers, Fn&& fn,
                    std::uint64_t block_size = enumeration_block_size) {
    const std::uint64_t blocks = (total + block_size - 1) / block_size;
    auto run = [&](std::uint64_t b) {
        const std::uint64_t begin = b * block_size;
        const std::uint64_t end = std::min(total, begin + block_size);
        fn(b, begin, end);
    };
    workers = static_cast<unsigned>(std::min<std::uint64_t>(resolve_workers(workers), std::max<std::uint64_t>(blocks, 1)));
    if (workers <= 1) {
        for (std::uint64_t b = 0; b < blocks; ++b) run(b);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::uint64_t b = next++; b < blocks; b = next++) run(b);
        });
    }
}

inline std::uint64_t block_count(std::uint64_t total) {
    return (total + enumeration_block_size - 1) / enumeration_block_size;
}

} // namespace riskfrac::detail
