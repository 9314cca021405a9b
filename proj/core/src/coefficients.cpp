#include "riskfrac/coefficients.hpp"

#include "enumeration.hpp"
#include "riskfrac/errors.hpp"
#include "riskfrac/summation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>
#include <unordered_map>

namespace riskfrac {

std::size_t CountVector::length() const noexcept {
    std::size_t m = 0;
    for (auto x : counts) m += x;
    return m;
}

BigInt CountVector::multinomial() const {
    // Product of binomials C(x_1 + ... + x_k, x_k).
    BigInt result = 1;
    std::uint64_t running = 0;
    for (auto x : counts) {
        for (std::uint32_t i = 1; i <= x; ++i) {
            ++running;
            result *= running;
            result /= i;
        }
    }
    return result;
}

double CountVector::log_multinomial() const {
    double out = std::lgamma(static_cast<double>(length()) + 1.0);
    for (auto x : counts) out -= std::lgamma(static_cast<double>(x) + 1.0);
    return out;
}

bool CountVector::profitable(std::span<const std::int64_t> scaled_trades) const {
    std::int64_t sum = 0;
    for (std::size_t n = 0; n < counts.size(); ++n) sum += static_cast<std::int64_t>(counts[n]) * scaled_trades[n];
    return sum > 0;
}

void for_each_count_vector(std::size_t N, std::size_t M, const std::function<void(const CountVector&)>& fn) {
    if (N == 0) return;
    CountVector x;
    x.counts.assign(N, 0);
    // Recursive fill of positions 0..N-2; the last part takes the remainder.
    auto fill = [&](auto&& self, std::size_t pos, std::uint32_t remaining) -> void {
        if (pos + 1 == N) {
            x.counts[pos] = remaining;
            fn(x);
            return;
        }
        for (std::uint32_t v = 0; v <= remaining; ++v) {
            x.counts[pos] = v;
            self(self, pos + 1, remaining - v);
        }
    };
    fill(fill, 0, static_cast<std::uint32_t>(M));
}

std::uint64_t count_vector_total(std::size_t N, std::size_t M) {
    if (N == 0) return 0;
    // C(M + N - 1, k) with k = min(N - 1, M), built incrementally.
    const std::uint64_t k = std::min<std::uint64_t>(N - 1, M);
    const std::uint64_t n = M + N - 1;
    const BigInt limit = std::numeric_limits<std::uint64_t>::max();
    BigInt value = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        value = value * (n - k + i) / i;
        if (value > limit) return std::numeric_limits<std::uint64_t>::max();
    }
    return value.convert_to<std::uint64_t>();
}

namespace {

// Trade sums compared on an integer lattice when one exists, otherwise in
// floating point.
class TradeSums {
public:
    TradeSums(const TradeDistribution& dist, std::size_t M, std::int64_t max_denominator)
        : real_(dist.trades().begin(), dist.trades().end()) {
        const std::int64_t bound = (std::int64_t{1} << 40) / static_cast<std::int64_t>(std::max<std::size_t>(M, 1));
        if (auto lattice = integer_scaling(dist, bound, max_denominator)) integer_ = std::move(lattice->scaled);
    }

    bool exact() const noexcept { return !integer_.empty(); }
    std::span<const std::int64_t> integer() const noexcept { return integer_; }

    // First argmax of the partial sums S_0 = 0, S_1, ..., S_M.
    template <class Index>
    std::size_t first_argmax(std::span<const Index> draws) const {
        return exact() ? argmax_impl<std::int64_t>(integer_, draws) : argmax_impl<double>(real_, draws);
    }

    bool profitable(const CountVector& x) const {
        if (exact()) return x.profitable(integer_);
        double sum = 0.0;
        for (std::size_t n = 0; n < x.counts.size(); ++n) sum += x.counts[n] * real_[n];
        return sum > 0.0;
    }

private:
    template <class T, class Index>
    static std::size_t argmax_impl(std::span<const T> steps, std::span<const Index> draws) {
        T running{};
        T best{};
        std::size_t arg = 0;
        for (std::size_t k = 0; k < draws.size(); ++k) {
            running += steps[draws[k]];
            if (running > best) {
                best = running;
                arg = k + 1;
            }
        }
        return arg;
    }

    std::vector<double> real_;
    std::vector<std::int64_t> integer_;
};

std::vector<std::vector<Rational>> exact_powers(const std::vector<Rational>& probs, std::size_t M) {
    std::vector<std::vector<Rational>> out(probs.size());
    for (std::size_t n = 0; n < probs.size(); ++n) {
        out[n].reserve(M + 1);
        out[n].emplace_back(1);
        for (std::size_t k = 1; k <= M; ++k) out[n].push_back(out[n].back() * probs[n]);
    }
    return out;
}

std::string cap_message(const std::string& what, std::uint64_t cap) {
    return what + " exceeds the cap of " + std::to_string(cap) +
           "; use the DP route (integer-scalable trades) or Monte Carlo simulation";
}

} // namespace

UpDownCoefficients updown_coefficients(const TradeDistribution& dist, std::size_t M, const CoefficientOptions& options) {
    if (M == 0) throw domain_error("path length M must be at least 1");
    const std::size_t N = dist.size();
    const std::uint64_t total = count_vector_total(N, M);
    if (total > options.cap) {
        throw cap_exceeded(cap_message("enumerating " + std::to_string(total) + " count vectors", options.cap));
    }
    const TradeSums sums(dist, M, options.max_denominator);
    UpDownCoefficients out;

    if (dist.is_exact() && M <= options.exact_max_M) {
        const auto powers = exact_powers(*dist.exact_probs(), M);
        std::vector<Rational> U(N), D(N);
        for_each_count_vector(N, M, [&](const CountVector& x) {
            Rational w = Rational(x.multinomial());
            for (std::size_t n = 0; n < N; ++n) w *= powers[n][x.counts[n]];
            auto& target = sums.profitable(x) ? U : D;
            for (std::size_t n = 0; n < N; ++n) {
                if (x.counts[n] != 0) target[n] += w * x.counts[n];
            }
        });
        for (std::size_t n = 0; n < N; ++n) {
            out.U.push_back(to_double(U[n]));
            out.D.push_back(to_double(D[n]));
        }
        out.U_exact = std::move(U);
        out.D_exact = std::move(D);
        return out;
    }

    std::vector<double> log_p(N);
    for (std::size_t n = 0; n < N; ++n) log_p[n] = std::log(dist.prob(n));
    std::vector<CompensatedSum> U(N), D(N);
    for_each_count_vector(N, M, [&](const CountVector& x) {
        double log_w = x.log_multinomial();
        for (std::size_t n = 0; n < N; ++n) {
            if (x.counts[n] != 0) log_w += x.counts[n] * log_p[n];
        }
        const double w = std::exp(log_w);
        auto& target = sums.profitable(x) ? U : D;
        for (std::size_t n = 0; n < N; ++n) {
            if (x.counts[n] != 0) target[n].add(w * x.counts[n]);
        }
    });
    for (std::size_t n = 0; n < N; ++n) {
        out.U.push_back(U[n].value());
        out.D.push_back(D[n].value());
    }
    return out;
}

namespace {

constexpr std::uint64_t max_tally_entries = std::uint64_t{1} << 26;
constexpr std::uint64_t direct_chunks = 64;

// Integer tallies keyed by (topping position, count vector). Every path
// with the same count vector has the same probability, so probabilities
// are applied once per count vector at the end; the tallies are plain
// integer sums and therefore independent of the worker count.
DrawdownCoefficients enumerate_tallied(const TradeDistribution& dist, std::size_t M, std::uint64_t total,
                                       const TradeSums& sums, const CoefficientOptions& options) {
    const std::size_t N = dist.size();
    const std::size_t stride = N + 1;  // per-trade counts after l, then the path count

    std::vector<std::uint64_t> radix(N);
    radix[0] = 1;
    for (std::size_t n = 1; n < N; ++n) radix[n] = radix[n - 1] * (M + 1);

    std::vector<CountVector> vectors;
    std::unordered_map<std::uint64_t, std::uint32_t> rank_of;
    for_each_count_vector(N, M, [&](const CountVector& x) {
        std::uint64_t key = 0;
        for (std::size_t n = 0; n < N; ++n) key += x.counts[n] * radix[n];
        rank_of.emplace(key, static_cast<std::uint32_t>(vectors.size()));
        vectors.push_back(x);
    });
    const std::size_t K = vectors.size();

    std::vector<std::uint64_t> tally((M + 1) * K * stride, 0);
    std::mutex merge;
    detail::for_each_block(total, options.workers, [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
        std::vector<std::uint64_t> local(tally.size(), 0);
        std::vector<std::uint32_t> digits(M);
        detail::decode(begin, N, digits);
        for (std::uint64_t i = begin; i < end; ++i) {
            std::uint64_t key = 0;
            for (auto d : digits) key += radix[d];
            const std::size_t rank = rank_of.find(key)->second;
            const std::size_t ell = sums.first_argmax(std::span<const std::uint32_t>(digits));
            std::uint64_t* slot = &local[(ell * K + rank) * stride];
            for (std::size_t j = ell; j < M; ++j) ++slot[digits[j]];
            ++slot[N];
            detail::advance(digits, N);
        }
        std::lock_guard lock(merge);
        for (std::size_t k = 0; k < tally.size(); ++k) tally[k] += local[k];
    });

    DrawdownCoefficients out;
    out.method = CoefficientMethod::enumeration;
    out.lambda = Table<double>(M + 1, N);
    out.run_up = Table<double>(M + 1, N);
    out.class_probability.assign(M + 1, 0.0);

    if (dist.is_exact() && M <= options.exact_max_M) {
        const auto powers = exact_powers(*dist.exact_probs(), M);
        std::vector<Rational> weight(K);
        for (std::size_t r = 0; r < K; ++r) {
            Rational w = 1;
            for (std::size_t n = 0; n < N; ++n) w *= powers[n][vectors[r].counts[n]];
            weight[r] = std::move(w);
        }
        Table<Rational> lambda(M + 1, N), run_up(M + 1, N);
        for (std::size_t ell = 0; ell <= M; ++ell) {
            Rational cls = 0;
            for (std::size_t r = 0; r < K; ++r) {
                const std::uint64_t* slot = &tally[(ell * K + r) * stride];
                if (slot[N] == 0) continue;
                cls += weight[r] * slot[N];
                for (std::size_t n = 0; n < N; ++n) {
                    const std::uint64_t after = slot[n];
                    const std::uint64_t before = vectors[r].counts[n] * slot[N] - after;
                    if (after != 0) lambda(ell, n) += weight[r] * after;
                    if (before != 0) run_up(ell, n) += weight[r] * before;
                }
            }
            out.class_probability[ell] = to_double(cls);
            for (std::size_t n = 0; n < N; ++n) {
                out.lambda(ell, n) = to_double(lambda(ell, n));
                out.run_up(ell, n) = to_double(run_up(ell, n));
            }
        }
        out.lambda_exact = std::move(lambda);
        out.run_up_exact = std::move(run_up);
        return out;
    }

    std::vector<double> weight(K);
    for (std::size_t r = 0; r < K; ++r) {
        double log_w = 0.0;
        for (std::size_t n = 0; n < N; ++n) {
            if (vectors[r].counts[n] != 0) log_w += vectors[r].counts[n] * std::log(dist.prob(n));
        }
        weight[r] = std::exp(log_w);
    }
    for (std::size_t ell = 0; ell <= M; ++ell) {
        CompensatedSum cls;
        std::vector<CompensatedSum> lambda(N), run_up(N);
        for (std::size_t r = 0; r < K; ++r) {
            const std::uint64_t* slot = &tally[(ell * K + r) * stride];
            if (slot[N] == 0) continue;
            cls.add(weight[r] * static_cast<double>(slot[N]));
            for (std::size_t n = 0; n < N; ++n) {
                const std::uint64_t after = slot[n];
                const std::uint64_t before = vectors[r].counts[n] * slot[N] - after;
                lambda[n].add(weight[r] * static_cast<double>(after));
                run_up[n].add(weight[r] * static_cast<double>(before));
            }
        }
        out.class_probability[ell] = cls.value();
        for (std::size_t n = 0; n < N; ++n) {
            out.lambda(ell, n) = lambda[n].value();
            out.run_up(ell, n) = run_up[n].value();
        }
    }
    return out;
}

// Per-path floating accumulation for trade sets too wide to tally by count
// vector. The path range is cut into a fixed number of chunks whose
// partial sums are combined in chunk order.
DrawdownCoefficients enumerate_direct(const TradeDistribution& dist, std::size_t M, std::uint64_t total,
                                      const TradeSums& sums, const CoefficientOptions& options) {
    const std::size_t N = dist.size();
    const std::size_t width = (M + 1) * (2 * N + 1);
    const std::uint64_t chunk = std::max<std::uint64_t>(1, (total + direct_chunks - 1) / direct_chunks);
    const std::uint64_t chunks = (total + chunk - 1) / chunk;
    if (chunks * width > max_tally_entries) {
        throw cap_exceeded(cap_message("direct enumeration table of " + std::to_string(chunks * width) + " entries",
                                       max_tally_entries));
    }
    std::vector<double> partial(chunks * width, 0.0);
    const auto probs = dist.probs();
    detail::for_each_block(
        total, options.workers,
        [&](std::uint64_t c, std::uint64_t begin, std::uint64_t end) {
            std::vector<CompensatedSum> acc(width);
            std::vector<std::uint32_t> digits(M);
            std::vector<std::uint32_t> after(N), before(N);
            detail::decode(begin, N, digits);
            for (std::uint64_t i = begin; i < end; ++i) {
                double p = 1.0;
                for (auto d : digits) p *= probs[d];
                const std::size_t ell = sums.first_argmax(std::span<const std::uint32_t>(digits));
                std::fill(after.begin(), after.end(), 0);
                std::fill(before.begin(), before.end(), 0);
                for (std::size_t j = 0; j < M; ++j) ++(j < ell ? before : after)[digits[j]];
                CompensatedSum* row = &acc[ell * (2 * N + 1)];
                for (std::size_t n = 0; n < N; ++n) {
                    if (after[n]) row[n].add(p * after[n]);
                    if (before[n]) row[N + n].add(p * before[n]);
                }
                row[2 * N].add(p);
                detail::advance(digits, N);
            }
            for (std::size_t k = 0; k < width; ++k) partial[c * width + k] = acc[k].value();
        },
        chunk);

    DrawdownCoefficients out;
    out.method = CoefficientMethod::enumeration;
    out.lambda = Table<double>(M + 1, N);
    out.run_up = Table<double>(M + 1, N);
    out.class_probability.assign(M + 1, 0.0);
    std::vector<double> column(chunks);
    auto combine = [&](std::size_t k) {
        for (std::uint64_t c = 0; c < chunks; ++c) column[c] = partial[c * width + k];
        return pairwise_sum(column);
    };
    for (std::size_t ell = 0; ell <= M; ++ell) {
        const std::size_t base = ell * (2 * N + 1);
        for (std::size_t n = 0; n < N; ++n) {
            out.lambda(ell, n) = combine(base + n);
            out.run_up(ell, n) = combine(base + N + n);
        }
        out.class_probability[ell] = combine(base + 2 * N);
    }
    return out;
}

} // namespace

DrawdownCoefficients drawdown_coefficients_enum(const TradeDistribution& dist, std::size_t M,
                                                const CoefficientOptions& options) {
    if (M == 0) throw domain_error("path length M must be at least 1");
    const std::size_t N = dist.size();
    const auto total = detail::bounded_power(N, M, options.cap);
    if (!total) {
        throw cap_exceeded(cap_message("enumerating " + std::to_string(N) + "^" + std::to_string(M) + " paths",
                                       options.cap));
    }
    const TradeSums sums(dist, M, options.max_denominator);
    const bool keys_fit = detail::bounded_power(M + 1, N, std::numeric_limits<std::uint64_t>::max() / 2).has_value();
    const std::uint64_t vectors = count_vector_total(N, M);
    const bool tally_fits = keys_fit && vectors <= max_tally_entries &&
                            vectors * (M + 1) * (N + 1) <= max_tally_entries;
    return tally_fits ? enumerate_tallied(dist, M, *total, sums, options)
                      : enumerate_direct(dist, M, *total, sums, options);
}

namespace {

// Probability that a length-len iid path keeps every prefix sum inside the
// admissible half-line, and the same event weighted by trade counts.
struct SegmentSeries {
    std::vector<double> mass;  // [len]
    Table<double> counts;      // [len][n]
};

SegmentSeries constrained_walks(std::span<const std::int64_t> steps, std::span<const double> probs, std::size_t max_len,
                                bool strictly_positive) {
    const std::size_t N = steps.size();
    std::int64_t max_abs = 0;
    for (auto s : steps) max_abs = std::max(max_abs, s < 0 ? -s : s);
    const std::int64_t offset = static_cast<std::int64_t>(max_len) * max_abs;
    const std::size_t width = static_cast<std::size_t>(2 * offset + 1);
    const std::size_t stride = N + 1;  // mass, then per-trade count masses

    auto admissible = [&](std::int64_t s) { return strictly_positive ? s > 0 : s <= 0; };

    std::vector<double> cur(width * stride, 0.0), next(width * stride, 0.0);
    cur[static_cast<std::size_t>(offset) * stride] = 1.0;
    std::int64_t lo = 0, hi = 0;

    SegmentSeries out;
    out.mass.assign(max_len + 1, 0.0);
    out.counts = Table<double>(max_len + 1, N);
    out.mass[0] = 1.0;

    for (std::size_t len = 1; len <= max_len; ++len) {
        std::fill(next.begin(), next.end(), 0.0);
        std::int64_t next_lo = std::numeric_limits<std::int64_t>::max();
        std::int64_t next_hi = std::numeric_limits<std::int64_t>::min();
        for (std::int64_t s = lo; s <= hi; ++s) {
            const double* src = &cur[static_cast<std::size_t>(s + offset) * stride];
            if (src[0] == 0.0) continue;
            for (std::size_t n = 0; n < N; ++n) {
                const std::int64_t t = s + steps[n];
                if (!admissible(t)) continue;
                double* dst = &next[static_cast<std::size_t>(t + offset) * stride];
                const double p = probs[n];
                dst[0] += src[0] * p;
                for (std::size_t k = 0; k < N; ++k) dst[1 + k] += src[1 + k] * p;
                dst[1 + n] += src[0] * p;
                next_lo = std::min(next_lo, t);
                next_hi = std::max(next_hi, t);
            }
        }
        std::swap(cur, next);
        if (next_lo > next_hi) {
            lo = 0;
            hi = -1;
            continue;
        }
        lo = next_lo;
        hi = next_hi;
        CompensatedSum mass;
        std::vector<CompensatedSum> counts(N);
        for (std::int64_t s = lo; s <= hi; ++s) {
            const double* src = &cur[static_cast<std::size_t>(s + offset) * stride];
            mass.add(src[0]);
            for (std::size_t k = 0; k < N; ++k) counts[k].add(src[1 + k]);
        }
        out.mass[len] = mass.value();
        for (std::size_t k = 0; k < N; ++k) out.counts(len, k) = counts[k].value();
    }
    return out;
}

} // namespace

DrawdownCoefficients drawdown_coefficients_dp(const TradeDistribution& dist, std::size_t M,
                                              const CoefficientOptions& options) {
    if (M == 0) throw domain_error("path length M must be at least 1");
    const auto lattice = integer_scaling(dist, options.dp_max_abs, options.max_denominator);
    if (!lattice) {
        throw no_integer_scaling("trades admit no integer scaling with |s t_n| <= " +
                                 std::to_string(options.dp_max_abs) +
                                 "; use enumeration or Monte Carlo simulation instead");
    }
    const std::size_t N = dist.size();
    // Suffix-positivity of a segment is prefix-positivity of its reversal,
    // which has the same law for iid draws.
    const auto run_up_segment = constrained_walks(lattice->scaled, dist.probs(), M, true);
    const auto drawdown_segment = constrained_walks(lattice->scaled, dist.probs(), M, false);

    DrawdownCoefficients out;
    out.method = CoefficientMethod::dp;
    out.lambda = Table<double>(M + 1, N);
    out.run_up = Table<double>(M + 1, N);
    out.class_probability.assign(M + 1, 0.0);
    for (std::size_t ell = 0; ell <= M; ++ell) {
        const std::size_t rest = M - ell;
        out.class_probability[ell] = run_up_segment.mass[ell] * drawdown_segment.mass[rest];
        for (std::size_t n = 0; n < N; ++n) {
            out.lambda(ell, n) = run_up_segment.mass[ell] * drawdown_segment.counts(rest, n);
            out.run_up(ell, n) = run_up_segment.counts(ell, n) * drawdown_segment.mass[rest];
        }
    }
    return out;
}

CoefficientSet coefficient_set(const TradeDistribution& dist, std::size_t M, CoefficientMethod method,
                               const CoefficientOptions& options) {
    CoefficientSet out;
    out.M = M;
    out.N = dist.size();
    out.updown = updown_coefficients(dist, M, options);
    if (method == CoefficientMethod::automatic) {
        method = detail::bounded_power(dist.size(), M, options.cap) ? CoefficientMethod::enumeration
                                                                    : CoefficientMethod::dp;
    }
    out.drawdown = method == CoefficientMethod::enumeration ? drawdown_coefficients_enum(dist, M, options)
                                                            : drawdown_coefficients_dp(dist, M, options);
    return out;
}

std::size_t classify_path(const TradeDistribution& dist, const Outcome& omega) {
    const TradeSums sums(dist, omega.length(), 1'000'000);
    return sums.first_argmax(omega.draws());
}

SmallFExpectation smallf_expectation(const CoefficientSet& coeffs, const TradeDistribution& dist, Fraction f) {
    const auto logs = log_hprs(dist, f);
    const auto sum_lambda = coeffs.drawdown.sum_lambda();
    const auto sum_run_up = coeffs.drawdown.sum_run_up();
    SmallFExpectation out;
    for (std::size_t n = 0; n < dist.size(); ++n) {
        out.u += coeffs.updown.U[n] * logs[n];
        out.d += coeffs.updown.D[n] * logs[n];
        out.d_cur += sum_lambda[n] * logs[n];
        out.r += sum_run_up[n] * logs[n];
    }
    return out;
}

} // namespace riskfrac
