#pragma once

#include "riskfrac/rational.hpp"
#include "riskfrac/trade_distribution.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace riskfrac {

// Dense row-major table; rows are topping positions l = 0..M, columns are
// trade indices.
template <class T>
class Table {
public:
    Table() = default;
    Table(std::size_t rows, std::size_t cols, const T& init = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, init) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const T> row(std::size_t r) const { return std::span<const T>(data_).subspan(r * cols_, cols_); }

    // Sum over rows, one entry per column.
    std::vector<T> column_sums() const {
        std::vector<T> out(cols_, T{});
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) out[c] += (*this)(r, c);
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

// How often each trade occurs in a path of length M = sum(counts).
struct CountVector {
    std::vector<std::uint32_t> counts;

    std::size_t length() const noexcept;
    // M! / (x_1! ... x_N!)
    BigInt multinomial() const;
    double log_multinomial() const;
    // sum_n x_n t_n > 0 evaluated on the given integer lattice.
    bool profitable(std::span<const std::int64_t> scaled_trades) const;
};

// Visits every composition of M into N nonnegative parts, in
// lexicographic order of the count vector.
void for_each_count_vector(std::size_t N, std::size_t M, const std::function<void(const CountVector&)>& fn);

// C(M+N-1, N-1), saturating at UINT64_MAX.
std::uint64_t count_vector_total(std::size_t N, std::size_t M);

enum class CoefficientMethod { enumeration, dp, automatic };

struct CoefficientOptions {
    // Upper bound on enumerated paths (N^M) or count vectors.
    std::uint64_t cap = 20'000'000;
    // Exact rational arithmetic is used up to this M when the
    // distribution carries exact probabilities.
    std::size_t exact_max_M = 20;
    // Bound on |s t_n| for the partial-sum dynamic program.
    std::int64_t dp_max_abs = 64;
    // Largest rational denominator tried when scaling trades to integers.
    std::int64_t max_denominator = 1'000'000;
    unsigned workers = 0;
};

// Coefficients of the up-trade / down-trade expansions:
//   U_n = sum_{x : sum x_i t_i > 0}  p^x multinom(x) x_n
//   D_n = sum_{x : sum x_i t_i <= 0} p^x multinom(x) x_n
struct UpDownCoefficients {
    std::vector<double> U;
    std::vector<double> D;
    std::optional<std::vector<Rational>> U_exact;
    std::optional<std::vector<Rational>> D_exact;
};

// Current-drawdown / run-up coefficients, indexed [l][n] for l = 0..M.
// lambda(l, n) weights trade n among the draws after the topping position
// l, run_up(l, n) among the draws up to l. class_probability[l] is the
// probability that a path tops at l for small f.
struct DrawdownCoefficients {
    Table<double> lambda;
    Table<double> run_up;
    std::vector<double> class_probability;
    CoefficientMethod method = CoefficientMethod::enumeration;
    std::optional<Table<Rational>> lambda_exact;
    std::optional<Table<Rational>> run_up_exact;

    std::vector<double> sum_lambda() const { return lambda.column_sums(); }
    std::vector<double> sum_run_up() const { return run_up.column_sums(); }
};

struct CoefficientSet {
    std::size_t M = 0;
    std::size_t N = 0;
    UpDownCoefficients updown;
    DrawdownCoefficients drawdown;
};

UpDownCoefficients updown_coefficients(const TradeDistribution& dist, std::size_t M,
                                       const CoefficientOptions& options = {});

// Brute force over all N^M paths. Each path is classified by the first
// index attaining the maximum of its trade partial sums (including the
// empty prefix), which is the small-f topping position.
DrawdownCoefficients drawdown_coefficients_enum(const TradeDistribution& dist, std::size_t M,
                                                const CoefficientOptions& options = {});

// Segment-factorised dynamic program over exact integer partial sums:
//   lambda(l, n) = A(l) B_n(M - l),  run_up(l, n) = A_n(l) B(M - l)
// where A is the probability that all suffix sums of a length-l path are
// strictly positive and B that all prefix sums of a length-m path are
// nonpositive; the _n variants weight the event by the count of trade n.
// Throws no_integer_scaling when the trades admit no bounded lattice.
DrawdownCoefficients drawdown_coefficients_dp(const TradeDistribution& dist, std::size_t M,
                                              const CoefficientOptions& options = {});

// Chooses enumeration when N^M <= options.cap, otherwise the DP.
CoefficientSet coefficient_set(const TradeDistribution& dist, std::size_t M,
                               CoefficientMethod method = CoefficientMethod::automatic,
                               const CoefficientOptions& options = {});

// Small-f topping position from trade sums alone: first argmax of the
// partial sums S_0 = 0, S_1, ..., S_M.
std::size_t classify_path(const TradeDistribution& dist, const Outcome& omega);

struct SmallFExpectation {
    double u = 0.0;
    double d = 0.0;
    double d_cur = 0.0;
    double r = 0.0;
};

// sum_n c_n log(1 + f a_n) for c = U, D, sum_l lambda, sum_l run_up.
SmallFExpectation smallf_expectation(const CoefficientSet& coeffs, const TradeDistribution& dist, Fraction f);

} // namespace riskfrac
