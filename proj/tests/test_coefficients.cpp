#include "riskfrac/coefficients.hpp"
#include "riskfrac/errors.hpp"
#include "riskfrac/outcome_space.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace riskfrac;

namespace {

TradeDistribution toss() { return TradeDistribution::uniform({-1.0, 2.0}); }

std::vector<Rational> R(std::initializer_list<std::pair<int, int>> xs) {
    std::vector<Rational> out;
    for (auto [n, d] : xs) out.emplace_back(n, d);
    return out;
}

} // namespace

TEST(CountVectors, EnumerationAndMultinomialIdentity) {
    EXPECT_EQ(count_vector_total(2, 100), 101u);
    EXPECT_EQ(count_vector_total(3, 4), 15u);
    EXPECT_EQ(count_vector_total(1, 7), 1u);

    const std::vector<Rational> p = R({{1, 2}, {1, 3}, {1, 6}});
    Rational total = 0;
    std::vector<Rational> first_moment(3);
    std::size_t seen = 0;
    for_each_count_vector(3, 6, [&](const CountVector& x) {
        ++seen;
        EXPECT_EQ(x.length(), 6u);
        Rational w = Rational(x.multinomial());
        for (std::size_t n = 0; n < 3; ++n) {
            for (std::uint32_t k = 0; k < x.counts[n]; ++k) w *= p[n];
        }
        total += w;
        for (std::size_t n = 0; n < 3; ++n) first_moment[n] += w * x.counts[n];
        EXPECT_NEAR(x.log_multinomial(), std::log(x.multinomial().convert_to<double>()), 1e-12);
    });
    EXPECT_EQ(seen, count_vector_total(3, 6));
    EXPECT_EQ(total, 1);
    for (std::size_t n = 0; n < 3; ++n) EXPECT_EQ(first_moment[n], p[n] * 6);
}

TEST(UpDown, TossGameExamples) {
    const auto u3 = updown_coefficients(toss(), 3);
    ASSERT_TRUE(u3.U_exact && u3.D_exact);
    EXPECT_EQ(*u3.U_exact, R({{3, 8}, {9, 8}}));
    EXPECT_EQ(*u3.D_exact, R({{9, 8}, {3, 8}}));

    const auto u1 = updown_coefficients(toss(), 1);
    EXPECT_EQ(*u1.U_exact, R({{0, 1}, {1, 2}}));
    EXPECT_EQ(*u1.D_exact, R({{1, 2}, {0, 1}}));

    const auto u2 = updown_coefficients(toss(), 2);
    EXPECT_EQ(*u2.U_exact, R({{1, 2}, {1, 1}}));
    EXPECT_EQ(*u2.D_exact, R({{1, 2}, {0, 1}}));
}

TEST(UpDown, MatchesPathOracleAndSumsToPM) {
    const std::vector<std::vector<std::int64_t>> trade_sets = {{-1, 2}, {-1, 2, 3}, {-3, -1, 1, 4}, {-2, 1}};
    const std::vector<std::vector<Rational>> prob_sets = {
        R({{1, 2}, {1, 2}}), R({{1, 2}, {1, 3}, {1, 6}}), R({{1, 5}, {3, 10}, {1, 4}, {1, 4}}), R({{1, 3}, {2, 3}})};
    for (std::size_t s = 0; s < trade_sets.size(); ++s) {
        std::vector<double> trades(trade_sets[s].begin(), trade_sets[s].end());
        auto d = TradeDistribution::from_exact(trades, prob_sets[s]);
        for (std::size_t M = 1; M <= 7; ++M) {
            const auto c = updown_coefficients(d, M);
            const auto o = oracle::updown(trade_sets[s], prob_sets[s], M);
            ASSERT_TRUE(c.U_exact);
            for (std::size_t n = 0; n < trades.size(); ++n) {
                EXPECT_EQ((*c.U_exact)[n], o.U[n]);
                EXPECT_EQ((*c.D_exact)[n], o.D[n]);
                EXPECT_EQ((*c.U_exact)[n] + (*c.D_exact)[n], prob_sets[s][n] * M);
            }
        }
    }
}

TEST(UpDown, LogSpaceRouteForLargeM) {
    const auto c = updown_coefficients(toss(), 100);
    EXPECT_FALSE(c.U_exact);
    for (std::size_t n = 0; n < 2; ++n) EXPECT_NEAR(c.U[n] + c.D[n], 50.0, 1e-10);
    // floating route agrees with the exact one where both apply
    CoefficientOptions no_exact;
    no_exact.exact_max_M = 0;
    const auto fl = updown_coefficients(toss(), 15, no_exact);
    const auto ex = updown_coefficients(toss(), 15);
    for (std::size_t n = 0; n < 2; ++n) EXPECT_NEAR(fl.U[n], to_double((*ex.U_exact)[n]), 1e-12);
}

TEST(UpDown, CapExceeded) {
    CoefficientOptions tiny;
    tiny.cap = 10;
    EXPECT_THROW(updown_coefficients(toss(), 10, tiny), cap_exceeded);
    EXPECT_THROW(updown_coefficients(toss(), 0), domain_error);
}

TEST(Drawdown, TossGameM3Table) {
    const auto c = drawdown_coefficients_enum(toss(), 3);
    ASSERT_TRUE(c.lambda_exact && c.run_up_exact);
    const auto& L = *c.lambda_exact;
    const auto& Rr = *c.run_up_exact;
    // per-topping-position table
    const Rational lambda[4][2] = {{Rational(5, 8), Rational(1, 8)},
                                   {Rational(2, 8), Rational(0)},
                                   {Rational(2, 8), Rational(0)},
                                   {Rational(0), Rational(0)}};
    const Rational run_up[4][2] = {{Rational(0), Rational(0)},
                                   {Rational(0), Rational(1, 8)},
                                   {Rational(1, 8), Rational(3, 8)},
                                   {Rational(2, 8), Rational(7, 8)}};
    for (std::size_t ell = 0; ell <= 3; ++ell) {
        for (std::size_t n = 0; n < 2; ++n) {
            EXPECT_EQ(L(ell, n), lambda[ell][n]) << "ell=" << ell << " n=" << n;
            EXPECT_EQ(Rr(ell, n), run_up[ell][n]) << "ell=" << ell << " n=" << n;
        }
    }
    EXPECT_EQ(L.column_sums(), R({{9, 8}, {1, 8}}));
    EXPECT_EQ(Rr.column_sums(), R({{3, 8}, {11, 8}}));
    EXPECT_DOUBLE_EQ(c.class_probability[0], 2.0 / 8);
    EXPECT_DOUBLE_EQ(c.class_probability[3], 3.0 / 8);
}

TEST(Drawdown, TossGameM1) {
    const auto c = drawdown_coefficients_enum(toss(), 1);
    EXPECT_EQ(c.lambda_exact->column_sums(), R({{1, 2}, {0, 1}}));
    EXPECT_EQ(c.run_up_exact->column_sums(), R({{0, 1}, {1, 2}}));
}

TEST(Drawdown, EnumerationMatchesLiteralOracle) {
    const std::vector<std::vector<std::int64_t>> trade_sets = {{-1, 2}, {-1, 2, 3}, {-3, -1, 1, 4}};
    const std::vector<std::vector<Rational>> prob_sets = {
        R({{1, 2}, {1, 2}}), R({{1, 2}, {1, 3}, {1, 6}}), R({{1, 5}, {3, 10}, {1, 4}, {1, 4}})};
    const std::size_t max_M[] = {10, 7, 5};
    for (std::size_t s = 0; s < trade_sets.size(); ++s) {
        std::vector<double> trades(trade_sets[s].begin(), trade_sets[s].end());
        auto d = TradeDistribution::from_exact(trades, prob_sets[s]);
        for (std::size_t M = 1; M <= max_M[s]; ++M) {
            const auto c = drawdown_coefficients_enum(d, M);
            const auto o = oracle::drawdown(trade_sets[s], prob_sets[s], M);
            ASSERT_TRUE(c.lambda_exact);
            for (std::size_t ell = 0; ell <= M; ++ell) {
                for (std::size_t n = 0; n < trades.size(); ++n) {
                    ASSERT_EQ((*c.lambda_exact)(ell, n), o.lambda[ell][n]) << "set " << s << " M " << M;
                    ASSERT_EQ((*c.run_up_exact)(ell, n), o.run_up[ell][n]) << "set " << s << " M " << M;
                }
            }
            // boundary rows vanish; totals are p_n M
            const auto sl = c.lambda_exact->column_sums();
            const auto sr = c.run_up_exact->column_sums();
            for (std::size_t n = 0; n < trades.size(); ++n) {
                EXPECT_EQ((*c.lambda_exact)(M, n), 0);
                EXPECT_EQ((*c.run_up_exact)(0, n), 0);
                EXPECT_EQ(sl[n] + sr[n], prob_sets[s][n] * M);
            }
            double total = 0.0;
            for (double p : c.class_probability) total += p;
            EXPECT_NEAR(total, 1.0, 1e-14);
        }
    }
}

TEST(Drawdown, DirectRouteAgreesWithTallies) {
    // Floating probabilities exercise the double tally path; compare with
    // the exact version of the same distribution.
    auto exact = TradeDistribution::from_exact({-1.0, 2.0, 3.0}, R({{1, 2}, {1, 4}, {1, 4}}));
    auto real = TradeDistribution::from_probabilities({-1.0, 2.0, 3.0}, {0.5, 0.25, 0.25});
    const auto a = drawdown_coefficients_enum(exact, 8);
    const auto b = drawdown_coefficients_enum(real, 8);
    for (std::size_t ell = 0; ell <= 8; ++ell) {
        for (std::size_t n = 0; n < 3; ++n) {
            EXPECT_NEAR(a.lambda(ell, n), b.lambda(ell, n), 1e-14);
            EXPECT_NEAR(a.run_up(ell, n), b.run_up(ell, n), 1e-14);
        }
    }
}

TEST(Drawdown, NonLatticeTradesStillEnumerate) {
    auto d = TradeDistribution::uniform({-1.0, std::sqrt(2.0)});
    const auto c = drawdown_coefficients_enum(d, 6);
    const auto sl = c.sum_lambda();
    const auto sr = c.sum_run_up();
    for (std::size_t n = 0; n < 2; ++n) EXPECT_NEAR(sl[n] + sr[n], 3.0, 1e-12);
    EXPECT_THROW(drawdown_coefficients_dp(d, 6), no_integer_scaling);
}

TEST(Drawdown, DpMatchesEnumeration) {
    for (std::size_t M = 1; M <= 14; ++M) {
        const auto e = drawdown_coefficients_enum(toss(), M);
        const auto p = drawdown_coefficients_dp(toss(), M);
        EXPECT_EQ(p.method, CoefficientMethod::dp);
        for (std::size_t ell = 0; ell <= M; ++ell) {
            for (std::size_t n = 0; n < 2; ++n) {
                ASSERT_NEAR(e.lambda(ell, n), p.lambda(ell, n), 1e-10) << "M " << M << " ell " << ell;
                ASSERT_NEAR(e.run_up(ell, n), p.run_up(ell, n), 1e-10) << "M " << M << " ell " << ell;
            }
            ASSERT_NEAR(e.class_probability[ell], p.class_probability[ell], 1e-12);
        }
    }
    auto three = TradeDistribution::from_exact({-1.0, 2.0, 3.0}, R({{1, 2}, {1, 3}, {1, 6}}));
    for (std::size_t M = 1; M <= 8; ++M) {
        const auto e = drawdown_coefficients_enum(three, M);
        const auto p = drawdown_coefficients_dp(three, M);
        for (std::size_t ell = 0; ell <= M; ++ell) {
            for (std::size_t n = 0; n < 3; ++n) {
                ASSERT_NEAR(e.lambda(ell, n), p.lambda(ell, n), 1e-10);
                ASSERT_NEAR(e.run_up(ell, n), p.run_up(ell, n), 1e-10);
            }
        }
    }
}

TEST(Drawdown, DpScalesToLargeM) {
    const auto c = drawdown_coefficients_dp(toss(), 100);
    const auto sl = c.sum_lambda();
    const auto sr = c.sum_run_up();
    for (std::size_t n = 0; n < 2; ++n) EXPECT_NEAR(sl[n] + sr[n], 50.0, 1e-10);
    double total = 0.0;
    for (double p : c.class_probability) total += p;
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Drawdown, DpRefusesWideLattice) {
    auto d = TradeDistribution::uniform({-1.0, 100.0});
    EXPECT_THROW(drawdown_coefficients_dp(d, 5), no_integer_scaling);
    CoefficientOptions wide;
    wide.dp_max_abs = 128;
    EXPECT_NO_THROW(drawdown_coefficients_dp(d, 5, wide));
}

TEST(Drawdown, WorkerCountIndependence) {
    auto d = TradeDistribution::from_probabilities({-1.0, 2.0, 3.0}, {0.45, 0.3, 0.25});
    CoefficientOptions one, many;
    one.workers = 1;
    many.workers = 5;
    const auto a = drawdown_coefficients_enum(d, 12, one);
    const auto b = drawdown_coefficients_enum(d, 12, many);
    for (std::size_t ell = 0; ell <= 12; ++ell) {
        for (std::size_t n = 0; n < 3; ++n) {
            EXPECT_EQ(a.lambda(ell, n), b.lambda(ell, n));
            EXPECT_EQ(a.run_up(ell, n), b.run_up(ell, n));
        }
    }
}

TEST(Drawdown, ClassificationMatchesToppingIndexAtSmallF) {
    const auto d3 = TradeDistribution::uniform({-1.0, 2.0, 3.0});
    for (const auto& d : {toss(), d3}) {
        const std::size_t M = d.size() == 2 ? 10 : 7;
        oracle::for_each_path(d.size(), M, [&](const std::vector<int>& path) {
            Outcome omega(d, std::vector<std::size_t>(path.begin(), path.end()));
            ASSERT_EQ(classify_path(d, omega), topping_index(d, Fraction(1e-4), omega));
        });
    }
}

TEST(SmallF, Examples) {
    const auto c = coefficient_set(toss(), 3);
    const double f = 0.2;
    const auto e = smallf_expectation(c, toss(), Fraction(f));
    EXPECT_NEAR(e.d_cur, 9.0 / 8 * std::log(1 - f) + 1.0 / 8 * std::log(1 + 2 * f), 1e-14);
    EXPECT_NEAR(e.r, 3.0 / 8 * std::log(1 - f) + 11.0 / 8 * std::log(1 + 2 * f), 1e-14);
    EXPECT_NEAR(e.u, 3.0 / 8 * std::log(1 - f) + 9.0 / 8 * std::log(1 + 2 * f), 1e-14);
    EXPECT_NEAR(e.d, 9.0 / 8 * std::log(1 - f) + 3.0 / 8 * std::log(1 + 2 * f), 1e-14);
    const auto zero = smallf_expectation(c, toss(), Fraction(0.0));
    EXPECT_EQ(zero.u, 0.0);
    EXPECT_EQ(zero.d, 0.0);
    EXPECT_EQ(zero.d_cur, 0.0);
    EXPECT_EQ(zero.r, 0.0);
}

TEST(SmallF, AgreesWithExactEnumerationForSmallF) {
    auto d3 = TradeDistribution::from_exact({-1.0, 2.0, 3.0}, R({{1, 2}, {1, 3}, {1, 6}}));
    for (const auto& d : {toss(), d3}) {
        for (std::size_t M = 1; M <= 8; ++M) {
            const auto c = coefficient_set(d, M);
            const auto s = smallf_expectation(c, d, Fraction(0.005));
            const auto e = exact_expectations(d, Fraction(0.005), M);
            EXPECT_NEAR(s.u, e.E_U, 1e-10);
            EXPECT_NEAR(s.d, e.E_D, 1e-10);
            EXPECT_NEAR(s.d_cur, e.E_Dcur, 1e-10);
            EXPECT_NEAR(s.r, e.E_R, 1e-10);
        }
    }
}

TEST(SmallF, ApproximationDriftsForLargeF) {
    const auto c = coefficient_set(toss(), 3);
    double worst = 0.0;
    for (int i = 60; i < 100; ++i) {
        const Fraction f(i / 100.0);
        worst = std::max(worst, std::abs(smallf_expectation(c, toss(), f).d_cur -
                                         exact_expectations(toss(), f, 3).E_Dcur));
    }
    EXPECT_GT(worst, 1e-6);
}

TEST(CoefficientSet, AutomaticMethodSelection) {
    CoefficientOptions small_cap;
    small_cap.cap = 1 << 10;
    EXPECT_EQ(coefficient_set(toss(), 10, CoefficientMethod::automatic, small_cap).drawdown.method,
              CoefficientMethod::enumeration);
    EXPECT_EQ(coefficient_set(toss(), 11, CoefficientMethod::automatic, small_cap).drawdown.method,
              CoefficientMethod::dp);
    EXPECT_THROW(coefficient_set(toss(), 11, CoefficientMethod::enumeration, small_cap), cap_exceeded);
}
