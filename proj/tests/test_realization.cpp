#include <gtest/gtest.h>

#include "tropic/corpus.hpp"
#include "tropic/fixtures.hpp"
#include "tropic/realization.hpp"

using namespace tropic;

namespace {

NovikovSeries S(const char* text) { return NovikovSeries::parse(text); }

template <class F>
Errc error_code(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return Errc::InvalidInput;
}

}  // namespace

TEST(Realization, LiftCoefficientsExamples) {
    auto F = lift_coefficients(fixtures::line_polynomial());
    for (const auto& [alpha, c] : F.coefficients()) EXPECT_EQ(c, NovikovSeries(1));
    EXPECT_EQ(F.coefficients().size(), 3u);

    TropicalPolynomial g(1, {{zvec({0}), 0}, {zvec({1}), 3}});
    auto G = lift_coefficients(g, {{zvec({1}), UnitaryElement(S("1 + 1*T^1"))}});
    EXPECT_EQ(G.coefficients().at(zvec({1})), S("1*T^3 + 1*T^4"));
    EXPECT_EQ(G.coefficients().at(zvec({1})).valuation(), Exponent(3));
    EXPECT_THROW(UnitaryElement(S("1*T^1")), Error);
}

TEST(Realization, TropicalizePointExamples) {
    EXPECT_EQ(tropicalize_point(AnalyticPoint({S("1*T^-3"), S("-1*T^-3 + -1")})), qvec({-3, -3}));
    EXPECT_EQ(tropicalize_point(AnalyticPoint({S("1"), S("1")})), qvec({0, 0}));
    EXPECT_EQ(tropicalize_point(AnalyticPoint({S("1*T^1/2"), S("1*T^2")})), qvec({Rational(1, 2), 2}));
    EXPECT_THROW(AnalyticPoint({NovikovSeries()}), Error);
}

TEST(Realization, KapranovExamples) {
    auto F = lift_coefficients(fixtures::line_polynomial());
    // Substitution: 1 + T^-3 + (-1 - T^-3) = 0 exactly.
    auto v = kapranov_check(F, AnalyticPoint({S("1*T^-3"), S("-1*T^-3 + -1")}));
    EXPECT_TRUE(v.ok);
    EXPECT_TRUE(v.residual.is_infinite());
    EXPECT_EQ(v.achievers.size(), 2u);
    EXPECT_EQ(error_code([&] { kapranov_check(F, AnalyticPoint({S("1"), S("1")})); }), Errc::NotAZero);
    EXPECT_EQ(evaluate(F, AnalyticPoint({S("1"), S("1")})), NovikovSeries(3));
}

TEST(Realization, NewtonExamples) {
    auto linear = newton_lift_root({NovikovSeries(-5), NovikovSeries(1)}, NovikovSeries(5), 10);
    EXPECT_EQ(linear.root, S("5 + O(T^10)"));

    // Oracle: sqrt(1 + T) = sum binom(1/2, k) T^k.
    auto sq = newton_lift_root({S("-1 + -1*T^1"), NovikovSeries(0), NovikovSeries(1)}, NovikovSeries(1), 10);
    Rational binom = 1;
    for (long k = 0; k < 10; ++k) {
        EXPECT_EQ(sq.root.coefficient(k), binom) << "k = " << k;
        binom = binom * (Rational(1, 2) - k) / (k + 1);
    }
    EXPECT_EQ(sq.root.coefficient(1), Rational(1, 2));
    EXPECT_EQ(sq.root.coefficient(2), Rational(-1, 8));
    EXPECT_EQ(sq.root.precision(), Exponent(10));
    ASSERT_GE(sq.residual_log.size(), 4u);
    EXPECT_EQ(sq.residual_log[0], Exponent(1));
    EXPECT_EQ(sq.residual_log[1], Exponent(2));
    EXPECT_EQ(sq.residual_log[2], Exponent(4));
    EXPECT_EQ(sq.residual_log[3], Exponent(8));

    EXPECT_EQ(error_code([] { newton_lift_root({NovikovSeries(1), NovikovSeries(-2), NovikovSeries(1)}, NovikovSeries(1), 10); }),
              Errc::SingularInitialTerm);
}

TEST(Realization, RealizePointExamples) {
    auto F = lift_coefficients(fixtures::line_polynomial());
    auto r = realize_point(F, qvec({-3, -3}));
    EXPECT_EQ(r.point.coordinates()[0], S("1*T^-3"));
    EXPECT_EQ(r.point.coordinates()[1], S("-1*T^-3 + -1 + O(T^10)"));
    auto r2 = realize_point(F, qvec({2, 0}));
    EXPECT_EQ(r2.point.coordinates()[0], S("1*T^2"));
    EXPECT_EQ(r2.point.coordinates()[1], S("-1 + -1*T^2 + O(T^10)"));
    EXPECT_EQ(error_code([&] { realize_point(F, qvec({-1, 5})); }), Errc::NotOnTropicalization);
    EXPECT_EQ(error_code([&] { realize_point(F, qvec({0, 0})); }), Errc::VertexPoint);
    // Weight-two facet with leading equation w^2 = -1.
    auto G = lift_coefficients(TropicalPolynomial(1, {{zvec({0}), 0}, {zvec({2}), 0}}));
    EXPECT_EQ(error_code([&] { realize_point(G, qvec({0})); }), Errc::NoRationalRoot);
}

TEST(Realization, FuzzRoundTrip) {
    std::mt19937_64 rng(101);
    int points = 0;
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t n = 1 + trial % 3;
        auto f = corpus::random_realizable_polynomial(rng, n, 6);
        auto F = lift_coefficients(f, corpus::random_seeds(rng, f));
        for (const auto& q : sample_facet_points(f, 6, rng)) {
            auto r = realize_point(F, q);
            ASSERT_EQ(tropicalize_point(r.point), q);
            auto v = kapranov_check(F, r.point);
            ASSERT_TRUE(v.ok);
            ASSERT_GE(v.residual, Exponent(10));
            // Quadratic convergence: each residual at least doubles until the target.
            const auto& log = r.lift.residual_log;
            for (std::size_t k = 1; k < log.size(); ++k)
                ASSERT_TRUE(log[k] >= log[k - 1] + log[k - 1] || log[k] >= Exponent(10 - v.minimum));
            ++points;
        }
    }
    EXPECT_EQ(points, 150);
}

TEST(Realization, SampledPointsHaveExactlyTwoAchievers) {
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 20; ++trial) {
        auto f = corpus::random_realizable_polynomial(rng, 2, 6);
        for (const auto& q : sample_facet_points(f, 10, rng)) ASSERT_EQ(trop_eval(f, q).argmin.size(), 2u);
    }
}
