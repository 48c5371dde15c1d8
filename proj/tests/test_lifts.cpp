#include <gtest/gtest.h>

#include <random>

#include "tropic/corpus.hpp"
#include "tropic/fixtures.hpp"
#include "tropic/lifts.hpp"

using namespace tropic;

namespace {

TropicalCurve pants_in_space() {
    return TropicalCurve(3, {qvec({0, 0, 0})}, {},
                         {{0, zvec({1, 0, 0}), 1}, {0, zvec({0, 1, 0}), 1}, {0, zvec({-1, -1, 0}), 1}});
}

std::size_t rank_of(const RestrictionMatrix& r) { return rank(r.entries, r.cols); }

// Oracle for a single piece: pants x T^{n-2} has b_q = C(n-2, q) + 2 C(n-2, q-1).
long piece_betti(long n, long q) {
    auto binom = [](long a, long b) -> long {
        if (b < 0 || b > a) return 0;
        long out = 1;
        for (long i = 0; i < b; ++i) out = out * (a - i) / (i + 1);
        return out;
    };
    return binom(n - 2, q) + 2 * binom(n - 2, q - 1);
}

}  // namespace

TEST(Lifts, PantsModel) {
    auto m = build_lift_model(fixtures::pants());
    ASSERT_EQ(m.pieces.size(), 1u);
    EXPECT_TRUE(pants_relation_holds(m, 0));
    // In dimension 2 the adapter is +-1, so the restrictions are the template up to sign.
    std::vector<ZVec> expected{zvec({1, 0}), zvec({0, 1}), zvec({-1, -1})};
    for (const auto& r : m.pieces[0].restrictions) {
        ASSERT_EQ(r.matrix.size(), 1u);
        const ZVec& row = r.matrix[0];
        const ZVec& want = expected[static_cast<std::size_t>(r.slot)];
        EXPECT_TRUE(row == want || row == -want) << r.slot;
    }
    EXPECT_EQ(lift_cohomology(m), (std::vector<long>{1, 2, 0}));
}

TEST(Lifts, RestrictionsFactorThroughTemplate) {
    for (const auto& c : {fixtures::pants(), fixtures::line_vc(2), pants_in_space(), fixtures::square()}) {
        auto m = build_lift_model(c);
        for (std::size_t v = 0; v < m.pieces.size(); ++v) EXPECT_TRUE(pants_relation_holds(m, v));
    }
}

TEST(Lifts, PieceInSpaceIsPantsTimesCircle) {
    auto m = build_lift_model(pants_in_space());
    EXPECT_EQ(lift_cohomology(m), (std::vector<long>{1, 3, 2, 0}));
    EXPECT_EQ(lift_cohomology(m)[1], piece_betti(3, 1));
}

TEST(Lifts, NotSmoothRejected) {
    TropicalCurve cross(2, {qvec({0, 0})}, {},
                        {{0, zvec({1, 0}), 1}, {0, zvec({-1, 0}), 1}, {0, zvec({0, 1}), 1}, {0, zvec({0, -1}), 1}});
    try {
        build_lift_model(cross);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotSmooth);
    }
}

TEST(Lifts, LineBettiNumbers) {
    auto m = build_lift_model(fixtures::line_vc(3));
    EXPECT_EQ(lift_cohomology(m), (std::vector<long>{1, 4, 3, 0}));
    EXPECT_EQ(lift_cohomology(m, Field::Two), (std::vector<long>{1, 4, 3, 0}));
}

TEST(Lifts, EndRestrictionExamples) {
    auto pants = build_lift_model(fixtures::pants());
    for (std::size_t f = 0; f < 3; ++f) {
        EXPECT_EQ(rank_of(end_restriction(pants, f, 1)), 1u);
        EXPECT_EQ(rank_of(end_restriction(pants, f, 0)), 1u);
        EXPECT_TRUE(check_h1_surjection(pants, f));
        EXPECT_TRUE(check_h2_injection(pants, f));
        EXPECT_TRUE(unobstructedness_criterion(pants, f).unobstructed);
    }
    auto vc = build_lift_model(fixtures::line_vc(1));
    // Ray 0 of the fixture points along e1.
    ASSERT_EQ(fixtures::line_vc(1).rays()[0].direction, zvec({1, 0, 0}));
    EXPECT_EQ(rank_of(end_restriction(vc, 0, 2)), 1u);
    for (std::size_t f = 0; f < 4; ++f) {
        EXPECT_TRUE(check_h1_surjection(vc, f));
        EXPECT_TRUE(check_h2_injection(vc, f));
        auto verdict = unobstructedness_criterion(vc, f);
        EXPECT_TRUE(verdict.unobstructed);
        EXPECT_TRUE(verdict.warnings.empty());
    }
    try {
        end_restriction(vc, 4, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotAnEnd);
    }
}

TEST(Lifts, GenusOneWarns) {
    auto m = build_lift_model(fixtures::square());
    // Plane pieces are bare pants (chi = -1) glued along circles (chi = 0).
    EXPECT_EQ(euler_characteristic(lift_cohomology(m)), -4);
    EXPECT_EQ(lift_cohomology(m)[0], 1);
    auto v = unobstructedness_criterion(m, 0);
    EXPECT_EQ(v.warnings.size(), 1u);
}

TEST(Lifts, SingleVertexMatchesPiece) {
    for (long n = 2; n <= 4; ++n) {
        ZVec e1(n, Integer(0)), e2(n, Integer(0));
        e1[0] = 1;
        e2[1] = 1;
        TropicalCurve c(static_cast<std::size_t>(n), {QVec(n, Rational(0))}, {},
                        {{0, e1, 1}, {0, e2, 1}, {0, -(e1 + e2), 1}});
        auto betti = lift_cohomology(build_lift_model(c));
        for (long q = 0; q <= n; ++q) EXPECT_EQ(betti[q], piece_betti(n, q)) << n << " " << q;
    }
}

TEST(Lifts, InvariantUnderUnimodularChange) {
    std::mt19937_64 rng(41);
    auto base = fixtures::line_vc(2);
    auto reference = lift_cohomology(build_lift_model(base));
    for (int trial = 0; trial < 10; ++trial) {
        ZMat g = corpus::random_unimodular(rng, 3);
        auto moved = build_lift_model(transform(base, g, qvec({1, -2, ratio(1, 3)})));
        EXPECT_EQ(lift_cohomology(moved), reference);
        for (std::size_t f = 0; f < 4; ++f) {
            EXPECT_EQ(rank_of(end_restriction(moved, f, 2)), 1u);
            EXPECT_TRUE(check_h1_surjection(moved, f));
            EXPECT_TRUE(check_h2_injection(moved, f));
        }
    }
}

TEST(Lifts, RandomTreesSatisfyRestrictionLemma) {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 40; ++trial) {
        auto tree = corpus::random_smooth_tree(rng, 3, 6);
        ASSERT_TRUE(is_smooth_curve(tree).ok);
        ASSERT_EQ(genus(tree), 0);
        auto m = build_lift_model(tree);
        auto betti = lift_cohomology(m);
        ASSERT_EQ(betti[0], 1);
        ASSERT_EQ(euler_characteristic(betti), 0);
        ASSERT_EQ(lift_cohomology(m, Field::Two), betti);
        for (std::size_t f = 0; f < tree.rays().size(); ++f) {
            ASSERT_TRUE(check_h1_surjection(m, f)) << trial << " end " << f;
            ASSERT_TRUE(check_h2_injection(m, f)) << trial << " end " << f;
            ASSERT_TRUE(unobstructedness_criterion(m, f).unobstructed);
        }
    }
}
