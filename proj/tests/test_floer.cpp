#include <gtest/gtest.h>

#include <random>

#include "tropic/corpus.hpp"
#include "tropic/floer.hpp"

using namespace tropic;

namespace {

UnitaryElement unitary(std::initializer_list<std::pair<Rational, Rational>> terms) {
    std::vector<NovikovSeries::Term> ts;
    for (const auto& [e, c] : terms) ts.push_back({e, c});
    return UnitaryElement(NovikovSeries(ts, Exponent::infinity()));
}

NovikovCochainComplex two_term(const NovikovSeries& d) {
    std::vector<std::vector<NovikovSeries>> m(2, std::vector<NovikovSeries>(2));
    m[1][0] = d;
    return NovikovCochainComplex({{"x", 0}, {"y", 1}}, m, 10);
}

::testing::AssertionResult same_to(const NovikovSeries& a, const NovikovSeries& b, const Rational& precision = 10) {
    if ((a - b).truncated(Exponent(precision)).is_zero()) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << a << " vs " << b;
}

// 2^m by direct count, the cohomology of a torus of dimension m.
std::size_t torus_rank(std::size_t m) { return std::size_t(1) << m; }

}  // namespace

TEST(Floer, ConormalExamples) {
    auto trivial = conormal_fiber_complex(2, 1, 1, LocalSystem::trivial(2));
    ASSERT_EQ(trivial.size(), 2u);
    EXPECT_TRUE(trivial.entry(1, 0).is_zero());
    EXPECT_EQ(cohomology_rank(trivial), 2u);

    LocalSystem twisted{{unitary({{0, 1}, {1, 1}}), UnitaryElement(1)}};
    auto c = conormal_fiber_complex(2, 1, 1, twisted);
    // T^1 (1 - (1 + T)) = -T^2
    EXPECT_TRUE(same_to(c.entry(1, 0), NovikovSeries::monomial(-1, 2)));
    EXPECT_EQ(cohomology_rank(c), 0u);

    auto point = conormal_fiber_complex(3, 3, 1, LocalSystem::trivial(3));
    EXPECT_EQ(point.size(), 1u);
    EXPECT_EQ(cohomology_rank(point), 1u);
}

TEST(Floer, ConormalTranspositionSigns) {
    // z_1 = 2, z_2 = 3: d x{} = -T x{1} - 2T x{2}, d x{1} = 2T x{1,2}, d x{2} = -T x{1,2}.
    LocalSystem z{{UnitaryElement(2), UnitaryElement(3)}};
    auto c = conormal_fiber_complex(2, 0, 1, z);
    ASSERT_EQ(c.generators()[3].name, "x{1,2}");
    EXPECT_TRUE(same_to(c.entry(1, 0), NovikovSeries::monomial(-1, 1)));
    EXPECT_TRUE(same_to(c.entry(2, 0), NovikovSeries::monomial(-2, 1)));
    EXPECT_TRUE(same_to(c.entry(3, 1), NovikovSeries::monomial(2, 1)));
    EXPECT_TRUE(same_to(c.entry(3, 2), NovikovSeries::monomial(-1, 1)));
    EXPECT_TRUE(c.squares_to_zero());
}

TEST(Floer, RankExamples) {
    std::vector<std::vector<NovikovSeries>> zero(4, std::vector<NovikovSeries>(4));
    EXPECT_EQ(cohomology_rank(NovikovCochainComplex({{"a", 0}, {"b", 0}, {"c", 1}, {"d", 2}}, zero, 10)), 4u);
    EXPECT_EQ(cohomology_rank(two_term(NovikovSeries::T(1))), 0u);
    EXPECT_EQ(cohomology_rank(two_term(NovikovSeries::T(1)), 0), 0u);
    EXPECT_EQ(cohomology_rank(conormal_fiber_complex(3, 1, 1, LocalSystem::trivial(3))), 4u);
    // Entries at or beyond the precision count as zero.
    EXPECT_EQ(cohomology_rank(two_term(NovikovSeries::T(12))), 2u);
}

TEST(Floer, RankReportsExhaustedPrecision) {
    // A coefficient only known to T^2 cannot decide a rank at precision 10.
    auto vague = NovikovSeries({}, Exponent(2));
    EXPECT_THROW(cohomology_rank(two_term(vague)), Error);
    try {
        cohomology_rank(two_term(vague));
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::PrecisionExhausted);
    }
}

TEST(Floer, RankUsesMinimalValuationPivots) {
    // Pivoting on T leaves T^4 + T^9 - T^2 T^2 = T^9.
    std::vector<std::vector<NovikovSeries>> m{{NovikovSeries::T(1), NovikovSeries::T(2)},
                                              {NovikovSeries::T(3), NovikovSeries::T(4) + NovikovSeries::T(9)}};
    EXPECT_EQ(novikov_rank(m, 10), 2u);
    EXPECT_EQ(novikov_rank(m, 9), 1u);
}

TEST(Floer, ConormalRankLaw) {
    std::mt19937_64 rng(61);
    for (std::size_t n = 0; n <= 4; ++n)
        for (std::size_t k = 0; k <= n; ++k) {
            auto trivial = conormal_fiber_complex(n, k, ratio(1, 2), LocalSystem::trivial(n));
            EXPECT_TRUE(trivial.squares_to_zero());
            EXPECT_EQ(cohomology_rank(trivial), torus_rank(n - k));
            for (int trial = 0; trial < 5 && k < n; ++trial) {
                LocalSystem z = LocalSystem::trivial(n);
                std::uniform_int_distribution<std::size_t> which(0, n - k - 1);
                auto seed = corpus::random_unitary_seed(rng);
                if (seed.series() == NovikovSeries(1)) seed = unitary({{0, 1}, {ratio(3, 2), 1}});
                z.holonomies[which(rng)] = seed;
                auto c = conormal_fiber_complex(n, k, ratio(1, 2), z);
                EXPECT_TRUE(c.squares_to_zero());
                EXPECT_EQ(cohomology_rank(c), 0u) << n << " " << k;
            }
        }
}

TEST(Floer, PantsExamples) {
    auto bare = pants_fiber_complex(1, ratio(1, 8), 1, 1);
    EXPECT_TRUE(same_to(bare.entry(1, 0), NovikovSeries::monomial(1, 1 + ratio(1, 8))));
    EXPECT_EQ(cohomology_rank(bare), 0u);

    auto cancel = pants_fiber_complex(2, ratio(1, 8), unitary({{0, 1}, {2, -1}}), 1);
    EXPECT_TRUE(cancel.entry(1, 0).is_zero());
    EXPECT_EQ(cohomology_rank(cancel), 2u);

    auto shifted = pants_fiber_complex(1, ratio(1, 8), 1, unitary({{0, 1}, {1, 1}}));
    EXPECT_TRUE(shifted.entry(1, 0).is_zero());
}

TEST(Floer, PantsThreshold) {
    // a = 1: C = 1/4, threshold 2 (1/4)(3/4) = 3/8.
    EXPECT_EQ(pants_energy_threshold(1), ratio(3, 8));
    EXPECT_EQ(default_small_energy(1), ratio(3, 16));
    EXPECT_THROW(pants_fiber_complex(1, ratio(3, 8), 1, 1), Error);
    try {
        pants_fiber_complex(0, ratio(1, 8), 1, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ThresholdViolated);
    }
}

TEST(Floer, EnergyThresholdExamples) {
    EXPECT_EQ(energy_threshold(4, 1), 6);
    // Linear growth with slope 2 C_inj.
    Rational prev_gap = 100;
    for (long r : {10, 100, 1000, 10000}) {
        Rational gap = abs(energy_threshold(r, 1) / r - 2);
        EXPECT_LT(gap, prev_gap);
        prev_gap = gap;
    }
    EXPECT_LT(prev_gap, ratio(1, 1000));
    EXPECT_LT(energy_threshold(ratio(1, 1000000), 1), ratio(1, 1000000));
    EXPECT_THROW(energy_threshold(0, 1), Error);
    // Planar remark: C = 1/(2|v|) makes 2C(R - C) equal (R - C)/|v|.
    EXPECT_EQ(planar_energy_threshold(4, 1), ratio(7, 2));
    EXPECT_EQ(planar_energy_threshold(4, 1), 2 * ratio(1, 2) * (4 - ratio(1, 2)));
}

TEST(Floer, LineBacksolveExamples) {
    for (const Rational& c : {Rational(1), Rational(2), ratio(5, 2)}) {
        for (const auto& u1 : {UnitaryElement(1), unitary({{0, 1}, {1, 1}}), unitary({{0, -3}, {ratio(1, 3), 2}})}) {
            auto r = line_backsolve(c, u1);
            EXPECT_EQ(r.valuation, Exponent(c));
            EXPECT_TRUE(r.verified);
        }
    }
}

TEST(Floer, ConormalSupport) {
    // The subspace is {q_1 = ... = q_{n-k} = 0}; in R^2 with k = 1 that is the q_2-axis.
    ConormalKind kind{2, 1};
    EXPECT_TRUE(a_support_query(kind, {qvec({0, 3}), LocalSystem::trivial(2)}).in_support);
    EXPECT_FALSE(a_support_query(kind, {qvec({3, 0}), LocalSystem::trivial(2)}).in_support);
    LocalSystem twisted{{unitary({{0, 1}, {1, 1}}), UnitaryElement(1)}};
    auto v = a_support_query(kind, {qvec({0, 3}), twisted});
    EXPECT_FALSE(v.in_support);
    ASSERT_TRUE(v.witness);
    EXPECT_TRUE(a_support_query(kind, {qvec({0, 3}), *v.witness}).in_support);
    // Only the normal holonomies matter.
    LocalSystem along{{UnitaryElement(1), UnitaryElement(5)}};
    EXPECT_TRUE(a_support_query(kind, {qvec({0, -2}), along}).in_support);
}

TEST(Floer, PantsSupportExamples) {
    LocalSystem trivial = LocalSystem::trivial(2);
    EXPECT_FALSE(a_support_query(PantsKind{}, {qvec({1, 1}), trivial}).in_support);
    // q = (-1, -1), u2 = 1: u1 = 1 - T.
    LocalSystem good{{unitary({{0, 1}, {1, -1}}), UnitaryElement(1)}};
    auto v = a_support_query(PantsKind{}, {qvec({-1, -1}), good});
    EXPECT_TRUE(v.in_support);
    ASSERT_TRUE(v.witness);
    EXPECT_TRUE(same_to(v.witness->holonomies[0], good.holonomies[0]));
    EXPECT_FALSE(a_support_query(PantsKind{}, {qvec({-1, -1}), trivial}).in_support);
    // Coordinate legs use the same relation 1 + z1 - z2 = 0.
    LocalSystem leg{{UnitaryElement(1), unitary({{0, 1}, {2, 1}})}};
    EXPECT_TRUE(a_support_query(PantsKind{}, {qvec({2, 0}), leg}).in_support);
    EXPECT_FALSE(a_support_query(PantsKind{}, {qvec({2, 0}), trivial}).in_support);
}

TEST(Floer, PantsBimoduleSatisfiesRelations) {
    auto m = pants_bimodule(1, ratio(3, 16), unitary({{0, 2}, {ratio(1, 2), 1}}));
    EXPECT_TRUE(check_relations(m.left()).empty());
    EXPECT_TRUE(check_relations(m.right()).empty());
    EXPECT_TRUE(check_bimodule_relations(m, 4).empty());
}

TEST(Floer, PantsWitnessMatchesClosedForm) {
    // a = 1, u2 = 1: u1 = 1 - T, b = log(1 - T).
    auto w = pants_witness(1, 1);
    EXPECT_TRUE(same_to(w.u1.series(), NovikovSeries({{0, 1}, {1, -1}}, Exponent(10))));
    EXPECT_TRUE(same_to(w.cochain, log_one_plus(NovikovSeries::monomial(-1, 1), 10)));

    // Already solved: no correction and the seed is unchanged.
    auto m = pants_bimodule(1, ratio(3, 16), unitary({{0, 1}, {1, 1}}));
    auto s = solve_module_element(m, 0, {ratio(3, 16)});
    ASSERT_TRUE(s.solved());
    EXPECT_TRUE(s.cochain.is_zero());
    EXPECT_EQ(s.element, m.generator(0));
}

TEST(Floer, OffCurveModuleFailsFirstHypothesis) {
    // A unit at energy zero in the differential: the fiber point is off the curve.
    auto base = pants_bimodule(1, ratio(3, 16), 1);
    auto terms = base.terms();
    terms.push_back({0, {}, 0, {}, qvec({0, 1})});
    GappedBimodule off(base.left(), base.right(), base.basis(), terms);
    try {
        solve_module_element(off, 0, {ratio(3, 16)});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::HypothesisFailed);
        EXPECT_NE(std::string(e.what()).find("(i)"), std::string::npos);
    }
}

TEST(Floer, PantsSupportLaw) {
    std::mt19937_64 rng(62);
    for (const Rational& a : {Rational(0), Rational(1), Rational(2), ratio(5, 2)}) {
        for (int trial = 0; trial < 6; ++trial) {
            auto u2 = corpus::random_unitary_seed(rng);
            NovikovSeries target = u2.series() - NovikovSeries::T(a);
            if (target.constant() == 0) continue;
            UnitaryElement u1(target);
            QVec q = qvec({0, 0});
            q[0] = -a;
            q[1] = -a;
            EXPECT_TRUE(a_support_query(PantsKind{}, {q, {{u1, u2}}}).in_support);
            UnitaryElement off(target + NovikovSeries::monomial(1, ratio(7, 2)));
            EXPECT_FALSE(a_support_query(PantsKind{}, {q, {{off, u2}}}).in_support);
            EXPECT_FALSE(a_support_query(PantsKind{}, {qvec({1, 2}), {{u1, u2}}}).in_support);
            auto w = pants_witness(a, u2);
            EXPECT_TRUE(same_to(w.u1.series(), target.truncated(Exponent(10))));
        }
    }
}
