#include <gtest/gtest.h>

#include <random>

#include "tropic/fixtures.hpp"
#include "tropic/tropical.hpp"

using namespace tropic;

namespace {

TropicalPolynomial random_polynomial(std::mt19937& rng, std::size_t n, int max_terms) {
    std::uniform_int_distribution<int> ex(0, 2), co(-3, 3), count(2, max_terms);
    std::vector<TropicalPolynomial::Term> terms;
    int k = count(rng);
    for (int attempts = 0; static_cast<int>(terms.size()) < k && attempts < 50; ++attempts) {
        ZVec a(n);
        for (auto& x : a) x = ex(rng);
        bool dup = false;
        for (const auto& t : terms) dup = dup || t.first == a;
        if (!dup) terms.push_back({a, ratio(co(rng), 2)});
    }
    return TropicalPolynomial(n, terms);
}

bool contains_direction(const TropicalCurve& c, const ZVec& d) {
    for (const auto& r : c.rays())
        if (r.direction == d) return true;
    return false;
}

ZMat random_unimodular(std::mt19937& rng, std::size_t n) {
    ZMat g(n, ZVec(n, Integer(0)));
    for (std::size_t i = 0; i < n; ++i) g[i][i] = 1;
    std::uniform_int_distribution<int> idx(0, static_cast<int>(n) - 1), s(-2, 2);
    for (int step = 0; step < 6; ++step) {
        int i = idx(rng), j = idx(rng);
        if (i == j) continue;
        int k = s(rng);
        for (std::size_t c = 0; c < n; ++c) g[i][c] += k * g[j][c];
    }
    return g;
}

}  // namespace

TEST(Tropical, EvalExamples) {
    auto f = fixtures::line_polynomial();
    auto at0 = trop_eval(f, qvec({0, 0}));
    EXPECT_EQ(at0.value, 0);
    EXPECT_EQ(at0.argmin.size(), 3u);
    auto diag = trop_eval(f, qvec({-3, -3}));
    EXPECT_EQ(diag.value, -3);
    EXPECT_EQ(diag.argmin, (std::vector<ZVec>{zvec({0, 1}), zvec({1, 0})}));
    // Direct evaluation: min(0, 5, 7).
    auto far = trop_eval(f, qvec({5, 7}));
    EXPECT_EQ(far.value, 0);
    EXPECT_EQ(far.argmin, (std::vector<ZVec>{zvec({0, 0})}));
}

TEST(Tropical, EvalIsConcave) {
    std::mt19937 rng(21);
    std::uniform_int_distribution<int> coord(-8, 8), tn(0, 6);
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t n = 1 + trial % 3;
        auto f = random_polynomial(rng, n, 8);
        QVec q(n), r(n);
        for (auto& x : q) x = ratio(coord(rng), 3);
        for (auto& x : r) x = ratio(coord(rng), 3);
        Rational t = ratio(tn(rng), 6);
        QVec mid = t * q + (1 - t) * r;
        ASSERT_GE(trop_eval(f, mid).value, t * trop_eval(f, q).value + (1 - t) * trop_eval(f, r).value);
    }
}

TEST(Tropical, HypersurfaceOfLineIsValuationConsistentPants) {
    auto hyp = hypersurface(fixtures::line_polynomial());
    ASSERT_EQ(hyp.cells().size(), 3u);
    auto curve = curve_from_complex(hyp);
    EXPECT_EQ(curve.vertices(), std::vector<QVec>{qvec({0, 0})});
    EXPECT_TRUE(contains_direction(curve, zvec({1, 0})));
    EXPECT_TRUE(contains_direction(curve, zvec({0, 1})));
    EXPECT_TRUE(contains_direction(curve, zvec({-1, -1})));
    for (const auto& r : curve.rays()) EXPECT_EQ(r.weight, 1);
    EXPECT_TRUE(balancing_check(hyp).balanced);
}

TEST(Tropical, MaxConventionFlipsEveryLeg) {
    auto curve = curve_from_complex(hypersurface(fixtures::line_polynomial(), Convention::Max));
    EXPECT_TRUE(contains_direction(curve, zvec({-1, 0})));
    EXPECT_TRUE(contains_direction(curve, zvec({0, -1})));
    EXPECT_TRUE(contains_direction(curve, zvec({1, 1})));
    // A binomial ties on the same line y = x + 1 in either convention.
    TropicalPolynomial f(2, {{zvec({1, 0}), 1}, {zvec({0, 1}), 0}});
    auto hyp = hypersurface(f, Convention::Max);
    ASSERT_EQ(hyp.cells().size(), 1u);
    EXPECT_TRUE(hyp.cells()[0].polyhedron.contains(qvec({2, 3})));
    EXPECT_FALSE(hyp.cells()[0].polyhedron.contains(qvec({3, 2})));
    EXPECT_TRUE(hypersurface(f, Convention::Min).cells()[0].polyhedron.contains(qvec({2, 3})));
}

TEST(Tropical, HypersurfaceWeightsAndErrors) {
    auto hyp = hypersurface(TropicalPolynomial(1, {{zvec({0}), 0}, {zvec({1}), 0}}));
    ASSERT_EQ(hyp.cells().size(), 1u);
    EXPECT_TRUE(hyp.cells()[0].polyhedron.contains(qvec({0})));
    EXPECT_EQ(hyp.cells()[0].weight, 1);

    // Dual edge from exponent 0 to exponent 2 has lattice length 2.
    auto doubled = hypersurface(TropicalPolynomial(2, {{zvec({0, 0}), 0}, {zvec({2, 0}), 0}}));
    ASSERT_EQ(doubled.cells().size(), 1u);
    EXPECT_EQ(doubled.cells()[0].weight, 2);
    EXPECT_EQ(doubled.cells()[0].dimension, 1);
    EXPECT_TRUE(doubled.cells()[0].polyhedron.contains(qvec({0, 5})));

    try {
        hypersurface(TropicalPolynomial(2, {{zvec({1, 1}), 3}}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ConstantPolynomial);
    }
    EXPECT_THROW(TropicalPolynomial(1, {{zvec({1}), 0}, {zvec({1}), 2}}), Error);
}

TEST(Tropical, HypersurfaceIsValidBalancedAndMatchesSampling) {
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> coord(-12, 12);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = 1 + trial % 3;
        auto f = random_polynomial(rng, n, n == 3 ? 5 : 8);
        auto hyp = hypersurface(f);
        ASSERT_TRUE(validate_complex(hyp).valid);
        ASSERT_TRUE(balancing_check(hyp).balanced);
        // Oracle: a sample point is in the complex iff the min is achieved twice.
        for (int s = 0; s < 25; ++s) {
            QVec q(n);
            for (auto& x : q) x = ratio(coord(rng), 4);
            bool corner = trop_eval(f, q).argmin.size() >= 2;
            bool covered = false;
            for (const auto& c : hyp.cells()) covered = covered || c.polyhedron.contains(q);
            ASSERT_EQ(corner, covered);
        }
    }
}

TEST(Tropical, BalancingExamples) {
    EXPECT_TRUE(is_balanced_curve(fixtures::pants()).ok);
    EXPECT_TRUE(is_balanced_curve(fixtures::line_vc(2)).ok);
    TropicalCurve corner(2, {qvec({0, 0})}, {}, {{0, zvec({1, 0}), 1}, {0, zvec({0, 1}), 1}});
    auto v = is_balanced_curve(corner);
    EXPECT_FALSE(v.ok);
    EXPECT_EQ(v.offending, std::vector<std::size_t>{0});
}

TEST(Tropical, SmoothnessExamples) {
    EXPECT_TRUE(is_smooth_curve(fixtures::pants()).ok);
    EXPECT_TRUE(is_smooth_curve(fixtures::line_vc(1)).ok);
    EXPECT_TRUE(is_smooth_curve(fixtures::square()).ok);
    TropicalCurve cross(2, {qvec({0, 0})}, {},
                        {{0, zvec({1, 0}), 1}, {0, zvec({-1, 0}), 1}, {0, zvec({0, 1}), 1}, {0, zvec({0, -1}), 1}});
    EXPECT_TRUE(is_balanced_curve(cross).ok);
    EXPECT_FALSE(is_smooth_curve(cross).ok);
    // det[(1,0),(1,2)] = 2.
    TropicalCurve index2(2, {qvec({0, 0})}, {}, {{0, zvec({1, 0}), 1}, {0, zvec({1, 2}), 1}, {0, zvec({-1, -1}), 2}});
    EXPECT_TRUE(is_balanced_curve(index2).ok);
    EXPECT_FALSE(is_smooth_curve(index2).ok);
}

TEST(Tropical, SmoothVerticesHaveUnimodularPairs) {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 40; ++trial) {
        auto c = transform(fixtures::line_vc(ratio(trial + 1, 3)), random_unimodular(rng, 3), qvec({1, 0, -2}));
        ASSERT_TRUE(is_smooth_curve(c).ok);
        for (std::size_t v = 0; v < c.vertices().size(); ++v) {
            auto star = c.star(v);
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = i + 1; j < 3; ++j)
                    ASSERT_EQ(maximal_minor_gcd({star[i].direction, star[j].direction}, 3), 1);
        }
    }
}

TEST(Tropical, GenusExamples) {
    EXPECT_EQ(genus(fixtures::pants()), 0);
    EXPECT_EQ(genus(fixtures::line_vc(1)), 0);
    EXPECT_EQ(genus(fixtures::square()), 1);
    // Theta graph: 2 vertices, 3 edges, 3 - 2 + 1.
    TropicalCurve theta(2, {qvec({0, 0}), qvec({2, 0})},
                        {{0, 1, zvec({1, 0}), 1}, {0, 1, zvec({1, 0}), 1}, {0, 1, zvec({1, 0}), 1}}, {});
    EXPECT_EQ(genus(theta), 2);
    EXPECT_THROW(TropicalCurve(2, {qvec({0, 0}), qvec({1, 0})}, {}, {}), Error);
    EXPECT_THROW(TropicalCurve(2, {qvec({0, 0}), qvec({1, 1})}, {{0, 1, zvec({1, 0}), 1}}, {}), Error);
}

TEST(Tropical, AdaptedToFanExamples) {
    Fan pants_fan(2, {zvec({-1, 0}), zvec({0, -1}), zvec({1, 1})});
    Fan opposite(2, {zvec({1, 0}), zvec({0, 1}), zvec({-1, -1})});
    EXPECT_TRUE(adapted_to_fan(fixtures::pants(), pants_fan).ok);
    EXPECT_FALSE(adapted_to_fan(fixtures::pants(), opposite).ok);
    TropicalCurve compact(2, {qvec({0, 0}), qvec({1, 0})}, {{0, 1, zvec({1, 0}), 1}}, {});
    EXPECT_TRUE(adapted_to_fan(compact, opposite).ok);
    EXPECT_THROW(Fan(2, {zvec({1, 0}), zvec({1, 0})}), Error);
}

TEST(Tropical, AffineLengthExamples) {
    TropicalCurve diag(2, {qvec({0, 0}), qvec({2, 2})}, {{0, 1, zvec({1, 1}), 1}}, {});
    EXPECT_EQ(affine_length(diag, {{false, 0}}), 2);
    TropicalCurve step(2, {qvec({0, 0}), qvec({1, 2})}, {{0, 1, zvec({1, 2}), 1}}, {});
    EXPECT_EQ(affine_length(step, {{false, 0}}), 1);
    auto sq = fixtures::square();
    EXPECT_EQ(affine_length(sq, {{false, 0}, {false, 1}}), 2);
    EXPECT_EQ(affine_length(sq, {{false, 1}, {false, 0}}), 2);
    try {
        affine_length(sq, {{false, 0}, {false, 2}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::DisconnectedPath);
    }
    try {
        affine_length(sq, {{false, 0}, {true, 1}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::UnboundedEdgeInPath);
    }
}

TEST(Tropical, AffineLengthIsUnimodularInvariant) {
    std::mt19937 rng(31);
    auto c = fixtures::planar_cycle(Rational(3, 2), Rational(5, 7));
    std::vector<EdgeRef> path{{false, 4}, {false, 0}, {false, 1}, {false, 5}};
    Rational expected = Rational(3, 2) + 1 + 1 + Rational(5, 7);
    ASSERT_EQ(affine_length(c, path), expected);
    for (int trial = 0; trial < 50; ++trial) {
        auto g = random_unimodular(rng, 3);
        ASSERT_EQ(affine_length(transform(c, g, qvec({Rational(1, 3), 0, 2})), path), expected);
    }
}

TEST(Tropical, WellSpacedExamples) {
    auto equal = well_spaced(fixtures::planar_cycle(2, 2), fixtures::horizontal_plane());
    EXPECT_EQ(equal.verdict, Spacing::WellSpaced);
    EXPECT_EQ(equal.minimum, Rational(2));
    EXPECT_EQ(equal.attained, 2u);

    auto shortened = well_spaced(fixtures::planar_cycle(2, Rational(3, 2)), fixtures::horizontal_plane());
    EXPECT_EQ(shortened.verdict, Spacing::NotWellSpaced);
    EXPECT_EQ(shortened.minimum, Rational(3, 2));
    ASSERT_EQ(shortened.exits.size(), 2u);
    EXPECT_EQ(shortened.exits[0].vertex, 5u);

    EXPECT_EQ(well_spaced(fixtures::planar_cycle(2, 2), {zvec({1, 0, 0}), 0}).verdict, Spacing::NotApplicable);
    try {
        well_spaced(fixtures::line_vc(1), {zvec({0, 0, 1}), 0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::GenusNotOne);
    }
}

TEST(Tropical, WellSpacedMatchesPathEnumeration) {
    // Oracle: the only exits are the two leg ends, reached along the diagonal legs.
    std::mt19937 rng(37);
    std::uniform_int_distribution<int> num(1, 12), den(1, 4);
    for (int trial = 0; trial < 40; ++trial) {
        Rational a = ratio(num(rng), den(rng)), b = ratio(num(rng), den(rng));
        auto c = fixtures::planar_cycle(a, b);
        Rational la = affine_length(c, {{false, 4}}), lb = affine_length(c, {{false, 5}});
        auto r = well_spaced(c, fixtures::horizontal_plane());
        ASSERT_EQ(r.verdict, la == lb ? Spacing::WellSpaced : Spacing::NotWellSpaced);
        ASSERT_EQ(*r.minimum, std::min(la, lb));
    }
}

TEST(Tropical, DeformationRankExamples) {
    auto pants = deformation_ranks(fixtures::pants());
    EXPECT_EQ(pants.h0_def, 2);
    EXPECT_EQ(pants.h1, 0);
    auto line = deformation_ranks(fixtures::line_vc(1));
    EXPECT_EQ(line.h0_def, 4);
    EXPECT_EQ(line.h1, 0);
    auto sq = deformation_ranks(fixtures::square());
    EXPECT_EQ(sq.h1, 1);
    EXPECT_EQ(sq.h0_def, 4);
}

TEST(Tropical, DeformationKernelOracle) {
    // Independent count for the square: each vertex moves in R^2, each edge
    // fixes one coordinate difference; edge constraints are independent.
    auto sq = fixtures::square();
    long vars = 2 * 4, constraints = 4;
    EXPECT_EQ(deformation_ranks(sq).h0_def, vars - constraints);
    // Translations always inject.
    std::mt19937 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        auto c = transform(fixtures::planar_cycle(2, ratio(trial + 1, 2)), random_unimodular(rng, 3), qvec({0, 0, 0}));
        ASSERT_GE(deformation_ranks(c).h0_def, 3);
    }
}

TEST(Tropical, CurveFromComplexRoundTrip) {
    WeightedPolyhedralComplex cx(2);
    cx.add_cell(RationalPolyhedron::segment(qvec({0, 0}), qvec({2, 0})));
    cx.add_cell(RationalPolyhedron::ray(qvec({0, 0}), zvec({-1, 0})), 3);
    auto c = curve_from_complex(cx);
    EXPECT_EQ(c.vertices().size(), 2u);
    EXPECT_EQ(c.edges().size(), 1u);
    EXPECT_EQ(c.rays()[0].weight, 3);
    WeightedPolyhedralComplex line(2);
    line.add_cell(RationalPolyhedron::line(qvec({0, 0}), zvec({1, 0})));
    EXPECT_THROW(curve_from_complex(line), Error);
}
