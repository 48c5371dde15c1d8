#pragma once

// Random generators for property tests and the acceptance suite.

#include <map>
#include <random>
#include <vector>

#include "ainfinity.hpp"
#include "novikov.hpp"
#include "realization.hpp"
#include "tropical.hpp"

namespace tropic::corpus {

inline Rational random_rational(std::mt19937_64& rng, int lo, int hi, int max_den) {
    std::uniform_int_distribution<int> num(lo * max_den, hi * max_den), den(1, max_den);
    return ratio(num(rng), den(rng));
}

/// Tropical polynomial with 2..max_support distinct exponents in [0, 2]^n.
inline TropicalPolynomial random_polynomial(std::mt19937_64& rng, std::size_t n, std::size_t max_support) {
    std::uniform_int_distribution<int> ex(0, 2);
    std::uniform_int_distribution<std::size_t> count(2, max_support);
    std::size_t k = count(rng);
    std::vector<TropicalPolynomial::Term> terms;
    for (int attempts = 0; terms.size() < k && attempts < 100; ++attempts) {
        ZVec a(n);
        for (auto& x : a) x = ex(rng);
        bool dup = false;
        for (const auto& t : terms) dup = dup || t.first == a;
        if (!dup) terms.push_back({a, random_rational(rng, -2, 2, 2)});
    }
    return TropicalPolynomial(n, terms);
}

/// Rejection-samples polynomials whose facets all have two achievers and odd weight.
inline TropicalPolynomial random_realizable_polynomial(std::mt19937_64& rng, std::size_t n, std::size_t max_support) {
    while (true) {
        auto f = random_polynomial(rng, n, max_support);
        if (realizable_by_sampling(f)) return f;
    }
}

/// Unitary element with constant term +-1 and a short positive tail.
inline UnitaryElement random_unitary_seed(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> sign(0, 1), tail(0, 2), c(-3, 3);
    std::vector<NovikovSeries::Term> terms{{0, Rational(sign(rng) ? 1 : -1)}};
    int k = tail(rng);
    for (int i = 0; i < k; ++i) terms.push_back({ratio(i + 1 + tail(rng), 2), Rational(c(rng))});
    return UnitaryElement(NovikovSeries(terms, Exponent::infinity()));
}

inline std::map<ZVec, UnitaryElement> random_seeds(std::mt19937_64& rng, const TropicalPolynomial& f) {
    std::map<ZVec, UnitaryElement> seeds;
    for (const auto& t : f.terms()) seeds.emplace(t.first, random_unitary_seed(rng));
    return seeds;
}

/// Product of random elementary matrices; columns of a GL_n(Z) element.
inline ZMat random_unimodular(std::mt19937_64& rng, std::size_t n, int steps = 6) {
    ZMat g(n, ZVec(n, Integer(0)));
    for (std::size_t i = 0; i < n; ++i) g[i][i] = 1;
    if (n < 2) return g;
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    std::uniform_int_distribution<int> k(-2, 2);
    for (int s = 0; s < steps; ++s) {
        std::size_t a = idx(rng), b = idx(rng);
        if (a == b) continue;
        int c = k(rng);
        for (std::size_t j = 0; j < n; ++j) g[j][a] += c * g[j][b];
    }
    return g;
}

/// Smooth trivalent tree: a random unimodular pants vertex grown by replacing
/// rays with bounded edges ending in new smooth vertices.
inline TropicalCurve random_smooth_tree(std::mt19937_64& rng, std::size_t n = 3, std::size_t max_vertices = 6) {
    ZMat g = random_unimodular(rng, n);
    std::vector<QVec> vertices{QVec(n, Rational(0))};
    std::vector<CurveEdge> edges;
    std::vector<CurveRay> rays{{0, g[0], 1}, {0, g[1], 1}, {0, -(g[0] + g[1]), 1}};
    std::uniform_int_distribution<std::size_t> size(1, max_vertices);
    std::uniform_int_distribution<int> k(-2, 2);
    const std::size_t target = size(rng);
    while (vertices.size() < target) {
        std::uniform_int_distribution<std::size_t> pick(0, rays.size() - 1);
        std::size_t r = pick(rng);
        CurveRay grown = rays[r];
        rays.erase(rays.begin() + static_cast<std::ptrdiff_t>(r));
        const ZVec& d = grown.direction;
        std::size_t w = vertices.size();
        vertices.push_back(vertices[grown.vertex] + random_rational(rng, 1, 3, 3) * to_rational(d));
        edges.push_back({grown.vertex, w, d, 1});
        ZMat basis = *complete_to_basis({-d}, n);
        ZVec w1 = basis[1];
        for (std::size_t j = 0; j < n; ++j) {
            if (j == 1) continue;
            Integer c = k(rng);
            for (std::size_t i = 0; i < n; ++i) w1[i] += c * basis[j][i];
        }
        rays.push_back({w, w1, 1});
        rays.push_back({w, d - w1, 1});
    }
    return TropicalCurve(n, std::move(vertices), std::move(edges), std::move(rays));
}

/// Small gapped algebra satisfying the A-infinity relations by construction:
/// one of a few associative algebras with a derivation spread over energy
/// levels and a central closed curvature term. Basis size <= 4, levels <= 4.
inline GappedAlgebra random_gapped_algebra(std::mt19937_64& rng, const Rational& cutoff = 10) {
    std::uniform_int_distribution<int> family(0, 3), coeff(-3, 3), count(0, 2), half_steps(1, 8);
    auto level = [&](bool allow_zero) {
        int h = half_steps(rng) - (allow_zero ? 1 : 0);
        return ratio(h, 2);
    };
    auto nonzero = [&] {
        int c = 0;
        while (c == 0) c = coeff(rng);
        return Rational(c);
    };
    std::vector<Generator> basis;
    std::vector<ProductTerm> terms;
    // Output vector with a single nonzero entry.
    auto at = [&](std::size_t i, const Rational& c) {
        QVec v(basis.size(), Rational(0));
        v[i] = c;
        return v;
    };
    auto unit_actions = [&](std::size_t unit) {
        for (std::size_t i = 0; i < basis.size(); ++i) {
            terms.push_back({0, {unit, i}, at(i, 1)});
            if (i != unit) terms.push_back({0, {i, unit}, at(i, basis[i].degree % 2 ? -1 : 1)});
        }
    };
    // m2(a, b) = (-1)^|a| a b for a product a b = c * basis[out].
    auto product = [&](std::size_t a, std::size_t b, std::size_t out, const Rational& c) {
        terms.push_back({0, {a, b}, at(out, basis[a].degree % 2 ? -c : c)});
    };
    auto differential = [&](std::size_t from, std::size_t to) {
        for (int i = count(rng); i > 0; --i) terms.push_back({level(true), {from}, at(to, nonzero())});
    };
    auto curved = [&](std::size_t central) {
        for (int i = count(rng); i > 0; --i) terms.push_back({level(false), {}, at(central, nonzero())});
    };
    switch (family(rng)) {
        case 0:  // exterior algebra on x, y
            basis = {{"1", 0}, {"x", 1}, {"y", 1}, {"w", 2}};
            unit_actions(0);
            product(1, 2, 3, 1);
            product(2, 1, 3, -1);
            differential(1, 3);
            differential(2, 3);
            curved(3);
            break;
        case 1: {  // x odd with x^2 = s f
            basis = {{"1", 0}, {"x", 1}, {"f", 2}};
            unit_actions(0);
            product(1, 1, 2, Rational(coeff(rng)));
            differential(1, 2);
            curved(2);
            break;
        }
        case 2:  // nonunital square-zero pair
            basis = {{"e", 1}, {"f", 2}};
            differential(0, 1);
            curved(1);
            break;
        default:  // x y = w, y x = 0
            basis = {{"1", 0}, {"x", 1}, {"y", 1}, {"w", 2}};
            unit_actions(0);
            product(1, 2, 3, 1);
            differential(1, 3);
            differential(2, 3);
            curved(3);
            break;
    }
    return GappedAlgebra(std::move(basis), cutoff, terms);
}

/// Degree-one chain with levels in {1/2, ..., 4} and small integer coefficients.
inline DeformingCochain random_deforming_cochain(std::mt19937_64& rng, const GappedAlgebra& a) {
    std::uniform_int_distribution<int> coeff(-2, 2), half_steps(1, 8), count(0, 2);
    Chain c = a.zero();
    for (auto i : a.in_degree(1))
        for (int k = count(rng); k > 0; --k) c.add(i, NovikovSeries::monomial(coeff(rng), ratio(half_steps(rng), 2)));
    return DeformingCochain(a, c);
}

}  // namespace tropic::corpus
