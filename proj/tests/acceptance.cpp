// Acceptance suite: one PASS/FAIL line per criterion, each with a wall-clock budget.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "tropic/corpus.hpp"
#include "tropic/tropic.hpp"

using namespace tropic;

namespace {

const Rational kEmax = 10;

struct Unmet : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
    if (!cond) throw Unmet(what);
}

struct Criterion {
    std::string name;
    double limit_seconds;
    std::function<std::string()> run;  // returns a short summary, throws Unmet on failure
};

std::string text(const QVec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
    return s + ")";
}

bool agree(const NovikovSeries& a, const NovikovSeries& b) { return (a - b).truncated(Exponent(kEmax)).is_zero(); }

// Tie test in either convention, evaluated from the terms directly.
bool is_corner(const TropicalPolynomial& f, const QVec& q, bool maximum) {
    std::vector<Rational> values;
    for (const auto& [alpha, a] : f.terms()) {
        Rational v = a;
        for (std::size_t i = 0; i < q.size(); ++i) v += Rational(alpha[i]) * q[i];
        values.push_back(v);
    }
    Rational best = maximum ? *std::max_element(values.begin(), values.end()) : *std::min_element(values.begin(), values.end());
    return std::count(values.begin(), values.end(), best) >= 2;
}

std::string pants_locus() {
    TropicalPolynomial f(2, {{zvec({0, 0}), 0}, {zvec({1, 0}), 0}, {zvec({0, 1}), 0}});
    const std::set<ZVec> max_legs{zvec({-1, 0}), zvec({0, -1}), zvec({1, 1})};
    for (Convention conv : {Convention::Min, Convention::Max}) {
        const bool maximum = conv == Convention::Max;
        auto hyp = hypersurface(f, conv);
        require(balancing_check(hyp).balanced, "corner locus is unbalanced");
        auto curve = curve_from_complex(hyp);
        require(curve.vertices() == std::vector<QVec>{qvec({0, 0})}, "vertex is not the origin");
        require(curve.edges().empty() && curve.rays().size() == 3, "expected three rays");
        std::set<ZVec> legs;
        for (const auto& r : curve.rays()) {
            require(r.weight == 1, "ray weight " + r.weight.get_str());
            for (long t : {1, 3})
                require(is_corner(f, Rational(t) * to_rational(r.direction), maximum), "ray point off the corner locus");
            legs.insert(maximum ? r.direction : -r.direction);
        }
        require(legs == max_legs, "leg directions differ from (-1,0),(0,-1),(1,1) up to the convention sign");
        require(!is_corner(f, qvec({1, 2}), maximum) && !is_corner(f, qvec({-1, -2}), maximum), "off-locus point ties");
    }
    return "3 weight-1 rays at the origin in both conventions";
}

std::string kapranov() {
    std::mt19937_64 rng(2024);
    std::size_t polynomials = 0, points = 0;
    Exponent worst = Exponent::infinity();
    while (polynomials < 60) {
        const std::size_t n = 1 + polynomials % 3;
        auto f = corpus::random_realizable_polynomial(rng, n, 6);
        require(f.support_size() <= 6, "support too large");
        auto F = lift_coefficients(f, corpus::random_seeds(rng, f), kEmax);
        auto samples = sample_facet_points(f, 10, rng);
        require(samples.size() == 10, "could not sample 10 facet points");
        for (const auto& q : samples) {
            auto r = realize_point(F, q);
            require(tropicalize_point(r.point) == q, "lift tropicalizes to the wrong point " + text(q));
            auto v = kapranov_check(F, r.point);
            require(v.ok && v.residual >= Exponent(kEmax), "residual " + v.residual.str() + " at " + text(q));
            worst = min(worst, v.residual);
            ++points;
        }
        ++polynomials;
    }
    return std::to_string(polynomials) + " polynomials, " + std::to_string(points) + " points, worst residual " + worst.str();
}

std::string conormal_ranks() {
    std::mt19937_64 rng(77);
    std::size_t complexes = 0;
    auto nontrivial = [&] {
        auto z = corpus::random_unitary_seed(rng);
        return z.series() == NovikovSeries(1) ? UnitaryElement(NovikovSeries(1) + NovikovSeries::T(ratio(3, 2))) : z;
    };
    for (std::size_t n = 0; n <= 4; ++n)
        for (std::size_t k = 0; k <= n; ++k) {
            const std::size_t free_rank = std::size_t{1} << (n - k);
            auto trivial = conormal_fiber_complex(n, k, ratio(1, 2), LocalSystem::trivial(n));
            require(trivial.squares_to_zero(), "d^2 != 0");
            require(cohomology_rank(trivial) == free_rank, "trivial rank wrong at n=" + std::to_string(n) + " k=" + std::to_string(k));
            ++complexes;
            if (k == n) continue;
            std::uniform_int_distribution<std::size_t> slot(0, n - k - 1);
            for (int trial = 0; trial < 20; ++trial) {
                // Holonomy along the fibre directions does not matter.
                LocalSystem along = LocalSystem::trivial(n);
                for (std::size_t j = n - k; j < n; ++j) along.holonomies[j] = nontrivial();
                require(cohomology_rank(conormal_fiber_complex(n, k, ratio(1, 2), along)) == free_rank, "rank depends on fibre holonomy");

                LocalSystem z = LocalSystem::trivial(n);
                for (std::size_t j = 0; j < n; ++j)
                    if (rng() % 2) z.holonomies[j] = corpus::random_unitary_seed(rng);
                z.holonomies[slot(rng)] = nontrivial();
                auto c = conormal_fiber_complex(n, k, ratio(1, 2), z);
                require(c.squares_to_zero(), "d^2 != 0");
                require(cohomology_rank(c) == 0, "nonzero rank with nontrivial holonomy at n=" + std::to_string(n) + " k=" + std::to_string(k));
                complexes += 2;
            }
        }
    return std::to_string(complexes) + " complexes";
}

std::string pants_support() {
    std::mt19937_64 rng(78);
    std::size_t queries = 0;
    for (const Rational& a : {Rational(0), Rational(1), Rational(2), ratio(5, 2)}) {
        int accepted = 0;
        while (accepted < 10) {
            auto u2 = corpus::random_unitary_seed(rng);
            NovikovSeries target = u2.series() - NovikovSeries::T(a);
            if (target.constant() == 0) continue;
            ++accepted;
            const QVec q{-a, -a};
            UnitaryElement u1(target);
            require(a_support_query(PantsKind{}, {q, {{u1, u2}}}, kEmax).in_support, "u1 = u2 - T^a rejected at a=" + a.get_str());
            UnitaryElement nudged(target + NovikovSeries::monomial(1, ratio(7, 2)));
            require(!a_support_query(PantsKind{}, {q, {{nudged, u2}}}, kEmax).in_support, "perturbed u1 accepted");
            UnitaryElement other(NovikovSeries(2 * target.constant()));
            require(!a_support_query(PantsKind{}, {q, {{other, u2}}}, kEmax).in_support, "wrong constant term accepted");
            for (const QVec& off : {qvec({1, 2}), qvec({-1, 3}), q + qvec({ratio(1, 2), 0})})
                require(!a_support_query(PantsKind{}, {off, {{u1, u2}}}, kEmax).in_support, "point " + text(off) + " off the curve accepted");
            auto w = pants_witness(a, u2, kEmax);
            require(agree(w.u1.series(), target), "witness differs from u2 - T^a at a=" + a.get_str());
            queries += 6;
        }
    }
    return std::to_string(queries) + " queries";
}

std::string engine_laws() {
    std::mt19937_64 rng(79);
    int strong = 0, weak = 0;
    const int trials = 120;
    for (int trial = 0; trial < trials; ++trial) {
        auto a = corpus::random_gapped_algebra(rng, kEmax);
        require(check_relations(a, 3).empty(), "fuzzed algebra violates the relations");
        auto first = corpus::random_deforming_cochain(rng, a);
        auto second = corpus::random_deforming_cochain(rng, a);
        auto deformed = deform(a, first);
        require(check_relations(deformed, 3).empty(), "deformation breaks the relations at trial " + std::to_string(trial));
        auto stepwise = deform(deformed, DeformingCochain(a, second.chain()));
        auto at_once = deform(a, DeformingCochain(a, first.chain() + second.chain()));
        require(stepwise == at_once, "deformations do not compose at trial " + std::to_string(trial));

        Submodule s{std::vector<bool>(a.dimension()), rng() % 4 == 0};
        for (std::size_t i = 0; i < a.dimension(); ++i) s.generators[i] = rng() % 2 == 1;
        for (const auto& ideal : {s, Submodule::positively_filtered(a.dimension())}) {
            auto kind = ideal_check(ideal, a);
            if (kind == IdealKind::NotIdeal) continue;
            require(curvature(quotient(a, ideal)).is_zero() == (kind == IdealKind::StrongIdeal),
                    "quotient curvature disagrees with the ideal kind at trial " + std::to_string(trial));
            (kind == IdealKind::StrongIdeal ? strong : weak)++;
        }
    }
    require(weak > 0, "no weak ideal exercised the converse");
    return std::to_string(trials) + " algebras, " + std::to_string(strong) + " strong and " + std::to_string(weak) + " weak quotients";
}

GappedAlgebra curved_pair() {
    return GappedAlgebra({{"e", 1}, {"f", 2}}, kEmax, {{0, {0}, qvec({0, 1})}, {1, {}, qvec({0, 1})}});
}

GappedAlgebra catalan_algebra() {
    return GappedAlgebra({{"1", 0}, {"x", 1}, {"f", 2}}, kEmax,
                         {{0, {0, 0}, qvec({1, 0, 0})},
                          {0, {0, 1}, qvec({0, 1, 0})},
                          {0, {0, 2}, qvec({0, 0, 1})},
                          {0, {1, 0}, qvec({0, -1, 0})},
                          {0, {2, 0}, qvec({0, 0, 1})},
                          {0, {1, 1}, qvec({0, 0, -1})},
                          {0, {1}, qvec({0, 0, 1})},
                          {1, {}, qvec({0, 0, 1})}});
}

std::string solver() {
    std::size_t runs = 0;
    struct Case {
        const char* name;
        GappedAlgebra algebra;
        Submodule ideal;
    };
    for (const auto& c : {Case{"curved pair", curved_pair(), Submodule::everything(2)},
                          Case{"catalan", catalan_algebra(), Submodule::span(3, {2})}}) {
        for (auto mode : {SolverMode::Generic, SolverMode::LemmaB}) {
            auto s = solve_bounding_cochain(c.algebra, c.ideal, mode);
            require(s.solved(), std::string(c.name) + " obstructed");
            require(curvature(deform(c.algebra, DeformingCochain(c.algebra, s.cochain))).is_zero(),
                    std::string(c.name) + ": curvature survives below T^10");
            require(s.curvature_after.size() == s.levels.size(), "level log mismatch");
            for (std::size_t i = 0; i < s.levels.size(); ++i) {
                require(s.curvature_after[i] > Exponent(s.levels[i]), std::string(c.name) + ": level did not raise the valuation");
                if (i) require(s.curvature_after[i] > s.curvature_after[i - 1], std::string(c.name) + ": valuation not increasing");
            }
            ++runs;
        }
    }
    // Catalan closed form: b = -u T x with u = sum (-1)^k C_k T^k.
    auto s = solve_bounding_cochain(catalan_algebra(), Submodule::span(3, {2}), SolverMode::Generic);
    NovikovSeries expected;
    long catalan = 1;
    for (long k = 0; k + 1 < 10; ++k) {
        expected += NovikovSeries::monomial(k % 2 ? catalan : -catalan, k + 1);
        catalan = catalan * 2 * (2 * k + 1) / (k + 2);
    }
    require(agree(s.cochain[1], expected), "catalan cochain differs from the closed form");

    GappedAlgebra obstructed({{"f", 2}}, kEmax, {{1, {}, qvec({1})}});
    auto o = solve_bounding_cochain(obstructed, Submodule::everything(1), SolverMode::Generic);
    require(!o.solved() && o.obstruction->level == 1 && o.obstruction->defect == qvec({1}), "obstruction not reported at level 1");
    return std::to_string(runs) + " solves, obstruction at level 1";
}

std::string lift_topology() {
    std::mt19937_64 rng(80);
    std::size_t ends = 0;
    for (int trial = 0; trial < 30; ++trial) {
        auto tree = corpus::random_smooth_tree(rng, 3, 6);
        require(is_smooth_curve(tree).ok && genus(tree) == 0, "corpus produced a non-smooth tree");
        auto m = build_lift_model(tree);
        for (std::size_t f = 0; f < tree.rays().size(); ++f) {
            require(check_h1_surjection(m, f), "H^1 restriction not onto at tree " + std::to_string(trial));
            require(check_h2_injection(m, f), "H^2 restriction not injective at tree " + std::to_string(trial));
            require(unobstructedness_criterion(m, f).unobstructed, "criterion fails at tree " + std::to_string(trial));
            ++ends;
        }
    }
    for (const Rational& c : {Rational(1), Rational(2), ratio(5, 2)}) {
        auto betti = lift_cohomology(build_lift_model(fixtures::line_vc(c)));
        require(betti == std::vector<long>{1, 4, 3, 0}, "line Betti numbers wrong for c=" + c.get_str());
        require(euler_characteristic(betti) == 0, "nonzero Euler characteristic");
    }
    return "30 trees, " + std::to_string(ends) + " ends; line Betti (1,4,3,0)";
}

std::string line_disks() {
    std::mt19937_64 rng(81);
    for (const Rational& c : {Rational(1), Rational(2), ratio(5, 2)}) {
        std::vector<UnitaryElement> holonomies{UnitaryElement(1), UnitaryElement(NovikovSeries(-3) + NovikovSeries::T(ratio(1, 3)))};
        for (int i = 0; i < 5; ++i) holonomies.push_back(corpus::random_unitary_seed(rng));
        for (const auto& u1 : holonomies) {
            auto r = line_backsolve(c, u1, kEmax);
            require(r.verified, "collinearity not verified at c=" + c.get_str());
            require(r.valuation == Exponent(c), "valuation " + r.valuation.str() + " != " + c.get_str());
        }
    }
    return "valuation equals c for c in {1, 2, 5/2}";
}

std::string spacing() {
    require(well_spaced(fixtures::planar_cycle(1, 1), fixtures::horizontal_plane()).verdict == Spacing::WellSpaced,
            "equal exits not well-spaced");
    std::size_t shortened = 0;
    for (const Rational& eps : {ratio(1, 2), ratio(1, 3), ratio(9, 10), ratio(1, 7), ratio(1, 1000)}) {
        for (bool near : {true, false}) {
            auto c = near ? fixtures::planar_cycle(1 - eps, 1) : fixtures::planar_cycle(1, 1 - eps);
            auto r = well_spaced(c, fixtures::horizontal_plane());
            require(r.verdict == Spacing::NotWellSpaced, "shortening by " + eps.get_str() + " still well-spaced");
            ++shortened;
        }
    }
    return std::to_string(shortened) + " shortened cycles rejected";
}

// Rank by plain Gaussian elimination on a row list.
std::size_t rank_of(std::vector<QVec> rows) {
    std::size_t rank = 0;
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    for (std::size_t col = 0; col < cols && rank < rows.size(); ++col) {
        auto pivot = std::find_if(rows.begin() + rank, rows.end(), [&](const QVec& r) { return r[col] != 0; });
        if (pivot == rows.end()) continue;
        std::iter_swap(rows.begin() + rank, pivot);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == rank || rows[i][col] == 0) continue;
            Rational factor = rows[i][col] / rows[rank][col];
            for (std::size_t j = col; j < cols; ++j) rows[i][j] -= factor * rows[rank][j];
        }
        ++rank;
    }
    return rank;
}

// Vertex displacements in R^{nV} such that every bounded edge stays parallel to
// itself: (d_to - d_from) wedge direction = 0. Ends follow their vertex freely.
long deformation_oracle(const TropicalCurve& c) {
    const std::size_t n = c.ambient_dimension(), vars = n * c.vertices().size();
    std::vector<QVec> rows;
    for (const auto& e : c.edges())
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                QVec row(vars, Rational(0));
                const Rational di(e.direction[i]), dj(e.direction[j]);
                row[n * e.to + j] += di;
                row[n * e.from + j] -= di;
                row[n * e.to + i] -= dj;
                row[n * e.from + i] += dj;
                rows.push_back(row);
            }
    return static_cast<long>(vars - rank_of(rows));
}

std::string deformation() {
    auto pants = deformation_ranks(fixtures::pants());
    auto line = deformation_ranks(fixtures::line_vc(1));
    require(pants.h0_def == 2 && deformation_oracle(fixtures::pants()) == 2, "pants deformation space is not 2-dimensional");
    require(line.h0_def == 4 && deformation_oracle(fixtures::line_vc(1)) == 4, "line deformation space is not 4-dimensional");
    require(pants.h1 == 0 && line.h1 == 0, "unexpected obstruction space");
    return "pants 2, line 4";
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"pants corner locus", 1, pants_locus},
        {"Kapranov lifting", 30, kapranov},
        {"conormal rank law", 5, conormal_ranks},
        {"pants support law", 5, pants_support},
        {"A-infinity engine laws", 60, engine_laws},
        {"bounding cochain solver", 10, solver},
        {"lift topology", 30, lift_topology},
        {"line disk valuation", 1, line_disks},
        {"well-spacedness", 1, spacing},
        {"deformation ranks", 1, deformation},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        auto start = std::chrono::steady_clock::now();
        bool passed = true;
        std::string detail;
        try {
            detail = c.run();
        } catch (const Unmet& e) {
            passed = false;
            detail = e.what();
        } catch (const std::exception& e) {
            passed = false;
            detail = std::string("exception: ") + e.what();
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (passed && seconds > c.limit_seconds) {
            passed = false;
            detail += "; over the time limit";
        }
        failures += !passed;
        std::printf("%s %2zu %-26s %8.3fs / %4.0fs  %s\n", passed ? "PASS" : "FAIL", i + 1, c.name.c_str(), seconds,
                    c.limit_seconds, detail.c_str());
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
