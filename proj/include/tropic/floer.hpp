#pragma once

// Floer cochain complexes of tropical Lagrangians against fiber tori with
// local systems: the conormal model, the pair of pants near its diagonal leg,
// ranks over the Novikov field, and the support query built on them.

#include <algorithm>
#include <bit>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ainfinity.hpp"
#include "error.hpp"
#include "novikov.hpp"
#include "rational.hpp"

namespace tropic {

/// Holonomies z_1, ..., z_n around the coordinate loops of a fiber torus.
struct LocalSystem {
    std::vector<UnitaryElement> holonomies;

    static LocalSystem trivial(std::size_t n) { return {std::vector<UnitaryElement>(n, UnitaryElement(1))}; }
    std::size_t dimension() const { return holonomies.size(); }
    const NovikovSeries& operator[](std::size_t i) const { return holonomies.at(i).series(); }
};

struct FiberPoint {
    QVec q;
    LocalSystem local;
};

/// Cochain complex over the Novikov field; entries are known modulo T^precision.
class NovikovCochainComplex {
public:
    NovikovCochainComplex(std::vector<Generator> generators, std::vector<std::vector<NovikovSeries>> differential,
                          Rational precision)
        : generators_(std::move(generators)), d_(std::move(differential)), precision_(std::move(precision)) {
        const std::size_t n = generators_.size();
        if (d_.size() != n) throw Error(Errc::InvalidInput, "differential must be square");
        for (std::size_t i = 0; i < n; ++i) {
            if (d_[i].size() != n) throw Error(Errc::InvalidInput, "differential must be square");
            for (std::size_t j = 0; j < n; ++j) {
                d_[i][j] = d_[i][j].truncated(precision_);
                if (!d_[i][j].is_zero() && generators_[i].degree != generators_[j].degree + 1)
                    throw Error(Errc::InvalidInput, "differential must raise degree by one");
            }
        }
    }

    const std::vector<Generator>& generators() const { return generators_; }
    std::size_t size() const { return generators_.size(); }
    const Rational& precision() const { return precision_; }
    /// Coefficient of `target` in d(source).
    const NovikovSeries& entry(std::size_t target, std::size_t source) const { return d_.at(target).at(source); }

    bool squares_to_zero() const {
        const std::size_t n = size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                NovikovSeries s;
                for (std::size_t k = 0; k < n; ++k)
                    if (!d_[i][k].is_zero() && !d_[k][j].is_zero())
                        s += NovikovSeries::multiply(d_[i][k], d_[k][j], Exponent(precision_));
                if (!s.truncated(precision_).is_zero()) return false;
            }
        return true;
    }

    std::vector<std::size_t> in_degree(int degree) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < size(); ++i)
            if (generators_[i].degree == degree) out.push_back(i);
        return out;
    }

private:
    std::vector<Generator> generators_;
    std::vector<std::vector<NovikovSeries>> d_;
    Rational precision_;
};

/// Rank over the Novikov field of a matrix known modulo T^precision.
/// Pivots are chosen with minimal valuation so quotients stay in the ring;
/// an entry whose precision dropped below `precision` without a known term
/// makes the rank undetermined.
inline std::size_t novikov_rank(std::vector<std::vector<NovikovSeries>> m, const Rational& precision) {
    const Exponent cap(precision);
    for (auto& row : m)
        for (auto& x : row) x = x.truncated(cap);
    std::size_t rank = 0;
    while (true) {
        std::optional<std::pair<std::size_t, std::size_t>> pivot;
        Exponent best = Exponent::infinity();
        bool undetermined = false;
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m[i].size(); ++j) {
                const auto& x = m[i][j];
                if (x.is_zero()) {
                    undetermined = undetermined || x.precision() < cap;
                    continue;
                }
                if (x.valuation() < best) {
                    best = x.valuation();
                    pivot = {{i, j}};
                }
            }
        if (!pivot) {
            if (undetermined) throw Error(Errc::PrecisionExhausted, "rank undetermined at precision " + precision.get_str());
            return rank;
        }
        auto [pr, pc] = *pivot;
        const NovikovSeries p = m[pr][pc];
        const Rational v = p.valuation().value();
        const NovikovSeries unit_inverse = invert(p.shifted(-v), precision - v);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == pr || m[i][pc].is_zero()) continue;
            NovikovSeries factor = NovikovSeries::multiply(m[i][pc].shifted(-v), unit_inverse, Exponent(precision - v));
            for (std::size_t j = 0; j < m[i].size(); ++j)
                if (!m[pr][j].is_zero()) m[i][j] = (m[i][j] - NovikovSeries::multiply(factor, m[pr][j], cap)).truncated(cap);
            m[i][pc] = NovikovSeries::zero();
        }
        m.erase(m.begin() + static_cast<long>(pr));
        for (auto& row : m) row.erase(row.begin() + static_cast<long>(pc));
        ++rank;
    }
}

/// Rank of H^degree, or of the total cohomology when no degree is given.
inline std::size_t cohomology_rank(const NovikovCochainComplex& c, std::optional<int> degree = std::nullopt) {
    if (!c.squares_to_zero()) throw Error(Errc::InvalidInput, "differential does not square to zero");
    auto block_rank = [&](int from) {
        auto sources = c.in_degree(from), targets = c.in_degree(from + 1);
        if (sources.empty() || targets.empty()) return std::size_t(0);
        std::vector<std::vector<NovikovSeries>> block;
        for (auto t : targets) {
            block.emplace_back();
            for (auto s : sources) block.back().push_back(c.entry(t, s));
        }
        return novikov_rank(std::move(block), c.precision());
    };
    auto rank_at = [&](int q) { return c.in_degree(q).size() - block_rank(q) - block_rank(q - 1); };
    if (degree) return rank_at(*degree);
    int lo = 0, hi = 0;
    for (const auto& g : c.generators()) {
        lo = std::min(lo, g.degree);
        hi = std::max(hi, g.degree);
    }
    std::size_t total = 0;
    for (int q = lo; q <= hi; ++q) total += rank_at(q);
    return total;
}

namespace detail {

inline std::string subset_name(unsigned mask, std::size_t m) {
    std::string s = "x{";
    bool first = true;
    for (std::size_t i = 0; i < m; ++i)
        if (mask >> i & 1u) {
            s += (first ? "" : ",") + std::to_string(i + 1);
            first = false;
        }
    return s + "}";
}

}  // namespace detail

/// CF(conormal of T^{n-k}, F_q): generators x_I for I in {1..n-k}, deg x_I = |I|,
/// and <d x_I, x_{I+j}> = (-1)^{#{i in I : i < j}} T^{small_energy} (1 - z_j).
inline NovikovCochainComplex conormal_fiber_complex(std::size_t n, std::size_t k, const Rational& small_energy,
                                                    const LocalSystem& local, const Rational& emax = kDefaultPrecision) {
    if (k > n) throw Error(Errc::InvalidInput, "need k <= n");
    if (small_energy <= 0) throw Error(Errc::InvalidInput, "small strip energy must be positive");
    if (local.dimension() != n) throw Error(Errc::InvalidInput, "local system must have n holonomies");
    const std::size_t m = n - k;
    if (m > 16) throw Error(Errc::InvalidInput, "too many generators");
    // Generators ordered by degree, then by mask.
    std::vector<unsigned> masks;
    for (unsigned mask = 0; mask < (1u << m); ++mask) masks.push_back(mask);
    std::stable_sort(masks.begin(), masks.end(),
                     [](unsigned a, unsigned b) { return std::popcount(a) < std::popcount(b); });
    std::vector<std::size_t> position(masks.size());
    std::vector<Generator> gens;
    for (std::size_t i = 0; i < masks.size(); ++i) {
        position[masks[i]] = i;
        gens.push_back({detail::subset_name(masks[i], m), std::popcount(masks[i])});
    }
    const Rational precision = small_energy + emax;
    std::vector<std::vector<NovikovSeries>> d(gens.size(), std::vector<NovikovSeries>(gens.size()));
    for (unsigned mask : masks)
        for (std::size_t j = 0; j < m; ++j) {
            if (mask >> j & 1u) continue;
            int before = std::popcount(mask & ((1u << j) - 1u));
            NovikovSeries coeff = (NovikovSeries(1) - local[j]).shifted(small_energy);
            d[position[mask | (1u << j)]][position[mask]] = before % 2 ? -coeff : coeff;
        }
    return NovikovCochainComplex(std::move(gens), std::move(d), precision);
}

/// Lower bound 2 C (R - C), C = min(R/4, injectivity radius), for the energy
/// of strips leaving a ball of radius R around the fiber.
inline Rational energy_threshold(const Rational& radius, const Rational& injectivity_radius) {
    if (radius <= 0 || injectivity_radius <= 0) throw Error(Errc::InvalidInput, "radii must be positive");
    Rational c = std::min(Rational(radius / 4), injectivity_radius);
    return 2 * c * (radius - c);
}

/// Planar form with injectivity radius 1 / (2 |v|) for an edge of primitive direction v.
inline Rational planar_energy_threshold(const Rational& radius, const Rational& primitive_norm) {
    if (radius <= 0 || primitive_norm <= 0) throw Error(Errc::InvalidInput, "radius and norm must be positive");
    Rational c = 1 / (2 * primitive_norm);
    return (radius - c) / primitive_norm;
}

/// Small/large separation at q = (-a, -a): the ball reaching the vertex has
/// affine radius a, and the diagonal leg has injectivity radius 1/2.
inline Rational pants_energy_threshold(const Rational& a) {
    if (a < 0) throw Error(Errc::InvalidInput, "a must be nonnegative");
    if (a == 0) return 0;
    return energy_threshold(a, ratio(1, 2));
}

inline Rational default_small_energy(const Rational& a) {
    return std::min(Rational(1), pants_energy_threshold(a)) / 2;
}

/// CF(L_pants, F_q) at q = (-a, -a): <d x_0, x_1> = T^{small_energy} (u1 - u2 + T^a),
/// normalized by the unit prefactor of the two small strips.
inline NovikovCochainComplex pants_fiber_complex(const Rational& a, const Rational& small_energy, const UnitaryElement& u1,
                                                 const UnitaryElement& u2, const Rational& emax = kDefaultPrecision) {
    if (a < 0) throw Error(Errc::InvalidInput, "a must be nonnegative");
    if (small_energy <= 0) throw Error(Errc::InvalidInput, "small strip energy must be positive");
    Rational threshold = pants_energy_threshold(a);
    if (small_energy >= threshold)
        throw Error(Errc::ThresholdViolated, "small strip energy " + small_energy.get_str() + " is not below the threshold " +
                                                 threshold.get_str());
    NovikovSeries coeff = (u1.series() - u2.series() + NovikovSeries::T(a)).shifted(small_energy);
    std::vector<std::vector<NovikovSeries>> d(2, std::vector<NovikovSeries>(2));
    d[1][0] = coeff;
    return NovikovCochainComplex({{"x{}", 0}, {"x{1}", 1}}, std::move(d), small_energy + emax);
}

/// Bimodule over (exterior algebra on theta, ground field) whose deformed
/// differential on x_0 is T^{small_energy} (u1_0 exp(b) - u2 + T^a) x_1 for a = b theta,
/// where u1_0 is the constant term of u2 - T^a.
inline GappedBimodule pants_bimodule(const Rational& a, const Rational& small_energy, const UnitaryElement& u2,
                                     const Rational& emax = kDefaultPrecision) {
    if (a < 0 || small_energy <= 0) throw Error(Errc::InvalidInput, "need a >= 0 and positive small strip energy");
    const Rational cutoff = emax + small_energy;
    const NovikovSeries target = u2.series() - NovikovSeries::T(a);
    const Rational lead = target.constant();
    if (lead == 0) throw Error(Errc::InvalidInput, "u2 - T^a is not unitary");
    Exponent first = Exponent::infinity();
    for (const auto& t : target.terms())
        if (t.exponent > 0) first = min(first, Exponent(t.exponent));
    GappedAlgebra left({{"1", 0}, {"t", 1}}, cutoff,
                       {{0, {0, 0}, qvec({1, 0})}, {0, {0, 1}, qvec({0, 1})}, {0, {1, 0}, qvec({0, -1})}});
    GappedAlgebra right({{"1'", 0}}, cutoff, {{0, {0, 0}, qvec({1})}});
    std::vector<ModuleTerm> terms{
        {0, {0}, 0, {}, qvec({1, 0})},
        {0, {0}, 1, {}, qvec({0, 1})},
        {0, {}, 0, {0}, qvec({1, 0})},
        {0, {}, 1, {0}, qvec({0, -1})},
    };
    NovikovSeries differential = NovikovSeries(lead) - target;
    for (const auto& t : differential.terms()) terms.push_back({small_energy + t.exponent, {}, 0, {}, QVec{0, t.coeff}});
    // Arity k contributes at energy >= k * first; beyond the cutoff nothing survives.
    long arity = 1;
    if (first.is_finite()) {
        Rational bound = emax / first.value();
        Integer up;
        mpz_cdiv_q(up.get_mpz_t(), bound.get_num_mpz_t(), bound.get_den_mpz_t());
        arity = std::max(1L, up.get_si());
    }
    Rational factorial = 1;
    for (long k = 1; k <= arity; ++k) {
        factorial *= k;
        terms.push_back({small_energy, Inputs(static_cast<std::size_t>(k), 1), 0, {}, QVec{0, lead / factorial}});
    }
    return GappedBimodule(std::move(left), std::move(right), {{"x{}", 0}, {"x{1}", 1}}, terms);
}

struct PantsWitness {
    NovikovSeries cochain;  // b with u1 = u1_0 exp(b)
    UnitaryElement u1;
    ModuleSolution solution;
};

/// Solves for the holonomy u1 pairing with u2 at q = (-a, -a) through the module solver.
inline PantsWitness pants_witness(const Rational& a, const UnitaryElement& u2, const Rational& emax = kDefaultPrecision) {
    const Rational small = a > 0 ? default_small_energy(a) : ratio(1, 2);
    auto module = pants_bimodule(a, small, u2, emax);
    auto solution = solve_module_element(module, 0, {small});
    if (!solution.solved())
        throw Error(Errc::HypothesisFailed, "module solver obstructed at level " + solution.obstruction->level.get_str());
    NovikovSeries b = solution.cochain[1];
    Rational lead = (u2.series() - NovikovSeries::T(a)).constant();
    NovikovSeries u1 = NovikovSeries(lead);
    if (!b.is_zero()) u1 = exp_positive(b, emax).series() * NovikovSeries(lead);
    return {b, UnitaryElement(u1.truncated(Exponent(emax))), std::move(solution)};
}

struct ConormalKind {
    std::size_t n = 2, k = 1;
};
struct PantsKind {};
using SupportKind = std::variant<ConormalKind, PantsKind>;

struct SupportVerdict {
    bool in_support = false;
    std::optional<LocalSystem> witness;  // a local system at the same q with nonzero HF
    std::string reason;
};

namespace detail {

inline bool agrees_to(const NovikovSeries& a, const NovikovSeries& b, const Rational& emax) {
    return (a - b).truncated(Exponent(emax)).is_zero();
}

/// Holonomies at q solving 1 + z1 - z2 = 0 with z_i = T^{q_i} u_i, keeping one of the given ones.
inline std::optional<LocalSystem> pants_relation_witness(const QVec& q, const LocalSystem& given, const Rational& emax) {
    // Solve for u1 = T^{-q1} (T^{q2} u2 - 1).
    NovikovSeries u1 = (given[1].shifted(q[1]) - NovikovSeries(1)).shifted(-q[0]).truncated(Exponent(emax));
    if (!u1.is_zero() && u1.valuation() == Exponent(0)) return LocalSystem{{UnitaryElement(u1), given.holonomies[1]}};
    // Otherwise u2 = T^{-q2} (T^{q1} u1 + 1).
    NovikovSeries u2 = (given[0].shifted(q[0]) + NovikovSeries(1)).shifted(-q[1]).truncated(Exponent(emax));
    if (!u2.is_zero() && u2.valuation() == Exponent(0)) return LocalSystem{{given.holonomies[0], UnitaryElement(u2)}};
    return std::nullopt;
}

}  // namespace detail

/// Whether (F_q, local system) pairs nontrivially with the lift, to order T^emax.
inline SupportVerdict a_support_query(const SupportKind& kind, const FiberPoint& p, const Rational& emax = kDefaultPrecision) {
    if (const auto* c = std::get_if<ConormalKind>(&kind)) {
        if (p.q.size() != c->n || p.local.dimension() != c->n) throw Error(Errc::InvalidInput, "point has the wrong dimension");
        for (std::size_t j = 0; j < c->n - c->k; ++j)
            if (p.q[j] != 0) return {false, std::nullopt, "q is off the subspace, so the fiber misses the lift"};
        auto rank = cohomology_rank(conormal_fiber_complex(c->n, c->k, 1, p.local, emax));
        SupportVerdict v{rank > 0, LocalSystem::trivial(c->n), "rank " + std::to_string(rank)};
        return v;
    }
    if (p.q.size() != 2 || p.local.dimension() != 2) throw Error(Errc::InvalidInput, "pants points live in R^2");
    const Rational& q1 = p.q[0];
    const Rational& q2 = p.q[1];
    Rational low = std::min({Rational(0), q1, q2});
    int ties = (low == 0) + (low == q1) + (low == q2);
    if (ties < 2) return {false, std::nullopt, "q is off the curve, so the fiber misses the lift"};
    if (q1 == q2 && q1 < 0) {
        const Rational a = -q1;
        auto complex = pants_fiber_complex(a, default_small_energy(a), p.local.holonomies[0], p.local.holonomies[1], emax);
        auto rank = cohomology_rank(complex);
        std::optional<LocalSystem> witness;
        if ((p.local[1] - NovikovSeries::T(a)).constant() != 0)
            witness = LocalSystem{{pants_witness(a, p.local.holonomies[1], emax).u1, p.local.holonomies[1]}};
        return {rank > 0, witness, "rank " + std::to_string(rank) + " on the diagonal leg"};
    }
    // Vertex and the two coordinate legs: the leading-order relation directly.
    NovikovSeries residual = p.local[0].shifted(q1) - p.local[1].shifted(q2) + NovikovSeries(1);
    bool vanishes = residual.truncated(Exponent(emax + low)).is_zero();
    return {vanishes, detail::pants_relation_witness(p.q, p.local, emax),
            vanishes ? "relation holds" : "relation fails at valuation " + residual.valuation().str()};
}

struct LineBacksolve {
    Exponent valuation;  // val(1 - u2), the energy of the disk
    UnitaryElement u2;
    NovikovSeries t;
    bool verified = false;
};

/// Collinearity of (0,1,1), (u1, 0, u2) and T^{-c} (v1, v2, 0): the third
/// coordinate forces t = (1 - u2)^{-1}, the first forces val(1 - u2) = c.
/// Builds the solution u2 = 1 - T^c and checks all three coordinates.
inline LineBacksolve line_backsolve(const Rational& c, const UnitaryElement& u1, const Rational& emax = kDefaultPrecision) {
    if (c <= 0) throw Error(Errc::InvalidInput, "edge length must be positive");
    NovikovSeries u2 = NovikovSeries(1) - NovikovSeries::T(c);
    NovikovSeries one_minus_u2 = NovikovSeries(1) - u2;
    NovikovSeries t = invert(one_minus_u2, emax);
    // v1, v2 from the first two coordinates.
    NovikovSeries v1 = (t * u1.series()).shifted(c);
    NovikovSeries v2 = (NovikovSeries(1) - t).shifted(c);
    const Exponent cap(emax);
    bool third = (NovikovSeries(1) - t + t * u2).truncated(cap - c).is_zero();
    bool first = (t * u1.series() - v1.shifted(-c)).truncated(cap - c).is_zero();
    bool second = ((NovikovSeries(1) - t) - v2.shifted(-c)).truncated(cap - c).is_zero();
    bool unitary = v1.valuation() == Exponent(0) && v2.valuation() == Exponent(0);
    return {one_minus_u2.valuation(), UnitaryElement(u2), t, first && second && third && unitary};
}

}  // namespace tropic
