#pragma once

#include <map>
#include <optional>
#include <random>
#include <vector>

#include "error.hpp"
#include "novikov.hpp"
#include "polyhedra.hpp"
#include "rational.hpp"
#include "tropical.hpp"

namespace tropic {

/// Sum of c_alpha z^alpha over a finite support in Z^n, with nonzero Novikov
/// coefficients all known to at least `working_precision`.
class NovikovLaurentPolynomial {
public:
    NovikovLaurentPolynomial(std::size_t n, std::map<ZVec, NovikovSeries> coefficients,
                             Rational working_precision = kDefaultPrecision)
        : n_(n), coeffs_(std::move(coefficients)), emax_(std::move(working_precision)) {
        if (coeffs_.empty()) throw Error(Errc::InvalidInput, "polynomial needs a nonempty support");
        for (const auto& [alpha, c] : coeffs_) {
            if (alpha.size() != n_) throw Error(Errc::InvalidInput, "exponent dimension mismatch");
            if (c.is_zero()) throw Error(Errc::InvalidInput, "coefficients must be nonzero");
            if (c.precision() < Exponent(emax_))
                throw Error(Errc::InvalidInput, "coefficient " + c.str() + " is not known to the working precision");
        }
    }

    std::size_t ambient_dimension() const { return n_; }
    const std::map<ZVec, NovikovSeries>& coefficients() const { return coeffs_; }
    const Rational& working_precision() const { return emax_; }

    TropicalPolynomial tropicalization() const {
        std::vector<TropicalPolynomial::Term> terms;
        for (const auto& [alpha, c] : coeffs_) terms.push_back({alpha, c.valuation().value()});
        return TropicalPolynomial(n_, terms);
    }

    std::string str() const {
        std::string out;
        for (const auto& [alpha, c] : coeffs_) {
            if (!out.empty()) out += " + ";
            out += "(" + c.str() + ")";
            for (std::size_t i = 0; i < n_; ++i)
                if (alpha[i] != 0) out += "*z" + std::to_string(i + 1) + (alpha[i] == 1 ? "" : "^" + alpha[i].get_str());
        }
        return out;
    }

private:
    std::size_t n_;
    std::map<ZVec, NovikovSeries> coeffs_;
    Rational emax_;
};

/// c_alpha = T^{a_alpha} u_alpha, with u_alpha = 1 unless a seed is given.
inline NovikovLaurentPolynomial lift_coefficients(const TropicalPolynomial& f,
                                                  const std::map<ZVec, UnitaryElement>& seeds = {},
                                                  const Rational& working_precision = kDefaultPrecision) {
    std::map<ZVec, NovikovSeries> coeffs;
    for (const auto& [alpha, a] : f.terms()) {
        auto it = seeds.find(alpha);
        NovikovSeries u = it == seeds.end() ? NovikovSeries(1) : it->second.series();
        coeffs.emplace(alpha, u.shifted(a));
    }
    return NovikovLaurentPolynomial(f.ambient_dimension(), std::move(coeffs), working_precision);
}

class AnalyticPoint {
public:
    explicit AnalyticPoint(std::vector<NovikovSeries> coordinates) : z_(std::move(coordinates)) {
        for (const auto& c : z_)
            if (c.is_zero()) throw Error(Errc::InvalidInput, "point coordinates must be nonzero");
    }
    const std::vector<NovikovSeries>& coordinates() const { return z_; }
    std::size_t size() const { return z_.size(); }

private:
    std::vector<NovikovSeries> z_;
};

inline QVec tropicalize_point(const AnalyticPoint& z) {
    QVec q;
    for (const auto& c : z.coordinates()) q.push_back(c.valuation().value());
    return q;
}

/// F(z) with negative powers taken through `invert`.
inline NovikovSeries evaluate(const NovikovLaurentPolynomial& f, const AnalyticPoint& z,
                              const Rational& working_precision = kDefaultPrecision) {
    if (z.size() != f.ambient_dimension()) throw Error(Errc::InvalidInput, "point dimension mismatch");
    NovikovSeries sum;
    for (const auto& [alpha, c] : f.coefficients()) {
        NovikovSeries term = c;
        for (std::size_t i = 0; i < alpha.size(); ++i)
            term = term * pow(z.coordinates()[i], alpha[i].get_si(), working_precision);
        sum = sum + term;
    }
    return sum;
}

/// Certified valuation of F(z), computed exactly: F is first multiplied by a
/// monomial that clears negative exponents, whose valuation is then subtracted.
inline Exponent residual_valuation(const NovikovLaurentPolynomial& f, const AnalyticPoint& z) {
    const std::size_t n = f.ambient_dimension();
    if (z.size() != n) throw Error(Errc::InvalidInput, "point dimension mismatch");
    std::vector<long> shift(n, 0);
    for (const auto& [alpha, c] : f.coefficients())
        for (std::size_t i = 0; i < n; ++i) shift[i] = std::max(shift[i], -alpha[i].get_si());
    NovikovSeries sum;
    Rational offset = 0;
    for (std::size_t i = 0; i < n; ++i) offset += shift[i] * z.coordinates()[i].valuation().value();
    for (const auto& [alpha, c] : f.coefficients()) {
        NovikovSeries term = c;
        for (std::size_t i = 0; i < n; ++i) term = term * pow(z.coordinates()[i], alpha[i].get_si() + shift[i]);
        sum = sum + term;
    }
    return sum.certified_valuation() - offset;
}

struct KapranovVerdict {
    bool ok = false;
    Exponent residual;
    Rational minimum;
    std::vector<ZVec> achievers;
};

inline KapranovVerdict kapranov_check(const NovikovLaurentPolynomial& f, const AnalyticPoint& z) {
    KapranovVerdict v;
    v.residual = residual_valuation(f, z);
    if (v.residual < Exponent(f.working_precision()))
        throw Error(Errc::NotAZero, "residual valuation " + v.residual.str() + " is below " +
                                        f.working_precision().get_str());
    auto eval = trop_eval(f.tropicalization(), tropicalize_point(z));
    v.minimum = eval.value;
    v.achievers = eval.argmin;
    v.ok = v.achievers.size() >= 2;
    return v;
}

/// Coefficient k is the coefficient of w^k.
using UnivariatePolynomial = std::vector<NovikovSeries>;

/// p(w) by Horner's rule, discarding terms at or above `cap`.
inline NovikovSeries evaluate(const UnivariatePolynomial& p, const NovikovSeries& w,
                              const Exponent& cap = Exponent::infinity()) {
    NovikovSeries out;
    for (auto it = p.rbegin(); it != p.rend(); ++it) out = NovikovSeries::multiply(out, w, cap) + *it;
    return out.truncated(cap);
}

inline UnivariatePolynomial derivative(const UnivariatePolynomial& p) {
    UnivariatePolynomial d;
    for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * NovikovSeries(Rational(static_cast<long>(k))));
    return d;
}

struct NewtonLift {
    NovikovSeries root;                     // known modulo T^target
    std::vector<Exponent> residual_log;     // certified val of p(w_k) for each iterate
};

/// Hensel/Newton lifting of a simple root of the leading-term equation to
/// precision `target`. Each correction is truncated and treated as exact.
inline NewtonLift newton_lift_root(const UnivariatePolynomial& p, const NovikovSeries& initial, const Rational& target) {
    if (initial.is_zero() || initial.valuation() != Exponent(0))
        throw Error(Errc::InvalidInput, "initial term must be unitary");
    UnivariatePolynomial dp = derivative(p);
    if (!(evaluate(p, initial).certified_valuation() > Exponent(0)))
        throw Error(Errc::InvalidInput, "initial term does not solve the leading equation");
    NovikovSeries d0 = evaluate(dp, initial);
    if (d0.is_zero() || d0.valuation() != Exponent(0))
        throw Error(Errc::SingularInitialTerm, "derivative at the initial term is " + d0.str());
    NewtonLift out;
    NovikovSeries w(initial.terms(), Exponent::infinity());
    const Exponent goal(target);
    for (int iter = 0; iter < 64; ++iter) {
        NovikovSeries r = evaluate(p, w, goal);
        out.residual_log.push_back(r.certified_valuation());
        if (r.certified_valuation() >= goal) {
            out.root = w.truncated(goal);
            return out;
        }
        if (r.is_zero() || r.precision() <= r.valuation())
            throw Error(Errc::PrecisionExhausted, "polynomial coefficients are not known to T^" + target.get_str());
        NovikovSeries correction = NovikovSeries::multiply(r, invert(evaluate(dp, w, goal), target), goal);
        w = w - NovikovSeries(correction.terms(), Exponent::infinity());
    }
    throw Error(Errc::PrecisionExhausted, "Newton iteration did not converge");
}

namespace detail {

/// Rational w with w^d = r, preferring the positive root; nullopt if none.
inline std::optional<Rational> rational_root(const Rational& r, long d) {
    if (d <= 0 || r == 0) return std::nullopt;
    if (d % 2 == 0 && r < 0) return std::nullopt;
    auto int_root = [d](Integer x) -> std::optional<Integer> {
        bool neg = x < 0;
        if (neg) x = -x;
        Integer root;
        if (mpz_root(root.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(d)) == 0) return std::nullopt;
        return neg ? Integer(-root) : root;
    };
    auto num = int_root(r.get_num()), den = int_root(r.get_den());
    if (!num || !den) return std::nullopt;
    Rational w(*num, *den);
    w.canonicalize();
    return w;
}

}  // namespace detail

struct Realization {
    AnalyticPoint point;
    std::size_t solved_coordinate;
    NewtonLift lift;
};

/// Lifts a point in the relative interior of a facet of trop(F) to an
/// approximate zero of F. All coordinates but one are T^{q_i}; the remaining
/// one is T^{q_d} u with u found by Newton's method. The solved coordinate is
/// the last one on which the two leading exponents differ and whose leading
/// equation has a rational root.
inline Realization realize_point(const NovikovLaurentPolynomial& f, const QVec& point) {
    const std::size_t n = f.ambient_dimension();
    if (point.size() != n) throw Error(Errc::InvalidInput, "point dimension mismatch");
    const QVec q = canonical(point);
    auto eval = trop_eval(f.tropicalization(), q);
    if (eval.argmin.size() == 1) throw Error(Errc::NotOnTropicalization, "minimum is achieved by a single monomial");
    if (eval.argmin.size() > 2) throw Error(Errc::VertexPoint, "minimum is achieved by more than two monomials");
    const ZVec& alpha = eval.argmin[0];
    const ZVec& beta = eval.argmin[1];
    const Rational& m = eval.value;
    // Solve to at least order 1 so the unit part of the solved coordinate survives truncation.
    const Rational target = std::max<Rational>(f.working_precision() - m, 1);
    for (std::size_t d = n; d-- > 0;) {
        if (alpha[d] == beta[d]) continue;
        // Leading equation: lc_alpha w^{alpha_d} + lc_beta w^{beta_d} = 0.
        const bool alpha_high = alpha[d] > beta[d];
        const ZVec& hi = alpha_high ? alpha : beta;
        const ZVec& lo = alpha_high ? beta : alpha;
        long degree = Integer(hi[d] - lo[d]).get_si();
        Rational r = -f.coefficients().at(lo).leading_coefficient() / f.coefficients().at(hi).leading_coefficient();
        auto w0 = detail::rational_root(r, degree);
        if (!w0) continue;
        // G(u) = T^{-m} F(T^q with z_d = T^{q_d} u), shifted to nonnegative powers of u.
        long kmin = 0, kmax = 0;
        bool first = true;
        for (const auto& [gamma, c] : f.coefficients()) {
            long k = gamma[d].get_si();
            kmin = first ? k : std::min(kmin, k);
            kmax = first ? k : std::max(kmax, k);
            first = false;
        }
        UnivariatePolynomial g(static_cast<std::size_t>(kmax - kmin + 1));
        for (const auto& [gamma, c] : f.coefficients()) {
            Rational shift = dot(gamma, q) - m;
            g[static_cast<std::size_t>(gamma[d].get_si() - kmin)] =
                g[static_cast<std::size_t>(gamma[d].get_si() - kmin)] + c.shifted(shift);
        }
        NewtonLift lift = newton_lift_root(g, NovikovSeries(*w0), target);
        std::vector<NovikovSeries> z;
        for (std::size_t i = 0; i < n; ++i) z.push_back(i == d ? lift.root.shifted(q[i]) : NovikovSeries::T(q[i]));
        return {AnalyticPoint(std::move(z)), d, std::move(lift)};
    }
    throw Error(Errc::NoRationalRoot, "no coordinate has a leading equation with a rational root");
}

/// Distance from the minimum to the nearest value of a non-achieving monomial.
inline std::optional<Rational> facet_gap(const TropicalPolynomial& f, const QVec& q) {
    auto eval = trop_eval(f, q);
    std::optional<Rational> gap;
    for (const auto& [alpha, a] : f.terms()) {
        Rational v = a + dot(alpha, q) - eval.value;
        if (v > 0 && (!gap || v < *gap)) gap = v;
    }
    return gap;
}

/// Points in the relative interior of codimension-one cells of trop(F), with
/// exactly two achievers: interior point plus a random lattice jitter, halved a
/// few times if needed. Jittered points must keep at least the interior point's
/// gap to the other monomials (capped at 1/2), which bounds the number of terms
/// the Newton lift has to carry.
inline std::vector<QVec> sample_facet_points(const TropicalPolynomial& f, std::size_t count, std::mt19937_64& rng) {
    WeightedPolyhedralComplex hyp = hypersurface(f);
    std::vector<QVec> out;
    if (hyp.cells().empty()) return out;
    std::uniform_int_distribution<int> coeff(-3, 3);
    for (std::size_t s = 0; s < count; ++s) {
        const Cell& cell = hyp.cells()[s % hyp.cells().size()];
        QVec base = affine_hull(cell.polyhedron)->interior_point;
        auto tied = trop_eval(f, base).argmin;
        auto base_gap = facet_gap(f, base);
        Rational needed = base_gap ? std::min<Rational>(*base_gap, Rational(1, 2)) : Rational(0);
        QVec jitter(f.ambient_dimension(), Rational(0));
        const Lattice tangent = tangent_lattice(cell.polyhedron);
        for (const auto& b : tangent.basis()) jitter = jitter + Rational(coeff(rng)) * to_rational(b);
        QVec q = base;
        for (int halvings = 0; halvings < 4; ++halvings) {
            QVec candidate = base + jitter;
            auto gap = facet_gap(f, candidate);
            if (trop_eval(f, candidate).argmin == tied && (!gap || *gap >= needed)) {
                q = candidate;
                break;
            }
            jitter = Rational(1, 2) * jitter;
        }
        out.push_back(q);
    }
    return out;
}

/// Corpus filter: every facet has exactly two achievers and odd weight, so
/// unit-coefficient lifts always have a rational leading root.
inline bool realizable_by_sampling(const TropicalPolynomial& f) {
    if (f.support_size() < 2) return false;
    WeightedPolyhedralComplex hyp = hypersurface(f);
    if (hyp.cells().empty()) return false;
    for (const auto& c : hyp.cells()) {
        if (c.weight % 2 == 0) return false;
        if (trop_eval(f, affine_hull(c.polyhedron)->interior_point).argmin.size() != 2) return false;
    }
    return true;
}

}  // namespace tropic
