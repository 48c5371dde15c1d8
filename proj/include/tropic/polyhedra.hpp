#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "linalg.hpp"
#include "rational.hpp"
#include "simplex.hpp"

namespace tropic {

/// <q, normal> >= rhs  (or = rhs when used as an equality).
struct Constraint {
    ZVec normal;
    Rational rhs;
    friend bool operator==(const Constraint&, const Constraint&) = default;
    friend auto operator<=>(const Constraint& a, const Constraint& b) {
        if (a.normal != b.normal) return a.normal < b.normal ? std::strong_ordering::less : std::strong_ordering::greater;
        if (a.rhs != b.rhs) return a.rhs < b.rhs ? std::strong_ordering::less : std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
};

/// Sublattice of Z^n stored by a basis in row Hermite normal form.
class Lattice {
public:
    explicit Lattice(std::size_t n) : n_(n) {}
    Lattice(ZMat generators, std::size_t n) : n_(n), basis_(hermite_normal_form(std::move(generators), n)) {}

    static Lattice full(std::size_t n) {
        ZMat id(n, ZVec(n, Integer(0)));
        for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
        return Lattice(id, n);
    }

    std::size_t ambient_dimension() const { return n_; }
    std::size_t rank() const { return basis_.size(); }
    const ZMat& basis() const { return basis_; }

    /// Canonical representative of v modulo the lattice.
    ZVec reduce(ZVec v) const {
        for (const auto& row : basis_) {
            std::size_t p = 0;
            while (row[p] == 0) ++p;
            Integer q = detail::floor_div(v[p], row[p]);
            if (q != 0)
                for (std::size_t j = 0; j < n_; ++j) v[j] -= q * row[j];
        }
        return v;
    }

    bool contains(const ZVec& v) const { return is_zero(reduce(v)); }

    friend bool operator==(const Lattice& a, const Lattice& b) { return a.n_ == b.n_ && a.basis_ == b.basis_; }

private:
    std::size_t n_;
    ZMat basis_;
};

class RationalPolyhedron {
public:
    explicit RationalPolyhedron(std::size_t n = 0) : n_(n) {}

    RationalPolyhedron(std::size_t n, std::vector<Constraint> inequalities, std::vector<Constraint> equalities) : n_(n) {
        for (auto& c : inequalities) add_inequality(std::move(c));
        for (auto& c : equalities) add_equality(std::move(c));
    }

    static RationalPolyhedron point(const QVec& q) {
        RationalPolyhedron p(q.size());
        for (std::size_t i = 0; i < q.size(); ++i) {
            ZVec e(q.size(), Integer(0));
            e[i] = 1;
            p.add_equality({e, q[i]});
        }
        return p;
    }

    /// {base + t * direction : t >= 0}.
    static RationalPolyhedron ray(const QVec& base, const ZVec& direction) {
        return through(base, direction, true, std::nullopt);
    }

    /// Segment from a to b (b - a must be nonzero).
    static RationalPolyhedron segment(const QVec& a, const QVec& b) {
        ZVec d = primitive_integral(b - a);
        Rational length = dot(b - a, d) / dot(d, d);
        return through(a, d, true, length);
    }

    /// The full line through base with the given direction.
    static RationalPolyhedron line(const QVec& base, const ZVec& direction) {
        return through(base, direction, false, std::nullopt);
    }

    std::size_t ambient_dimension() const { return n_; }
    const std::vector<Constraint>& inequalities() const { return ineq_; }
    const std::vector<Constraint>& equalities() const { return eq_; }

    void add_inequality(Constraint c) {
        normalize(c, false);
        if (std::find(ineq_.begin(), ineq_.end(), c) == ineq_.end()) ineq_.push_back(std::move(c));
    }
    void add_equality(Constraint c) {
        normalize(c, true);
        if (std::find(eq_.begin(), eq_.end(), c) == eq_.end()) eq_.push_back(std::move(c));
    }

    RationalPolyhedron intersect(const RationalPolyhedron& o) const {
        RationalPolyhedron out = *this;
        for (const auto& c : o.ineq_) out.add_inequality(c);
        for (const auto& c : o.eq_) out.add_equality(c);
        return out;
    }

    /// Copy with inequality i turned into an equality.
    RationalPolyhedron tightened(std::size_t i) const {
        RationalPolyhedron out(n_);
        for (std::size_t j = 0; j < ineq_.size(); ++j)
            if (j != i) out.add_inequality(ineq_[j]);
        for (const auto& c : eq_) out.add_equality(c);
        out.add_equality(ineq_[i]);
        return out;
    }

    bool contains(const QVec& q) const {
        for (const auto& c : ineq_)
            if (dot(c.normal, q) < c.rhs) return false;
        for (const auto& c : eq_)
            if (dot(c.normal, q) != c.rhs) return false;
        return true;
    }

    bool strictly_satisfies_inequalities(const QVec& q) const {
        for (const auto& c : ineq_)
            if (dot(c.normal, q) <= c.rhs) return false;
        return true;
    }

    SimplexLP lp() const {
        std::vector<LinearConstraint> in, eq;
        for (const auto& c : ineq_) in.push_back({to_rational(c.normal), c.rhs});
        for (const auto& c : eq_) eq.push_back({to_rational(c.normal), c.rhs});
        return SimplexLP(n_, std::move(in), std::move(eq));
    }

    std::string str() const {
        std::ostringstream os;
        auto write = [&](const Constraint& c, const char* rel) {
            os << "<q,(";
            for (std::size_t i = 0; i < c.normal.size(); ++i) os << (i ? "," : "") << c.normal[i].get_str();
            os << ")> " << rel << " " << c.rhs.get_str() << "; ";
        };
        for (const auto& c : eq_) write(c, "=");
        for (const auto& c : ineq_) write(c, ">=");
        return os.str();
    }

private:
    static RationalPolyhedron through(const QVec& base, const ZVec& direction, bool bounded_below,
                                      std::optional<Rational> length) {
        const std::size_t n = base.size();
        RationalPolyhedron p(n);
        ZMat row{direction};
        for (const auto& w : integer_kernel(row, n)) p.add_equality({w, dot(w, base)});
        if (bounded_below) p.add_inequality({direction, dot(direction, base)});
        if (length) p.add_inequality({-direction, -(dot(direction, base) + *length * dot(direction, direction))});
        return p;
    }

    void normalize(Constraint& c, bool equality) const {
        if (c.normal.size() != n_) throw std::invalid_argument("constraint dimension mismatch");
        Integer g = content(c.normal);
        if (g == 0) throw std::invalid_argument("constraint normal must be nonzero");
        if (equality) {
            std::size_t p = 0;
            while (c.normal[p] == 0) ++p;
            if (c.normal[p] < 0) g = -g;
        }
        if (g != 1) {
            for (auto& x : c.normal) x /= g;
            c.rhs /= g;
        }
    }

    std::size_t n_;
    std::vector<Constraint> ineq_;
    std::vector<Constraint> eq_;
};

/// Affine hull data: all equalities valid on P (explicit and implicit),
/// plus a point in the relative interior.
struct AffineHull {
    std::vector<Constraint> equalities;
    std::vector<std::size_t> implicit;  // indices of inequalities that hold with equality
    QVec interior_point;
    int dimension = -1;
};

/// nullopt when P is empty.
inline std::optional<AffineHull> affine_hull(const RationalPolyhedron& p) {
    const std::size_t n = p.ambient_dimension();
    SimplexLP lp = p.lp();
    LPResult base = lp.feasible_point();
    if (base.status == LPStatus::Infeasible) return std::nullopt;
    AffineHull hull;
    hull.equalities = p.equalities();
    QVec sum = base.point;
    Rational count = 1;
    const auto& ineq = p.inequalities();
    for (std::size_t i = 0; i < ineq.size(); ++i) {
        QVec obj = to_rational(ineq[i].normal);
        LPResult r = lp.maximize(obj);
        if (r.status == LPStatus::Optimal && r.value == ineq[i].rhs) {
            hull.implicit.push_back(i);
            hull.equalities.push_back(ineq[i]);
            continue;
        }
        if (r.status == LPStatus::Optimal) {
            sum = sum + r.point;
        } else {
            // Unbounded: pick any point with slack at least one.
            RationalPolyhedron q = p;
            q.add_inequality({ineq[i].normal, ineq[i].rhs + 1});
            sum = sum + q.lp().feasible_point().point;
        }
        count += 1;
    }
    hull.interior_point = (1 / count) * sum;
    QMat rows;
    for (const auto& c : hull.equalities) rows.push_back(to_rational(c.normal));
    hull.dimension = static_cast<int>(n) - static_cast<int>(rank(rows, n));
    return hull;
}

/// Dimension of the affine hull, or nullopt for the empty set.
inline std::optional<int> dimension(const RationalPolyhedron& p) {
    auto h = affine_hull(p);
    if (!h) return std::nullopt;
    return h->dimension;
}

/// T_Z P: integer vectors parallel to the affine hull (saturated by construction).
inline Lattice tangent_lattice(const RationalPolyhedron& p) {
    const std::size_t n = p.ambient_dimension();
    auto h = affine_hull(p);
    if (!h) throw std::invalid_argument("tangent_lattice of an empty polyhedron");
    ZMat rows;
    for (const auto& c : h->equalities) rows.push_back(c.normal);
    return Lattice(integer_kernel(rows, n), n);
}

/// P subset of Q, decided by LP on each constraint of Q.
inline bool is_subset(const RationalPolyhedron& p, const RationalPolyhedron& q) {
    SimplexLP lp = p.lp();
    if (lp.feasible_point().status == LPStatus::Infeasible) return true;
    for (const auto& c : q.inequalities()) {
        LPResult r = lp.minimize(to_rational(c.normal));
        if (r.status != LPStatus::Optimal || r.value < c.rhs) return false;
    }
    for (const auto& c : q.equalities()) {
        QVec obj = to_rational(c.normal);
        LPResult lo = lp.minimize(obj), hi = lp.maximize(obj);
        if (lo.status != LPStatus::Optimal || hi.status != LPStatus::Optimal) return false;
        if (lo.value != c.rhs || hi.value != c.rhs) return false;
    }
    return true;
}

inline bool same_set(const RationalPolyhedron& p, const RationalPolyhedron& q) { return is_subset(p, q) && is_subset(q, p); }

/// Whether F (assumed to lie in P) is a face of P.
inline bool is_face(const RationalPolyhedron& f, const RationalPolyhedron& p) {
    SimplexLP lp = f.lp();
    if (lp.feasible_point().status == LPStatus::Infeasible) return true;
    RationalPolyhedron g = p;
    for (std::size_t i = 0; i < p.inequalities().size(); ++i) {
        const auto& c = p.inequalities()[i];
        LPResult hi = lp.maximize(to_rational(c.normal));
        if (hi.status == LPStatus::Optimal && hi.value == c.rhs) g.add_equality(c);
    }
    return is_subset(g, f);
}

/// Canonical text key of the affine hull, used to bucket candidate-equal sets.
inline std::string hull_key(const AffineHull& h, std::size_t n) {
    QMat rows;
    for (const auto& c : h.equalities) {
        QVec r = to_rational(c.normal);
        r.push_back(c.rhs);
        rows.push_back(std::move(r));
    }
    RowEchelon e = rref(rows, n + 1);
    std::ostringstream os;
    for (const auto& r : e.rows) {
        for (const auto& x : r) os << x.get_str() << ',';
        os << ';';
    }
    return os.str();
}

/// Facets of P, deduplicated.
inline std::vector<RationalPolyhedron> facets(const RationalPolyhedron& p) {
    std::vector<RationalPolyhedron> out;
    auto h = affine_hull(p);
    if (!h) return out;
    std::vector<bool> implicit(p.inequalities().size(), false);
    for (auto i : h->implicit) implicit[i] = true;
    for (std::size_t i = 0; i < p.inequalities().size(); ++i) {
        if (implicit[i]) continue;
        RationalPolyhedron f = p.tightened(i);
        auto d = dimension(f);
        if (!d || *d != h->dimension - 1) continue;
        bool dup = false;
        for (const auto& g : out)
            if (same_set(f, g)) {
                dup = true;
                break;
            }
        if (!dup) out.push_back(std::move(f));
    }
    return out;
}

struct Cell {
    RationalPolyhedron polyhedron;
    int dimension = 0;
    Integer weight = 1;
};

class WeightedPolyhedralComplex {
public:
    explicit WeightedPolyhedralComplex(std::size_t n = 0) : n_(n) {}

    std::size_t ambient_dimension() const { return n_; }
    const std::vector<Cell>& cells() const { return cells_; }

    /// Adds a cell, computing its dimension. Empty polyhedra are rejected.
    void add_cell(RationalPolyhedron p, Integer weight = 1) {
        if (p.ambient_dimension() != n_) throw std::invalid_argument("cell dimension mismatch");
        if (weight <= 0) throw std::invalid_argument("cell weights must be positive");
        auto d = dimension(p);
        if (!d) throw std::invalid_argument("empty cell");
        cells_.push_back({std::move(p), *d, std::move(weight)});
    }

    int top_dimension() const {
        int d = -1;
        for (const auto& c : cells_) d = std::max(d, c.dimension);
        return d;
    }

    /// Pairs (i, j) such that cell j is a facet of cell i.
    std::vector<std::pair<std::size_t, std::size_t>> incidence() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t i = 0; i < cells_.size(); ++i)
            for (std::size_t j = 0; j < cells_.size(); ++j)
                if (cells_[j].dimension + 1 == cells_[i].dimension &&
                    is_subset(cells_[j].polyhedron, cells_[i].polyhedron) &&
                    is_face(cells_[j].polyhedron, cells_[i].polyhedron))
                    out.emplace_back(i, j);
        return out;
    }

private:
    std::size_t n_;
    std::vector<Cell> cells_;
};

struct ComplexVerdict {
    bool valid = true;
    std::vector<std::pair<std::size_t, std::size_t>> offending;
};

/// Polyhedral-complex condition: each pairwise intersection is empty or a face of both.
inline ComplexVerdict validate_complex(const WeightedPolyhedralComplex& c) {
    ComplexVerdict v;
    const auto& cells = c.cells();
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (std::size_t j = i + 1; j < cells.size(); ++j) {
            RationalPolyhedron meet = cells[i].polyhedron.intersect(cells[j].polyhedron);
            if (!dimension(meet)) continue;
            if (!is_face(meet, cells[i].polyhedron) || !is_face(meet, cells[j].polyhedron)) {
                v.valid = false;
                v.offending.emplace_back(i, j);
            }
        }
    return v;
}

/// For W a common facet of each V_i: v_i in T_Z V_i with T_Z V_i = T_Z W + <v_i>,
/// pointing from W into V_i, reduced modulo T_Z W to a canonical representative.
inline std::vector<ZVec> primitive_transverse_vectors(const RationalPolyhedron& facet,
                                                      const std::vector<RationalPolyhedron>& cells) {
    const std::size_t n = facet.ambient_dimension();
    auto wh = affine_hull(facet);
    if (!wh) throw Error(Errc::NotAFacet, "empty facet");
    Lattice tw = tangent_lattice(facet);
    std::vector<ZVec> out;
    for (std::size_t idx = 0; idx < cells.size(); ++idx) {
        const auto& cell = cells[idx];
        auto vh = affine_hull(cell);
        if (!vh || vh->dimension != wh->dimension + 1 || !is_subset(facet, cell) || !is_face(facet, cell))
            throw Error(Errc::NotAFacet, "cell " + std::to_string(idx) + " does not have the given facet");
        Lattice tv = tangent_lattice(cell);
        const ZMat& bv = tv.basis();
        const std::size_t k1 = bv.size();
        QMat bvt = transpose(to_rational(bv), n);  // n x (k+1): coordinates -> vectors
        // Coordinates of the facet basis inside T_Z V.
        ZMat coords;
        for (const auto& w : tw.basis()) {
            auto x = solve(bvt, to_rational(w), k1);
            if (!x) throw Error(Errc::NotAFacet, "facet lattice not inside cell lattice");
            ZVec zx;
            for (const auto& e : *x) zx.push_back(Integer(e));
            coords.push_back(std::move(zx));
        }
        ZMat psi_basis = integer_kernel(coords, k1);
        if (psi_basis.size() != 1) throw Error(Errc::NotAFacet, "codimension is not one");
        ZVec psi = psi_basis[0];
        ZVec x = bezout(psi);
        ZVec v(n, Integer(0));
        for (std::size_t i = 0; i < k1; ++i)
            for (std::size_t j = 0; j < n; ++j) v[j] += x[i] * bv[i][j];
        QVec d = vh->interior_point - wh->interior_point;
        auto y = solve(bvt, d, k1);
        if (!y || dot(psi, *y) == 0) throw Error(Errc::NotAFacet, "cannot orient transverse vector");
        if (dot(psi, *y) < 0) v = -v;
        out.push_back(tw.reduce(v));
    }
    return out;
}

struct FacetDefect {
    RationalPolyhedron facet;
    std::vector<std::size_t> cells;
    ZVec defect;  // canonical representative in Z^n / T_Z W
};

struct BalancingVerdict {
    bool balanced = true;
    std::vector<FacetDefect> facets;  // every codimension-one face of the top stratum
};

inline BalancingVerdict balancing_check(const WeightedPolyhedralComplex& c) {
    const int top = c.top_dimension();
    const std::size_t n = c.ambient_dimension();
    struct Group {
        RationalPolyhedron facet;
        std::string key;
        std::vector<std::size_t> cells;
    };
    std::vector<Group> groups;
    const auto& cells = c.cells();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].dimension != top) continue;
        for (auto& f : facets(cells[i].polyhedron)) {
            std::string key = hull_key(*affine_hull(f), n);
            bool placed = false;
            for (auto& g : groups)
                if (g.key == key && same_set(g.facet, f)) {
                    g.cells.push_back(i);
                    placed = true;
                    break;
                }
            if (!placed) groups.push_back({std::move(f), key, {i}});
        }
    }
    BalancingVerdict v;
    for (auto& g : groups) {
        std::vector<RationalPolyhedron> adj;
        for (auto i : g.cells) adj.push_back(cells[i].polyhedron);
        auto vecs = primitive_transverse_vectors(g.facet, adj);
        ZVec sum(n, Integer(0));
        for (std::size_t k = 0; k < vecs.size(); ++k)
            for (std::size_t j = 0; j < n; ++j) sum[j] += cells[g.cells[k]].weight * vecs[k][j];
        ZVec defect = tangent_lattice(g.facet).reduce(sum);
        if (!is_zero(defect)) v.balanced = false;
        v.facets.push_back({std::move(g.facet), std::move(g.cells), std::move(defect)});
    }
    return v;
}

}  // namespace tropic
