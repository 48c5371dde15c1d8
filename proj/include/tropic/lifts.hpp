#pragma once

// Combinatorial cohomology of the Lagrangian lift of a smooth tropical curve.
// Each vertex contributes a piece (pair of pants) x T^{n-2}; bounded edges
// contribute the overlap tori T^{n-1}. Cohomology is computed from the
// two-column Cech complex of this cover.

#include <string>
#include <vector>

#include "error.hpp"
#include "linalg.hpp"
#include "rational.hpp"
#include "tropical.hpp"

namespace tropic {

enum class Field { Rationals, Two };

struct PieceRestriction {
    bool ray = false;
    std::size_t index = 0;  // edge or ray index in the curve
    ZMat matrix;            // (n-1) x n: local H^1(piece) coordinates -> edge torus coordinates
    ZMat adapter;           // (n-1) x (n-1) unimodular E with matrix = E * template
    int slot = 0;           // 0, 1, 2: which pants leg
};

struct LiftPiece {
    std::size_t vertex = 0;
    ZMat local_basis;  // n vectors: v2, -v1, then a completion to a basis of Z^n
    std::vector<PieceRestriction> restrictions;
};

struct LiftModel {
    std::size_t n = 0;
    std::size_t vertex_count = 0;
    std::vector<LiftPiece> pieces;
    std::vector<std::pair<std::size_t, std::size_t>> edge_ends;  // (from, to) per bounded edge
    std::vector<std::size_t> ray_vertex;
    long genus = 0;

    const PieceRestriction& restriction(std::size_t vertex, bool ray, std::size_t index) const {
        for (const auto& r : pieces[vertex].restrictions)
            if (r.ray == ray && r.index == index) return r;
        throw std::logic_error("missing restriction");
    }
};

namespace detail {

inline ZMat rows_times_columns(const ZMat& rows, const ZMat& columns) {
    ZMat out(rows.size(), ZVec(columns.size(), Integer(0)));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < columns.size(); ++j)
            for (std::size_t k = 0; k < columns[j].size(); ++k) out[i][j] += rows[i][k] * columns[j][k];
    return out;
}

/// Standard pants restriction on local coordinates (a, b, t): (a, t), (b, t), (-a-b, t).
inline ZMat pants_template(int slot, std::size_t n) {
    ZMat t(n - 1, ZVec(n, Integer(0)));
    if (slot == 0) t[0][0] = 1;
    if (slot == 1) t[0][1] = 1;
    if (slot == 2) t[0][0] = t[0][1] = -1;
    for (std::size_t j = 2; j < n; ++j) t[j - 1][j] = 1;
    return t;
}

inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t q) {
    std::vector<std::vector<std::size_t>> out;
    if (q > n) return out;
    std::vector<std::size_t> pick(q);
    for (std::size_t i = 0; i < q; ++i) pick[i] = i;
    while (true) {
        out.push_back(pick);
        std::size_t i = q;
        while (i > 0 && pick[i - 1] == n - q + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < q; ++j) pick[j] = pick[j - 1] + 1;
    }
    return out;
}

/// Degree-q monomials of a piece: subsets not containing both pants classes 0 and 1.
inline std::vector<std::vector<std::size_t>> piece_monomials(std::size_t n, std::size_t q) {
    std::vector<std::vector<std::size_t>> out;
    for (auto& s : subsets(n, q)) {
        bool has0 = std::find(s.begin(), s.end(), 0) != s.end();
        bool has1 = std::find(s.begin(), s.end(), 1) != s.end();
        if (!(has0 && has1)) out.push_back(std::move(s));
    }
    return out;
}

/// Matrix of the q-th exterior power of m (rows x cols), restricted to the given column monomials.
inline ZMat exterior_power(const ZMat& m, std::size_t rows, const std::vector<std::vector<std::size_t>>& column_monomials,
                           std::size_t q) {
    auto row_monomials = subsets(rows, q);
    ZMat out(row_monomials.size(), ZVec(column_monomials.size(), Integer(0)));
    for (std::size_t i = 0; i < row_monomials.size(); ++i)
        for (std::size_t j = 0; j < column_monomials.size(); ++j) {
            QMat sub(q, QVec(q));
            for (std::size_t a = 0; a < q; ++a)
                for (std::size_t b = 0; b < q; ++b) sub[a][b] = m[row_monomials[i][a]][column_monomials[j][b]];
            out[i][j] = Integer(q == 0 ? Rational(1) : determinant(sub));
        }
    return out;
}

inline std::size_t rank_over(const ZMat& m, std::size_t cols, Field field) {
    QMat q = to_rational(m);
    return field == Field::Rationals ? rank(q, cols) : rank_mod2(q, cols);
}

/// Basis of the kernel over the field; integral vectors (0/1 entries over F_2).
inline ZMat kernel_over(const ZMat& m, std::size_t cols, Field field) {
    if (field == Field::Rationals) return integer_kernel(m, cols);
    std::vector<std::vector<unsigned char>> a;
    for (const auto& row : m) {
        std::vector<unsigned char> r(cols);
        for (std::size_t j = 0; j < cols; ++j) r[j] = mpz_odd_p(row[j].get_mpz_t()) ? 1 : 0;
        a.push_back(std::move(r));
    }
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
        std::size_t p = r;
        while (p < a.size() && !a[p][c]) ++p;
        if (p == a.size()) continue;
        std::swap(a[p], a[r]);
        for (std::size_t i = 0; i < a.size(); ++i)
            if (i != r && a[i][c])
                for (std::size_t j = c; j < cols; ++j) a[i][j] ^= a[r][j];
        pivots.push_back(c);
        ++r;
    }
    ZMat out;
    for (std::size_t f = 0; f < cols; ++f) {
        if (std::find(pivots.begin(), pivots.end(), f) != pivots.end()) continue;
        ZVec v(cols, Integer(0));
        v[f] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i)
            if (a[i][f]) v[pivots[i]] = 1;
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace detail

/// Piece-by-piece restriction data. Each vertex is put in standard position by
/// completing its first two leg directions to a basis of Z^n.
inline LiftModel build_lift_model(const TropicalCurve& c) {
    auto smooth = is_smooth_curve(c);
    if (!smooth.ok) throw Error(Errc::NotSmooth, "vertex " + std::to_string(smooth.offending.front()) + " is not smooth");
    const std::size_t n = c.ambient_dimension();
    if (n < 2) throw Error(Errc::NotSmooth, "ambient dimension must be at least 2");
    LiftModel m;
    m.n = n;
    m.vertex_count = c.vertices().size();
    m.genus = genus(c);
    for (const auto& e : c.edges()) m.edge_ends.emplace_back(e.from, e.to);
    for (const auto& r : c.rays()) m.ray_vertex.push_back(r.vertex);
    for (std::size_t v = 0; v < c.vertices().size(); ++v) {
        auto star = c.star(v);
        const ZVec& v1 = star[0].direction;
        const ZVec& v2 = star[1].direction;
        auto completion = complete_to_basis({v1, v2}, n);
        if (!completion) throw Error(Errc::NotSmooth, "legs at vertex " + std::to_string(v) + " do not extend to a basis");
        LiftPiece piece;
        piece.vertex = v;
        piece.local_basis = {v2, -v1};
        for (std::size_t j = 2; j < n; ++j) piece.local_basis.push_back((*completion)[j]);
        for (int slot = 0; slot < 3; ++slot) {
            const auto& half = star[static_cast<std::size_t>(slot)];
            ZMat projection = normal_projection(half.direction);
            PieceRestriction r;
            r.ray = half.ray;
            r.index = half.index;
            r.slot = slot;
            r.matrix = detail::rows_times_columns(projection, piece.local_basis);
            // E = P_e [w, c3..cn] with w = v2, -v1, v1 for the three legs.
            ZMat adapter_columns{slot == 0 ? v2 : slot == 1 ? ZVec(-v1) : v1};
            for (std::size_t j = 2; j < n; ++j) adapter_columns.push_back((*completion)[j]);
            r.adapter = detail::rows_times_columns(projection, adapter_columns);
            piece.restrictions.push_back(std::move(r));
        }
        m.pieces.push_back(std::move(piece));
    }
    return m;
}

/// The restriction matrices factor through the standard templates with
/// unimodular adapters, and the pants rows of the templates sum to zero.
inline bool pants_relation_holds(const LiftModel& m, std::size_t vertex) {
    const auto& piece = m.pieces[vertex];
    ZVec pants_sum(m.n, Integer(0));
    for (const auto& r : piece.restrictions) {
        ZMat tmpl = detail::pants_template(r.slot, m.n);
        QMat adapter = to_rational(r.adapter);
        if (abs(determinant(adapter)) != 1) return false;
        ZMat product(m.n - 1, ZVec(m.n, Integer(0)));
        for (std::size_t i = 0; i < m.n - 1; ++i)
            for (std::size_t j = 0; j < m.n; ++j)
                for (std::size_t k = 0; k < m.n - 1; ++k) product[i][j] += r.adapter[i][k] * tmpl[k][j];
        if (product != r.matrix) return false;
        pants_sum = pants_sum + tmpl[0];
    }
    return is_zero(pants_sum);
}

namespace detail {

struct CechDegree {
    ZMat delta;  // C^1_q rows x C^0_q columns
    std::size_t c0 = 0, c1 = 0;
};

inline CechDegree cech_differential(const LiftModel& m, std::size_t q) {
    const std::size_t n = m.n;
    auto piece_cols = piece_monomials(n, q);
    const std::size_t edge_rows = subsets(n - 1, q).size();
    CechDegree d;
    d.c0 = piece_cols.size() * m.vertex_count;
    d.c1 = edge_rows * m.edge_ends.size();
    d.delta.assign(d.c1, ZVec(d.c0, Integer(0)));
    for (std::size_t e = 0; e < m.edge_ends.size(); ++e) {
        auto [from, to] = m.edge_ends[e];
        for (auto [v, sign] : {std::pair<std::size_t, int>{from, 1}, {to, -1}}) {
            ZMat block = exterior_power(m.restriction(v, false, e).matrix, n - 1, piece_cols, q);
            for (std::size_t i = 0; i < edge_rows; ++i)
                for (std::size_t j = 0; j < piece_cols.size(); ++j)
                    d.delta[e * edge_rows + i][v * piece_cols.size() + j] += sign * block[i][j];
        }
    }
    return d;
}

}  // namespace detail

/// b_0 .. b_n of the lift.
inline std::vector<long> lift_cohomology(const LiftModel& m, Field field = Field::Rationals) {
    std::vector<long> ranks, c0, c1;
    for (std::size_t q = 0; q <= m.n; ++q) {
        auto d = detail::cech_differential(m, q);
        ranks.push_back(static_cast<long>(detail::rank_over(d.delta, d.c0, field)));
        c0.push_back(static_cast<long>(d.c0));
        c1.push_back(static_cast<long>(d.c1));
    }
    std::vector<long> betti;
    for (std::size_t q = 0; q <= m.n; ++q) {
        long b = c0[q] - ranks[q];
        if (q > 0) b += c1[q - 1] - ranks[q - 1];
        betti.push_back(b);
    }
    return betti;
}

inline long euler_characteristic(const std::vector<long>& betti) {
    long chi = 0;
    for (std::size_t q = 0; q < betti.size(); ++q) chi += (q % 2 ? -1 : 1) * betti[q];
    return chi;
}

struct RestrictionMatrix {
    std::size_t rows = 0, cols = 0;
    ZMat entries;
};

/// H^q(L_V) -> H^q(T_f) on the basis (ker delta_q) followed by a complement of
/// im delta_{q-1}; classes of the second kind vanish on every piece, so their columns are zero.
inline RestrictionMatrix end_restriction(const LiftModel& m, std::size_t end, std::size_t q,
                                         Field field = Field::Rationals) {
    if (end >= m.ray_vertex.size()) throw Error(Errc::NotAnEnd, "ray " + std::to_string(end) + " does not exist");
    const std::size_t n = m.n;
    auto d = detail::cech_differential(m, q);
    ZMat cocycles = detail::kernel_over(d.delta, d.c0, field);
    std::size_t extra = 0;
    if (q > 0) {
        auto prev = detail::cech_differential(m, q - 1);
        extra = prev.c1 - detail::rank_over(prev.delta, prev.c0, field);
    }
    auto piece_cols = detail::piece_monomials(n, q);
    const std::size_t v = m.ray_vertex[end];
    ZMat block = detail::exterior_power(m.restriction(v, true, end).matrix, n - 1, piece_cols, q);
    RestrictionMatrix out;
    out.rows = detail::subsets(n - 1, q).size();
    out.cols = cocycles.size() + extra;
    out.entries.assign(out.rows, ZVec(out.cols, Integer(0)));
    for (std::size_t k = 0; k < cocycles.size(); ++k)
        for (std::size_t i = 0; i < out.rows; ++i)
            for (std::size_t j = 0; j < piece_cols.size(); ++j)
                out.entries[i][k] += block[i][j] * cocycles[k][v * piece_cols.size() + j];
    if (field == Field::Two)
        for (auto& row : out.entries)
            for (auto& x : row) x = mpz_odd_p(x.get_mpz_t()) ? 1 : 0;
    return out;
}

inline bool check_h1_surjection(const LiftModel& m, std::size_t end, Field field = Field::Rationals) {
    auto r = end_restriction(m, end, 1, field);
    return detail::rank_over(r.entries, r.cols, field) == m.n - 1;
}

inline bool check_h2_injection(const LiftModel& m, std::size_t excluded, Field field = Field::Rationals) {
    if (excluded >= m.ray_vertex.size()) throw Error(Errc::NotAnEnd, "ray " + std::to_string(excluded) + " does not exist");
    ZMat stacked;
    std::size_t cols = 0;
    for (std::size_t g = 0; g < m.ray_vertex.size(); ++g) {
        if (g == excluded) continue;
        auto r = end_restriction(m, g, 2, field);
        cols = r.cols;
        for (auto& row : r.entries) stacked.push_back(std::move(row));
    }
    if (cols == 0) cols = static_cast<std::size_t>(lift_cohomology(m, field)[2]);
    return detail::rank_over(stacked, cols, field) == cols;
}

struct CriterionVerdict {
    bool unobstructed = false;
    std::vector<std::string> warnings;
};

/// Surjectivity of H^1(M) -> H^2(L, M) for M the ends other than `excluded`,
/// read off from injectivity of H^2(L) into the H^2 of those ends.
inline CriterionVerdict unobstructedness_criterion(const LiftModel& m, std::size_t excluded,
                                                   Field field = Field::Rationals) {
    CriterionVerdict v;
    v.unobstructed = check_h2_injection(m, excluded, field);
    if (m.genus > 0)
        v.warnings.push_back("curve has genus " + std::to_string(m.genus) +
                             "; the topological lemma behind this criterion is only known for trees");
    return v;
}

}  // namespace tropic
