#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace tropic {

using QMat = std::vector<QVec>;  // row-major
using ZMat = std::vector<ZVec>;

struct RowEchelon {
    QMat rows;                   // nonzero rows of the reduced row echelon form
    std::vector<std::size_t> pivots;
};

/// Reduced row echelon form over Q.
inline RowEchelon rref(QMat m, std::size_t cols) {
    RowEchelon out;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t p = r;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[r]);
        Rational inv = 1 / m[r][c];
        for (auto& x : m[r]) x *= inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rational f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        out.pivots.push_back(c);
        ++r;
    }
    m.resize(r);
    out.rows = std::move(m);
    return out;
}

inline std::size_t rank(const QMat& m, std::size_t cols) { return rref(m, cols).pivots.size(); }

inline QMat to_rational(const ZMat& m) {
    QMat out;
    out.reserve(m.size());
    for (const auto& row : m) out.push_back(to_rational(row));
    return out;
}

inline std::size_t rank(const ZMat& m, std::size_t cols) { return rank(to_rational(m), cols); }

/// Basis of {x : m x = 0} over Q.
inline QMat kernel(const QMat& m, std::size_t cols) {
    RowEchelon e = rref(m, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : e.pivots) is_pivot[p] = true;
    QMat basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        QVec v(cols, Rational(0));
        v[f] = 1;
        for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.rows[i][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Some x with m x = b, or nullopt.
inline std::optional<QVec> solve(const QMat& m, const QVec& b, std::size_t cols) {
    QMat aug;
    aug.reserve(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        QVec row = m[i];
        row.push_back(b[i]);
        aug.push_back(std::move(row));
    }
    RowEchelon e = rref(aug, cols + 1);
    QVec x(cols, Rational(0));
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
        if (e.pivots[i] == cols) return std::nullopt;
        x[e.pivots[i]] = e.rows[i][cols];
    }
    return x;
}

inline QMat transpose(const QMat& m, std::size_t cols) {
    QMat t(cols, QVec(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) t[j][i] = m[i][j];
    return t;
}

inline QVec apply(const QMat& m, const QVec& x) {
    QVec y(m.size(), Rational(0));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += m[i][j] * x[j];
    return y;
}

inline ZVec apply(const ZMat& m, const ZVec& x) {
    ZVec y(m.size(), Integer(0));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) y[i] += m[i][j] * x[j];
    return y;
}

inline ZMat multiply(const ZMat& a, const ZMat& b, std::size_t b_cols) {
    ZMat out(a.size(), ZVec(b_cols, Integer(0)));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k)
            for (std::size_t j = 0; j < b_cols; ++j) out[i][j] += a[i][k] * b[k][j];
    return out;
}

/// Rank over the field with two elements; entries must be integers.
inline std::size_t rank_mod2(const QMat& m, std::size_t cols) {
    std::vector<std::vector<unsigned char>> a;
    for (const auto& row : m) {
        std::vector<unsigned char> r(cols);
        for (std::size_t j = 0; j < cols; ++j) {
            if (row[j].get_den() != 1) throw std::invalid_argument("rank_mod2: non-integral entry");
            r[j] = mpz_odd_p(row[j].get_num_mpz_t()) ? 1 : 0;
        }
        a.push_back(std::move(r));
    }
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
        std::size_t p = r;
        while (p < a.size() && !a[p][c]) ++p;
        if (p == a.size()) continue;
        std::swap(a[p], a[r]);
        for (std::size_t i = 0; i < a.size(); ++i)
            if (i != r && a[i][c])
                for (std::size_t j = c; j < cols; ++j) a[i][j] ^= a[r][j];
        ++r;
    }
    return r;
}

inline Rational determinant(QMat m) {
    const std::size_t n = m.size();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m[i][c] == 0) continue;
            Rational f = m[i][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    return det;
}

inline std::optional<QMat> inverse(const QMat& m) {
    const std::size_t n = m.size();
    QMat aug(n, QVec(2 * n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
        aug[i][n + i] = 1;
    }
    RowEchelon e = rref(aug, 2 * n);
    if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
    QMat inv(n, QVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = e.rows[i][n + j];
    return inv;
}

namespace detail {

inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

/// Integer row reduction on the first `cols` columns of `m` (extra columns
/// ride along). Produces row Hermite normal form on those columns: pivots
/// positive, entries above a pivot reduced into [0, pivot). Returns pivot columns.
inline std::vector<std::size_t> hermite_inplace(ZMat& m, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    const std::size_t width = m.empty() ? 0 : m[0].size();
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        while (true) {
            std::size_t best = m.size();
            for (std::size_t i = r; i < m.size(); ++i)
                if (m[i][c] != 0 && (best == m.size() || abs(m[i][c]) < abs(m[best][c]))) best = i;
            if (best == m.size()) break;
            std::swap(m[best], m[r]);
            bool done = true;
            for (std::size_t i = r + 1; i < m.size(); ++i) {
                if (m[i][c] == 0) continue;
                Integer q = detail::floor_div(m[i][c], m[r][c]);
                for (std::size_t j = 0; j < width; ++j) m[i][j] -= q * m[r][j];
                if (m[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (r >= m.size() || m[r][c] == 0) continue;
        if (m[r][c] < 0)
            for (auto& x : m[r]) x = -x;
        for (std::size_t i = 0; i < r; ++i) {
            Integer q = detail::floor_div(m[i][c], m[r][c]);
            if (q != 0)
                for (std::size_t j = 0; j < width; ++j) m[i][j] -= q * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace detail

/// Row Hermite normal form of the lattice spanned by `rows` (zero rows dropped).
inline ZMat hermite_normal_form(ZMat rows, std::size_t cols) {
    auto pivots = detail::hermite_inplace(rows, cols);
    rows.resize(pivots.size());
    return rows;
}

/// Basis (in Hermite normal form) of the integer kernel {x in Z^cols : m x = 0}.
inline ZMat integer_kernel(const ZMat& m, std::size_t cols) {
    // Row-reduce [m^T | I]; rows whose m^T part vanishes carry kernel vectors.
    const std::size_t rows_m = m.size();
    ZMat aug(cols, ZVec(rows_m + cols, Integer(0)));
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < rows_m; ++i) aug[j][i] = m[i][j];
        aug[j][rows_m + j] = 1;
    }
    auto pivots = detail::hermite_inplace(aug, rows_m);
    ZMat ker;
    for (std::size_t r = pivots.size(); r < cols; ++r) ker.emplace_back(aug[r].begin() + rows_m, aug[r].end());
    return hermite_normal_form(ker, cols);
}

/// Extended gcd over a vector: coefficients x with sum x_i v_i = gcd(v).
inline ZVec bezout(const ZVec& v) {
    ZVec x(v.size(), Integer(0));
    Integer g = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        Integer ng, s, t;
        mpz_gcdext(ng.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), g.get_mpz_t(), v[i].get_mpz_t());
        for (std::size_t j = 0; j < i; ++j) x[j] *= s;
        x[i] = t;
        g = ng;
    }
    return x;
}

/// Unimodular matrix (returned as columns) whose first columns are `prefix`.
/// Requires the prefix to span a saturated sublattice; otherwise nullopt.
inline std::optional<ZMat> complete_to_basis(const ZMat& prefix, std::size_t n) {
    const std::size_t k = prefix.size();
    // Row-reduce [P^T | I]: R P^T = [H^T; 0] with R unimodular.
    ZMat aug(n, ZVec(k + n, Integer(0)));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < k; ++i) aug[j][i] = prefix[i][j];
        aug[j][k + j] = 1;
    }
    auto pivots = detail::hermite_inplace(aug, k);
    if (pivots.size() != k) return std::nullopt;
    for (std::size_t i = 0; i < k; ++i)
        if (abs(aug[i][pivots[i]]) != 1) return std::nullopt;
    QMat r(n, QVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r[i][j] = aug[i][k + j];
    auto s = inverse(r);
    if (!s) return std::nullopt;
    // Columns: the prefix itself, then the trailing columns of R^{-1}.
    ZMat columns;
    for (const auto& v : prefix) columns.push_back(v);
    for (std::size_t j = k; j < n; ++j) {
        ZVec col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = Integer((*s)[i][j]);
        columns.push_back(std::move(col));
    }
    QMat check(n, QVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) check[i][j] = columns[j][i];
    if (abs(determinant(check)) != 1) return std::nullopt;
    return columns;
}

/// gcd of the maximal minors of the row set; 1 iff the rows extend to a basis.
inline Integer maximal_minor_gcd(const ZMat& rows, std::size_t n) {
    const std::size_t k = rows.size();
    if (k == 0) return 1;
    if (k > n) return 0;
    Integer g = 0;
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
        QMat sub(k, QVec(k));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) sub[i][j] = rows[i][pick[j]];
        g = gcd(g, Integer(determinant(sub)));
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
    return g;
}

}  // namespace tropic
