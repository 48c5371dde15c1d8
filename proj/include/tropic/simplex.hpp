#pragma once

#include <cstddef>
#include <vector>

#include "linalg.hpp"
#include "rational.hpp"

namespace tropic {

struct LinearConstraint {
    QVec normal;
    Rational rhs;
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPResult {
    LPStatus status = LPStatus::Infeasible;
    Rational value;
    QVec point;
};

/// maximize <objective, x>  subject to  <a, x> >= b  (inequalities),
/// <a, x> = b (equalities), x free. Dense two-phase tableau simplex over Q
/// with Bland's rule, so it always terminates.
class SimplexLP {
public:
    SimplexLP(std::size_t n, std::vector<LinearConstraint> inequalities, std::vector<LinearConstraint> equalities)
        : n_(n), ineq_(std::move(inequalities)), eq_(std::move(equalities)) {}

    LPResult maximize(const QVec& objective) const {
        // Variables: x+ (n), x- (n), surplus per inequality, artificial per row.
        const std::size_t rows = ineq_.size() + eq_.size();
        const std::size_t structural = 2 * n_ + ineq_.size();
        const std::size_t cols = structural + rows;
        std::vector<QVec> t(rows, QVec(cols + 1, Rational(0)));
        std::vector<std::size_t> basis(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            const bool is_ineq = i < ineq_.size();
            const auto& con = is_ineq ? ineq_[i] : eq_[i - ineq_.size()];
            for (std::size_t j = 0; j < n_; ++j) {
                t[i][j] = con.normal[j];
                t[i][n_ + j] = -con.normal[j];
            }
            if (is_ineq) t[i][2 * n_ + i] = -1;
            t[i][cols] = con.rhs;
            if (t[i][cols] < 0)
                for (auto& x : t[i]) x = -x;
            t[i][structural + i] = 1;
            basis[i] = structural + i;
        }

        QVec phase1(cols, Rational(0));
        for (std::size_t i = 0; i < rows; ++i) phase1[structural + i] = -1;
        if (run(t, basis, phase1, cols) != LPStatus::Optimal) return {};  // phase 1 is bounded
        Rational infeasibility = 0;
        for (std::size_t i = 0; i < rows; ++i)
            if (basis[i] >= structural) infeasibility += t[i][cols];
        if (infeasibility != 0) return {LPStatus::Infeasible, 0, {}};

        // Drive remaining artificials out of the basis; drop redundant rows.
        for (std::size_t i = 0; i < t.size();) {
            if (basis[i] < structural) {
                ++i;
                continue;
            }
            std::size_t j = 0;
            while (j < structural && t[i][j] == 0) ++j;
            if (j == structural) {
                t.erase(t.begin() + static_cast<long>(i));
                basis.erase(basis.begin() + static_cast<long>(i));
                continue;
            }
            pivot(t, basis, i, j, cols);
            ++i;
        }
        for (auto& row : t) {
            row.erase(row.begin() + static_cast<long>(structural), row.begin() + static_cast<long>(cols));
        }
        QVec phase2(structural, Rational(0));
        for (std::size_t j = 0; j < n_; ++j) {
            phase2[j] = objective[j];
            phase2[n_ + j] = -objective[j];
        }
        LPStatus s = run(t, basis, phase2, structural);
        LPResult out;
        out.status = s;
        QVec full(structural, Rational(0));
        for (std::size_t i = 0; i < t.size(); ++i) full[basis[i]] = t[i][structural];
        out.point.assign(n_, Rational(0));
        for (std::size_t j = 0; j < n_; ++j) out.point[j] = full[j] - full[n_ + j];
        if (s == LPStatus::Optimal) {
            out.value = 0;
            for (std::size_t j = 0; j < n_; ++j) out.value += objective[j] * out.point[j];
        }
        return out;
    }

    LPResult minimize(const QVec& objective) const {
        QVec neg(objective);
        for (auto& x : neg) x = -x;
        LPResult r = maximize(neg);
        r.value = -r.value;
        return r;
    }

    LPResult feasible_point() const { return maximize(QVec(n_, Rational(0))); }

private:
    static void pivot(std::vector<QVec>& t, std::vector<std::size_t>& basis, std::size_t r, std::size_t c,
                      std::size_t cols) {
        Rational inv = 1 / t[r][c];
        for (std::size_t j = 0; j <= cols; ++j) t[r][j] *= inv;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i == r || t[i][c] == 0) continue;
            Rational f = t[i][c];
            for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[r][j];
        }
        basis[r] = c;
    }

    static LPStatus run(std::vector<QVec>& t, std::vector<std::size_t>& basis, const QVec& cost, std::size_t cols) {
        while (true) {
            std::vector<bool> in_basis(cols, false);
            for (auto b : basis) in_basis[b] = true;
            std::size_t enter = cols;
            for (std::size_t j = 0; j < cols && enter == cols; ++j) {
                if (in_basis[j]) continue;
                Rational reduced = cost[j];
                for (std::size_t i = 0; i < t.size(); ++i) reduced -= cost[basis[i]] * t[i][j];
                if (reduced > 0) enter = j;
            }
            if (enter == cols) return LPStatus::Optimal;
            std::size_t leave = t.size();
            Rational best;
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (t[i][enter] <= 0) continue;
                Rational ratio = t[i][cols] / t[i][enter];
                if (leave == t.size() || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == t.size()) return LPStatus::Unbounded;
            pivot(t, basis, leave, enter, cols);
        }
    }

    std::size_t n_;
    std::vector<LinearConstraint> ineq_;
    std::vector<LinearConstraint> eq_;
};

}  // namespace tropic
