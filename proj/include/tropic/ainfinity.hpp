#pragma once

// Gapped filtered A-infinity algebras and bimodules with finitely many
// structure constants, truncated below a cutoff energy. Signs follow the
// convention (-1)^(k1 + deg x_1 + ... + deg x_k1) for an inner operation
// preceded by k1 inputs; a graded algebra embeds as m2(x, y) = (-1)^|x| x y.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"
#include "linalg.hpp"
#include "novikov.hpp"
#include "rational.hpp"

namespace tropic {

struct Generator {
    std::string name;
    int degree = 0;
    friend bool operator==(const Generator&, const Generator&) = default;
};

using Inputs = std::vector<std::size_t>;
using LevelTable = std::map<Rational, QVec>;

/// The part of s strictly below `cutoff`, as an exact series.
inline NovikovSeries below(const NovikovSeries& s, const Rational& cutoff) {
    std::vector<NovikovSeries::Term> kept;
    for (const auto& t : s.terms())
        if (t.exponent < cutoff) kept.push_back(t);
    return NovikovSeries(std::move(kept), Exponent::infinity());
}

inline NovikovSeries multiply_below(const NovikovSeries& a, const NovikovSeries& b, const Rational& cutoff) {
    return below(NovikovSeries::multiply(a, b, Exponent(cutoff)), cutoff);
}

/// Element of a free module: one Novikov coefficient per generator.
class Chain {
public:
    Chain() = default;
    explicit Chain(std::size_t dimension) : coeffs_(dimension) {}

    static Chain generator(std::size_t dimension, std::size_t index, const NovikovSeries& coeff = NovikovSeries(1)) {
        Chain c(dimension);
        c.coeffs_.at(index) = coeff;
        return c;
    }
    /// sum_i v_i T^level e_i
    static Chain at_level(const QVec& v, const Rational& level) {
        Chain c(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0) c.coeffs_[i] = NovikovSeries::monomial(v[i], level);
        return c;
    }

    std::size_t dimension() const { return coeffs_.size(); }
    const std::vector<NovikovSeries>& coefficients() const { return coeffs_; }
    const NovikovSeries& operator[](std::size_t i) const { return coeffs_.at(i); }
    void add(std::size_t i, const NovikovSeries& c) { coeffs_.at(i) += c; }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (!c.is_zero()) return false;
        return true;
    }
    Exponent valuation() const {
        Exponent v = Exponent::infinity();
        for (const auto& c : coeffs_) v = min(v, c.valuation());
        return v;
    }
    QVec part_at(const Rational& level) const {
        QVec v;
        for (const auto& c : coeffs_) v.push_back(c.coefficient(level));
        return v;
    }
    LevelTable by_level() const {
        LevelTable out;
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            for (const auto& t : coeffs_[i].terms()) {
                auto [it, fresh] = out.try_emplace(t.exponent, QVec(coeffs_.size(), Rational(0)));
                it->second[i] = t.coeff;
            }
        return out;
    }
    Chain below(const Rational& cutoff) const {
        Chain c(dimension());
        for (std::size_t i = 0; i < coeffs_.size(); ++i) c.coeffs_[i] = tropic::below(coeffs_[i], cutoff);
        return c;
    }

    friend Chain operator+(Chain a, const Chain& b) {
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) a.coeffs_[i] += b.coeffs_.at(i);
        return a;
    }
    friend Chain operator-(const Chain& a) {
        Chain c = a;
        for (auto& x : c.coeffs_) x = -x;
        return c;
    }
    friend Chain operator-(const Chain& a, const Chain& b) { return a + (-b); }
    friend Chain operator*(const NovikovSeries& s, const Chain& a) {
        Chain c(a.dimension());
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c.coeffs_[i] = s * a.coeffs_[i];
        return c;
    }
    friend bool operator==(const Chain&, const Chain&) = default;

    std::string str(const std::vector<Generator>& basis) const {
        std::string out;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i].is_zero()) continue;
            if (!out.empty()) out += " + ";
            out += "(" + coeffs_[i].str() + ")*" + basis.at(i).name;
        }
        return out.empty() ? "0" : out;
    }

private:
    std::vector<NovikovSeries> coeffs_;
};

namespace detail {

inline void check_basis(const std::vector<Generator>& basis) {
    std::set<std::string> names;
    for (const auto& g : basis) {
        if (g.name.empty()) throw Error(Errc::InvalidInput, "generator names must be nonempty");
        if (!names.insert(g.name).second) throw Error(Errc::InvalidInput, "duplicate generator " + g.name);
    }
}

/// All tuples in {0..dim-1}^k in lexicographic order.
template <class F>
void for_each_tuple(std::size_t dim, std::size_t k, F&& f) {
    Inputs t(k, 0);
    if (k > 0 && dim == 0) return;
    while (true) {
        f(static_cast<const Inputs&>(t));
        std::size_t i = k;
        while (i > 0 && t[i - 1] + 1 == dim) t[--i] = 0;
        if (i == 0) return;
        ++t[i - 1];
    }
}

/// All (j_0, ..., j_k) with sum l.
template <class F>
void for_each_composition(std::size_t parts, std::size_t total, F&& f) {
    std::vector<std::size_t> c(parts, 0);
    auto rec = [&](auto&& self, std::size_t i, std::size_t left) -> void {
        if (i + 1 == parts) {
            c[i] = left;
            f(static_cast<const std::vector<std::size_t>&>(c));
            return;
        }
        for (std::size_t j = 0; j <= left; ++j) {
            c[i] = j;
            self(self, i + 1, left - j);
        }
    };
    if (parts == 0) {
        if (total == 0) f(static_cast<const std::vector<std::size_t>&>(c));
        return;
    }
    rec(rec, 0, total);
}

inline int sign_before(const std::vector<int>& degrees, std::size_t count) {
    long s = static_cast<long>(count);
    for (std::size_t i = 0; i < count; ++i) s += degrees[i];
    return s % 2 == 0 ? 1 : -1;
}

using Partial = std::map<Inputs, NovikovSeries>;

/// Extends every partial input tuple by each component of x, keeping only prefixes of stored keys.
inline Partial extend(const Partial& partial, const Chain& x, const std::set<Inputs>& prefixes, const Rational& cutoff) {
    Partial next;
    for (const auto& [prefix, coeff] : partial)
        for (std::size_t j = 0; j < x.dimension(); ++j) {
            if (x[j].is_zero()) continue;
            Inputs p = prefix;
            p.push_back(j);
            if (!prefixes.count(p)) continue;
            auto product = multiply_below(coeff, x[j], cutoff);
            if (!product.is_zero()) next[p] += product;
        }
    for (auto it = next.begin(); it != next.end();) it = it->second.is_zero() ? next.erase(it) : std::next(it);
    return next;
}

inline void collect(const Partial& partial, const std::map<Inputs, LevelTable>& table, Chain& out, const Rational& cutoff) {
    for (const auto& [key, coeff] : partial) {
        auto it = table.find(key);
        if (it == table.end()) continue;
        for (const auto& [level, v] : it->second) {
            NovikovSeries s = tropic::below(coeff.shifted(level), cutoff);
            if (s.is_zero()) continue;
            for (std::size_t i = 0; i < out.dimension(); ++i)
                if (v[i] != 0) out.add(i, s * NovikovSeries(v[i]));
        }
    }
}

/// Multilinear evaluation of a sparse table keyed by tuples of generator indices.
inline Chain evaluate_table(const std::map<Inputs, LevelTable>& table, const std::set<Inputs>& prefixes,
                            const std::vector<const Chain*>& inputs, std::size_t out_dim, const Rational& cutoff) {
    Partial partial{{Inputs{}, NovikovSeries(1)}};
    Chain out(out_dim);
    for (const Chain* x : inputs) {
        partial = extend(partial, *x, prefixes, cutoff);
        if (partial.empty()) return out;
    }
    collect(partial, table, out, cutoff);
    return out;
}

inline std::set<Inputs> prefixes_of(const std::map<Inputs, LevelTable>& table) {
    std::set<Inputs> out;
    for (const auto& [key, levels] : table)
        for (std::size_t n = 0; n <= key.size(); ++n) out.insert(Inputs(key.begin(), key.begin() + static_cast<long>(n)));
    return out;
}

inline void accumulate(std::map<Inputs, LevelTable>& table, const Inputs& key, const Rational& level, const QVec& v) {
    auto [it, fresh] = table[key].try_emplace(level, QVec(v.size(), Rational(0)));
    for (std::size_t i = 0; i < v.size(); ++i) it->second[i] += v[i];
}

inline void drop_zeros(std::map<Inputs, LevelTable>& table) {
    for (auto it = table.begin(); it != table.end();) {
        for (auto lv = it->second.begin(); lv != it->second.end();)
            lv = is_zero(lv->second) ? it->second.erase(lv) : std::next(lv);
        it = it->second.empty() ? table.erase(it) : std::next(it);
    }
}

}  // namespace detail

struct ProductTerm {
    Rational level;
    Inputs inputs;  // arity k = inputs.size()
    QVec output;
};

/// m^k = sum_beta T^beta m^{k,beta}; energies are identified with their values.
class GappedAlgebra {
public:
    GappedAlgebra(std::vector<Generator> basis, Rational cutoff, const std::vector<ProductTerm>& terms = {})
        : basis_(std::move(basis)), cutoff_(std::move(cutoff)) {
        detail::check_basis(basis_);
        if (cutoff_ <= 0) throw Error(Errc::InvalidInput, "cutoff energy must be positive");
        for (const auto& t : terms) {
            if (t.output.size() != basis_.size()) throw Error(Errc::InvalidInput, "output has the wrong dimension");
            if (t.level < 0) throw Error(Errc::InvalidInput, "energy levels must be nonnegative");
            int expected = 2 - static_cast<int>(t.inputs.size());
            for (auto i : t.inputs) {
                if (i >= basis_.size()) throw Error(Errc::InvalidInput, "input index out of range");
                expected += basis_[i].degree;
            }
            for (std::size_t i = 0; i < t.output.size(); ++i)
                if (t.output[i] != 0 && basis_[i].degree != expected)
                    throw Error(Errc::InvalidInput, "m^" + std::to_string(t.inputs.size()) + " term produces " +
                                                        basis_[i].name + " in the wrong degree");
            if (t.level >= cutoff_) continue;
            detail::accumulate(products_, t.inputs, canonical(QVec{t.level})[0], canonical(t.output));
        }
        detail::drop_zeros(products_);
        auto curvature = products_.find(Inputs{});
        if (curvature != products_.end() && curvature->second.count(Rational(0)))
            throw Error(Errc::InvalidInput, "curvature must have positive energy");
        prefixes_ = detail::prefixes_of(products_);
        for (const auto& [key, levels] : products_) max_arity_ = std::max(max_arity_, key.size());
    }

    const std::vector<Generator>& basis() const { return basis_; }
    std::size_t dimension() const { return basis_.size(); }
    const Rational& cutoff() const { return cutoff_; }
    std::size_t max_arity() const { return max_arity_; }
    const std::map<Inputs, LevelTable>& products() const { return products_; }

    std::vector<ProductTerm> terms() const {
        std::vector<ProductTerm> out;
        for (const auto& [key, levels] : products_)
            for (const auto& [level, v] : levels) out.push_back({level, key, v});
        return out;
    }

    std::optional<std::size_t> index_of(const std::string& name) const {
        for (std::size_t i = 0; i < basis_.size(); ++i)
            if (basis_[i].name == name) return i;
        return std::nullopt;
    }

    /// m^k(x_1, ..., x_k), truncated at the cutoff.
    Chain apply(const std::vector<Chain>& inputs) const {
        std::vector<const Chain*> ptrs;
        for (const auto& c : inputs) ptrs.push_back(&c);
        return apply(ptrs);
    }
    Chain apply(const std::vector<const Chain*>& inputs) const {
        for (const Chain* c : inputs)
            if (c->dimension() != basis_.size()) throw Error(Errc::InvalidInput, "input dimension mismatch");
        return detail::evaluate_table(products_, prefixes_, inputs, basis_.size(), cutoff_);
    }

    Chain generator(std::size_t i) const { return Chain::generator(basis_.size(), i); }
    Chain zero() const { return Chain(basis_.size()); }

    /// sum over l of m^l(b, ..., b), sharing the expansion of b^l between arities.
    Chain power_sum(const Chain& b) const {
        Chain out = zero();
        detail::Partial partial{{Inputs{}, NovikovSeries(1)}};
        detail::collect(partial, products_, out, cutoff_);
        for (std::size_t l = 1; l <= max_arity_ && !partial.empty(); ++l) {
            partial = detail::extend(partial, b, prefixes_, cutoff_);
            detail::collect(partial, products_, out, cutoff_);
        }
        return out;
    }

    /// Level-`level` matrix of m^1 (rows: outputs, columns: inputs).
    QMat differential(const Rational& level = 0) const {
        QMat d(basis_.size(), QVec(basis_.size(), Rational(0)));
        for (std::size_t j = 0; j < basis_.size(); ++j) {
            auto it = products_.find(Inputs{j});
            if (it == products_.end()) continue;
            auto lv = it->second.find(level);
            if (lv == it->second.end()) continue;
            for (std::size_t i = 0; i < basis_.size(); ++i) d[i][j] = lv->second[i];
        }
        return d;
    }

    std::vector<std::size_t> in_degree(int degree) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < basis_.size(); ++i)
            if (basis_[i].degree == degree) out.push_back(i);
        return out;
    }

    friend bool operator==(const GappedAlgebra& a, const GappedAlgebra& b) {
        return a.basis_ == b.basis_ && a.cutoff_ == b.cutoff_ && a.products_ == b.products_;
    }

private:
    std::vector<Generator> basis_;
    Rational cutoff_;
    std::map<Inputs, LevelTable> products_;
    std::set<Inputs> prefixes_;
    std::size_t max_arity_ = 0;
};

/// Finitely generated monoid of energies appearing in an algebra, listed up to the cutoff.
struct EnergyMonoid {
    std::vector<Rational> generators;
    Rational cutoff;

    std::vector<Rational> levels() const {
        std::set<Rational> seen{Rational(0)};
        std::vector<Rational> frontier{Rational(0)};
        while (!frontier.empty()) {
            std::vector<Rational> next;
            for (const auto& x : frontier)
                for (const auto& g : generators) {
                    Rational y = x + g;
                    if (y <= cutoff && seen.insert(y).second) next.push_back(y);
                }
            frontier = std::move(next);
        }
        return {seen.begin(), seen.end()};
    }
};

inline EnergyMonoid energy_monoid(const GappedAlgebra& a) {
    std::set<Rational> gens;
    for (const auto& [key, levels] : a.products())
        for (const auto& [level, v] : levels)
            if (level > 0) gens.insert(level);
    return {{gens.begin(), gens.end()}, a.cutoff()};
}

/// Degree-one element of strictly positive valuation.
class DeformingCochain {
public:
    DeformingCochain(const GappedAlgebra& a, Chain c) : chain_(c.below(a.cutoff())) {
        if (chain_.dimension() != a.dimension()) throw Error(Errc::InvalidInput, "cochain dimension mismatch");
        for (std::size_t i = 0; i < a.dimension(); ++i) {
            if (chain_[i].is_zero()) continue;
            if (a.basis()[i].degree != 1)
                throw Error(Errc::InvalidInput, "deforming cochain has a component along " + a.basis()[i].name +
                                                    " of degree " + std::to_string(a.basis()[i].degree));
            if (!(chain_[i].valuation() > Exponent(0)))
                throw Error(Errc::InvalidInput, "deforming cochain must have positive valuation");
        }
    }
    const Chain& chain() const { return chain_; }

private:
    Chain chain_;
};

inline Chain curvature(const GappedAlgebra& a) { return a.apply(std::vector<Chain>{}); }

struct RelationViolation {
    std::size_t arity;
    Rational level;
    Inputs inputs;
    QVec defect;
};

/// Quadratic relations on all generator tuples of length <= arity_bound.
inline std::vector<RelationViolation> check_relations(const GappedAlgebra& a, std::size_t arity_bound = 4) {
    std::vector<RelationViolation> out;
    const std::size_t dim = a.dimension();
    std::vector<Chain> gens;
    for (std::size_t i = 0; i < dim; ++i) gens.push_back(a.generator(i));
    std::map<Inputs, Chain> inner_cache;
    auto inner = [&](const Inputs& window) -> const Chain& {
        auto it = inner_cache.find(window);
        if (it != inner_cache.end()) return it->second;
        std::vector<const Chain*> xs;
        for (auto i : window) xs.push_back(&gens[i]);
        return inner_cache.emplace(window, a.apply(xs)).first->second;
    };
    for (std::size_t k = 0; k <= arity_bound; ++k)
        detail::for_each_tuple(dim, k, [&](const Inputs& t) {
            std::vector<int> degrees;
            for (auto i : t) degrees.push_back(a.basis()[i].degree);
            Chain defect = a.zero();
            for (std::size_t k1 = 0; k1 <= k; ++k1)
                for (std::size_t width = 0; k1 + width <= k; ++width) {
                    const Chain& mid = inner(Inputs(t.begin() + static_cast<long>(k1), t.begin() + static_cast<long>(k1 + width)));
                    if (mid.is_zero()) continue;
                    std::vector<const Chain*> xs;
                    for (std::size_t i = 0; i < k1; ++i) xs.push_back(&gens[t[i]]);
                    xs.push_back(&mid);
                    for (std::size_t i = k1 + width; i < k; ++i) xs.push_back(&gens[t[i]]);
                    Chain term = a.apply(xs);
                    defect = detail::sign_before(degrees, k1) > 0 ? defect + term : defect - term;
                }
            for (const auto& [level, v] : defect.by_level()) out.push_back({k, level, t, v});
        });
    return out;
}

/// m^k_(A,d) = sum over insertions of d into every gap of m^{k+l}.
inline GappedAlgebra deform(const GappedAlgebra& a, const DeformingCochain& d) {
    const std::size_t dim = a.dimension();
    const std::size_t top = a.max_arity();
    const Chain& dc = d.chain();
    std::vector<Chain> gens;
    for (std::size_t i = 0; i < dim; ++i) gens.push_back(a.generator(i));
    std::vector<ProductTerm> terms;
    for (std::size_t k = 0; k <= top; ++k)
        detail::for_each_tuple(dim, k, [&](const Inputs& t) {
            Chain sum = a.zero();
            for (std::size_t l = 0; k + l <= top; ++l) {
                if (l > 0 && dc.is_zero()) break;
                detail::for_each_composition(k + 1, l, [&](const std::vector<std::size_t>& gaps) {
                    std::vector<const Chain*> xs;
                    for (std::size_t slot = 0; slot <= k; ++slot) {
                        for (std::size_t r = 0; r < gaps[slot]; ++r) xs.push_back(&dc);
                        if (slot < k) xs.push_back(&gens[t[slot]]);
                    }
                    sum = sum + a.apply(xs);
                });
            }
            for (const auto& [level, v] : sum.by_level()) terms.push_back({level, t, v});
        });
    return GappedAlgebra(a.basis(), a.cutoff(), terms);
}

/// Span of some generators, optionally together with everything of positive energy.
struct Submodule {
    std::vector<bool> generators;
    bool positive_part = false;

    static Submodule span(std::size_t dim, const std::vector<std::size_t>& indices) {
        Submodule s{std::vector<bool>(dim, false), false};
        for (auto i : indices) s.generators.at(i) = true;
        return s;
    }
    static Submodule everything(std::size_t dim) { return {std::vector<bool>(dim, true), false}; }
    static Submodule positively_filtered(std::size_t dim) { return {std::vector<bool>(dim, false), true}; }

    bool contains(const Rational& level, const QVec& v) const {
        if (positive_part && level > 0) return true;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0 && !generators[i]) return false;
        return true;
    }
    bool contains(const Chain& c) const {
        for (const auto& [level, v] : c.by_level())
            if (!contains(level, v)) return false;
        return true;
    }
    std::vector<std::size_t> complement() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < generators.size(); ++i)
            if (!generators[i]) out.push_back(i);
        return out;
    }
};

enum class IdealKind { NotIdeal, WeakIdeal, StrongIdeal };

inline const char* ideal_name(IdealKind k) {
    switch (k) {
        case IdealKind::NotIdeal: return "NotIdeal";
        case IdealKind::WeakIdeal: return "WeakIdeal";
        case IdealKind::StrongIdeal: return "StrongIdeal";
    }
    return "?";
}

inline IdealKind ideal_check(const Submodule& sub, const GappedAlgebra& b) {
    if (sub.generators.size() != b.dimension()) throw Error(Errc::InvalidInput, "submodule dimension mismatch");
    for (const auto& [key, levels] : b.products()) {
        if (key.empty()) continue;
        bool touches = false;
        for (auto i : key) touches = touches || sub.generators[i];
        if (!touches) continue;
        for (const auto& [level, v] : levels)
            if (!sub.contains(level, v)) return IdealKind::NotIdeal;
    }
    return sub.contains(curvature(b)) ? IdealKind::StrongIdeal : IdealKind::WeakIdeal;
}

/// Induced structure on the complement of the ideal's generators.
inline GappedAlgebra quotient(const GappedAlgebra& b, const Submodule& sub) {
    if (ideal_check(sub, b) == IdealKind::NotIdeal) throw Error(Errc::NotAnIdeal, "subspace is not closed under the products");
    auto keep = sub.complement();
    std::vector<std::size_t> position(b.dimension(), keep.size());
    std::vector<Generator> basis;
    for (std::size_t j = 0; j < keep.size(); ++j) {
        position[keep[j]] = j;
        basis.push_back(b.basis()[keep[j]]);
    }
    std::vector<ProductTerm> terms;
    for (const auto& [key, levels] : b.products()) {
        Inputs mapped;
        bool inside = true;
        for (auto i : key) {
            inside = inside && position[i] < keep.size();
            mapped.push_back(position[i]);
        }
        if (!inside) continue;
        for (const auto& [level, v] : levels) {
            if (sub.positive_part && level > 0) continue;
            QVec projected;
            for (auto i : keep) projected.push_back(v[i]);
            terms.push_back({level, mapped, projected});
        }
    }
    return GappedAlgebra(std::move(basis), b.cutoff(), terms);
}

/// Sum over l of m^l(b, ..., b).
inline Chain deformed_curvature(const GappedAlgebra& a, const Chain& b) { return a.power_sum(b); }

/// Reason the algebra fails to be a strictly graded-commutative DGA with
/// energy-zero structure maps, or nullopt.
inline std::optional<std::string> commutative_dga_defect(const GappedAlgebra& c) {
    if (!curvature(c).is_zero()) return std::string("curvature is nonzero");
    for (const auto& [key, levels] : c.products()) {
        if (key.size() > 2) return "has a nonzero m^" + std::to_string(key.size());
        for (const auto& [level, v] : levels)
            if (level != 0) return "has structure maps of positive energy";
    }
    for (std::size_t x = 0; x < c.dimension(); ++x)
        for (std::size_t y = 0; y < c.dimension(); ++y) {
            int dx = c.basis()[x].degree, dy = c.basis()[y].degree;
            Chain xy = c.apply({c.generator(x), c.generator(y)});
            Chain yx = c.apply({c.generator(y), c.generator(x)});
            bool odd = ((dx * dy + dx + dy) % 2 + 2) % 2 == 1;
            if (!(xy == (odd ? -yx : yx))) return "product of " + c.basis()[x].name + " and " + c.basis()[y].name + " is not graded commutative";
        }
    return std::nullopt;
}

enum class SolverMode { LemmaB, Generic };

struct ObstructionReport {
    Rational level;
    QVec defect;  // representative of the class obstructing the step
    std::string reason;
};

struct BoundingSolution {
    Chain cochain;
    std::optional<ObstructionReport> obstruction;
    std::vector<Rational> levels;            // energies processed, in order
    std::vector<Exponent> curvature_after;   // valuation of the deformed curvature after each level
    std::vector<Chain> iterates;             // b_1, b_2, ...

    bool solved() const { return !obstruction; }
};

namespace detail {

inline QMat columns_to_matrix(const std::vector<QVec>& columns, std::size_t rows) {
    QMat m(rows, QVec(columns.size(), Rational(0)));
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (std::size_t i = 0; i < rows; ++i) m[i][j] = columns[j][i];
    return m;
}

/// Vectors in the span of `indices` annihilated by d.
inline std::vector<QVec> cocycles(const QMat& d, const std::vector<std::size_t>& indices, std::size_t dim) {
    std::vector<QVec> cols;
    for (auto j : indices) {
        QVec c(dim, Rational(0));
        for (std::size_t i = 0; i < dim; ++i) c[i] = d[i][j];
        cols.push_back(std::move(c));
    }
    std::vector<QVec> out;
    for (const auto& k : kernel(columns_to_matrix(cols, dim), indices.size())) {
        QVec v(dim, Rational(0));
        for (std::size_t r = 0; r < indices.size(); ++r) v[indices[r]] = k[r];
        out.push_back(std::move(v));
    }
    return out;
}

inline std::vector<std::size_t> intersect(const std::vector<std::size_t>& a, const std::vector<bool>& mask, bool inside) {
    std::vector<std::size_t> out;
    for (auto i : a)
        if (mask[i] == inside) out.push_back(i);
    return out;
}

}  // namespace detail

/// Level-by-level construction of b with curvature(deform(B, b)) = 0 below the cutoff.
/// Generic mode solves m^{1,0}(x) = -(lowest curvature term) over all degree-one x.
/// LemmaB mode first verifies the ideal hypotheses and builds each correction as
/// a lift of a cocycle of the quotient plus a cochain of the ideal.
inline BoundingSolution solve_bounding_cochain(const GappedAlgebra& b, const Submodule& ideal, SolverMode mode) {
    const std::size_t dim = b.dimension();
    const QMat d0 = b.differential(0);
    const auto degree1 = b.in_degree(1);
    std::vector<QVec> correction_columns;  // images under d0 of the allowed corrections
    std::vector<QVec> correction_vectors;

    if (mode == SolverMode::LemmaB) {
        if (ideal.positive_part) throw Error(Errc::HypothesisFailed, "(i) the ideal must be spanned by generators");
        if (ideal_check(ideal, b) != IdealKind::StrongIdeal)
            throw Error(Errc::HypothesisFailed, "(i) the subspace is not a strong ideal");
        GappedAlgebra c = quotient(b, ideal);
        if (auto why = commutative_dga_defect(c)) throw Error(Errc::HypothesisFailed, "(ii) quotient " + *why);
        // Connecting map H^1(quotient) -> H^2(ideal) at energy zero.
        auto quotient1 = detail::intersect(degree1, ideal.generators, false);
        auto ideal1 = detail::intersect(degree1, ideal.generators, true);
        auto ideal2 = detail::intersect(b.in_degree(2), ideal.generators, true);
        QMat projected = d0;
        for (std::size_t i = 0; i < dim; ++i)
            if (ideal.generators[i])
                for (auto& x : projected[i]) x = 0;
        for (const auto& z : detail::cocycles(projected, quotient1, dim)) {
            correction_vectors.push_back(z);
            correction_columns.push_back(tropic::apply(d0, z));
        }
        for (auto j : ideal1) {
            QVec e(dim, Rational(0));
            e[j] = 1;
            correction_vectors.push_back(e);
            correction_columns.push_back(tropic::apply(d0, e));
        }
        std::size_t closed = detail::cocycles(d0, ideal2, dim).size();
        std::size_t reached = correction_columns.empty() ? 0 : rank(detail::columns_to_matrix(correction_columns, dim), correction_columns.size());
        if (reached != closed)
            throw Error(Errc::HypothesisFailed, "(iii) connecting map H^1 of the quotient to H^2 of the ideal is not surjective");
    } else {
        for (auto j : degree1) {
            QVec e(dim, Rational(0));
            e[j] = 1;
            correction_vectors.push_back(e);
            correction_columns.push_back(tropic::apply(d0, e));
        }
    }
    const QMat system = detail::columns_to_matrix(correction_columns, dim);

    BoundingSolution out;
    out.cochain = b.zero();
    Exponent last = Exponent(0);
    while (true) {
        Chain m0 = deformed_curvature(b, out.cochain);
        if (m0.is_zero()) return out;
        Rational level = m0.valuation().value();
        if (!(Exponent(level) > last)) throw Error(Errc::HypothesisFailed, "curvature valuation did not increase");
        QVec lowest = m0.part_at(level);
        if (mode == SolverMode::LemmaB) {
            if (!ideal.contains(level, lowest)) throw Error(Errc::HypothesisFailed, "curvature left the ideal");
            if (!is_zero(tropic::apply(d0, lowest))) throw Error(Errc::HypothesisFailed, "lowest curvature term is not closed");
        }
        QVec target = lowest;
        for (auto& x : target) x = -x;
        auto coeffs = correction_columns.empty() ? std::optional<QVec>() : solve(system, target, correction_columns.size());
        if (!coeffs) {
            out.obstruction = ObstructionReport{level, lowest, "lowest curvature term is not exact"};
            return out;
        }
        QVec step(dim, Rational(0));
        for (std::size_t r = 0; r < coeffs->size(); ++r)
            for (std::size_t i = 0; i < dim; ++i) step[i] += (*coeffs)[r] * correction_vectors[r][i];
        out.cochain = (out.cochain + Chain::at_level(step, level)).below(b.cutoff());
        out.levels.push_back(level);
        out.iterates.push_back(out.cochain);
        out.curvature_after.push_back(deformed_curvature(b, out.cochain).valuation());
        last = Exponent(level);
    }
}

// Bimodules.

struct ModuleTerm {
    Rational level;
    Inputs left;
    std::size_t module_input = 0;
    Inputs right;
    QVec output;
};

/// (A, B)-bimodule with structure maps m^{k1|1|k2}: A^k1 (x) M (x) B^k2 -> M of degree 1 - k1 - k2.
class GappedBimodule {
public:
    GappedBimodule(GappedAlgebra left, GappedAlgebra right, std::vector<Generator> basis,
                   const std::vector<ModuleTerm>& terms = {})
        : left_(std::move(left)), right_(std::move(right)), basis_(std::move(basis)), cutoff_(left_.cutoff()) {
        detail::check_basis(basis_);
        for (const auto& t : terms) {
            if (t.output.size() != basis_.size() || t.module_input >= basis_.size())
                throw Error(Errc::InvalidInput, "module term has the wrong dimension");
            if (t.level < 0) throw Error(Errc::InvalidInput, "energy levels must be nonnegative");
            int expected = 1 - static_cast<int>(t.left.size() + t.right.size()) + basis_[t.module_input].degree;
            for (auto i : t.left) {
                if (i >= left_.dimension()) throw Error(Errc::InvalidInput, "left input out of range");
                expected += left_.basis()[i].degree;
            }
            for (auto i : t.right) {
                if (i >= right_.dimension()) throw Error(Errc::InvalidInput, "right input out of range");
                expected += right_.basis()[i].degree;
            }
            for (std::size_t i = 0; i < basis_.size(); ++i)
                if (t.output[i] != 0 && basis_[i].degree != expected)
                    throw Error(Errc::InvalidInput, "module term produces " + basis_[i].name + " in the wrong degree");
            if (t.level >= cutoff_) continue;
            detail::accumulate(table_[t.left.size()], encode(t.left, t.module_input, t.right), canonical(QVec{t.level})[0],
                               canonical(t.output));
        }
        for (auto& [k1, table] : table_) {
            detail::drop_zeros(table);
            prefixes_[k1] = detail::prefixes_of(table);
            for (const auto& p : prefixes_[k1])
                if (p.size() <= k1) left_prefixes_.insert(p);
        }
    }

    const GappedAlgebra& left() const { return left_; }
    const GappedAlgebra& right() const { return right_; }
    const std::vector<Generator>& basis() const { return basis_; }
    std::size_t dimension() const { return basis_.size(); }
    const Rational& cutoff() const { return cutoff_; }

    std::vector<ModuleTerm> terms() const {
        std::vector<ModuleTerm> out;
        for (const auto& [k1, table] : table_)
            for (const auto& [key, levels] : table)
                for (const auto& [level, v] : levels)
                    out.push_back({level, Inputs(key.begin(), key.begin() + static_cast<long>(k1)), key[k1],
                                   Inputs(key.begin() + static_cast<long>(k1) + 1, key.end()), v});
        return out;
    }

    std::size_t max_left_arity() const {
        std::size_t k = 0;
        for (const auto& [k1, table] : table_)
            if (!table.empty()) k = std::max(k, k1);
        return k;
    }

    Chain apply(const std::vector<const Chain*>& left, const Chain& m, const std::vector<const Chain*>& right) const {
        auto it = table_.find(left.size());
        if (it == table_.end()) return Chain(basis_.size());
        std::vector<const Chain*> all = left;
        all.push_back(&m);
        all.insert(all.end(), right.begin(), right.end());
        return detail::evaluate_table(it->second, prefixes_.at(left.size()), all, basis_.size(), cutoff_);
    }
    Chain apply(const std::vector<Chain>& left, const Chain& m, const std::vector<Chain>& right = {}) const {
        std::vector<const Chain*> l, r;
        for (const auto& c : left) l.push_back(&c);
        for (const auto& c : right) r.push_back(&c);
        return apply(l, m, r);
    }

    Chain generator(std::size_t i) const { return Chain::generator(basis_.size(), i); }

    /// sum over k of m^{k|1|0}(a, ..., a, e), sharing the expansion of a^k between arities.
    Chain left_power_sum(const Chain& a, const Chain& e) const {
        Chain out(basis_.size());
        detail::Partial partial{{Inputs{}, NovikovSeries(1)}};
        std::size_t built = 0;
        for (const auto& [k1, table] : table_) {
            for (; built < k1 && !partial.empty(); ++built) partial = detail::extend(partial, a, left_prefixes_, cutoff_);
            if (partial.empty()) break;
            detail::collect(detail::extend(partial, e, prefixes_.at(k1), cutoff_), table, out, cutoff_);
        }
        return out;
    }

    /// Energy-`level` matrix of m^{0|1|0}.
    QMat differential(const Rational& level = 0) const {
        QMat d(basis_.size(), QVec(basis_.size(), Rational(0)));
        auto it = table_.find(0);
        if (it == table_.end()) return d;
        for (std::size_t j = 0; j < basis_.size(); ++j) {
            auto row = it->second.find(Inputs{j});
            if (row == it->second.end()) continue;
            auto lv = row->second.find(level);
            if (lv == row->second.end()) continue;
            for (std::size_t i = 0; i < basis_.size(); ++i) d[i][j] = lv->second[i];
        }
        return d;
    }

    friend bool operator==(const GappedBimodule& a, const GappedBimodule& b) {
        return a.left_ == b.left_ && a.right_ == b.right_ && a.basis_ == b.basis_ && a.table_ == b.table_;
    }

private:
    static Inputs encode(const Inputs& left, std::size_t m, const Inputs& right) {
        Inputs key = left;
        key.push_back(m);
        key.insert(key.end(), right.begin(), right.end());
        return key;
    }

    GappedAlgebra left_, right_;
    std::vector<Generator> basis_;
    Rational cutoff_;
    std::map<std::size_t, std::map<Inputs, LevelTable>> table_;  // keyed by left arity
    std::map<std::size_t, std::set<Inputs>> prefixes_;
    std::set<Inputs> left_prefixes_;
};

struct ModuleViolation {
    std::size_t left_arity, right_arity;
    Rational level;
    Inputs left;
    std::size_t module_input;
    Inputs right;
    QVec defect;
};

/// Module relations: every way of applying one inner operation (of A, of M,
/// or of B) to a consecutive window, then the outer module operation.
inline std::vector<ModuleViolation> check_bimodule_relations(const GappedBimodule& m, std::size_t arity_bound = 4) {
    std::vector<ModuleViolation> out;
    const auto& A = m.left();
    const auto& B = m.right();
    std::vector<Chain> ga, gm, gb;
    for (std::size_t i = 0; i < A.dimension(); ++i) ga.push_back(A.generator(i));
    for (std::size_t i = 0; i < m.dimension(); ++i) gm.push_back(m.generator(i));
    for (std::size_t i = 0; i < B.dimension(); ++i) gb.push_back(B.generator(i));
    for (std::size_t k1 = 0; k1 <= arity_bound; ++k1)
        for (std::size_t k2 = 0; k1 + k2 <= arity_bound; ++k2)
            detail::for_each_tuple(A.dimension(), k1, [&](const Inputs& lt) {
                detail::for_each_tuple(B.dimension(), k2, [&](const Inputs& rt) {
                    for (std::size_t mi = 0; mi < m.dimension(); ++mi) {
                        const std::size_t n = k1 + 1 + k2;
                        std::vector<const Chain*> seq;
                        std::vector<int> degrees;
                        for (auto i : lt) {
                            seq.push_back(&ga[i]);
                            degrees.push_back(A.basis()[i].degree);
                        }
                        seq.push_back(&gm[mi]);
                        degrees.push_back(m.basis()[mi].degree);
                        for (auto i : rt) {
                            seq.push_back(&gb[i]);
                            degrees.push_back(B.basis()[i].degree);
                        }
                        auto slice = [&](std::size_t from, std::size_t to) {
                            return std::vector<const Chain*>(seq.begin() + static_cast<long>(from), seq.begin() + static_cast<long>(to));
                        };
                        Chain defect(m.dimension());
                        for (std::size_t s = 0; s <= n; ++s)
                            for (std::size_t width = 0; s + width <= n; ++width) {
                                Chain term(m.dimension());
                                if (s + width <= k1) {
                                    Chain inner = A.apply(slice(s, s + width));
                                    if (inner.is_zero()) continue;
                                    auto left = slice(0, s);
                                    left.push_back(&inner);
                                    auto rest = slice(s + width, k1);
                                    left.insert(left.end(), rest.begin(), rest.end());
                                    term = m.apply(left, *seq[k1], slice(k1 + 1, n));
                                } else if (s <= k1) {
                                    Chain inner = m.apply(slice(s, k1), *seq[k1], slice(k1 + 1, s + width));
                                    if (inner.is_zero()) continue;
                                    term = m.apply(slice(0, s), inner, slice(s + width, n));
                                } else {
                                    Chain inner = B.apply(slice(s, s + width));
                                    if (inner.is_zero()) continue;
                                    auto right = slice(k1 + 1, s);
                                    right.push_back(&inner);
                                    auto rest = slice(s + width, n);
                                    right.insert(right.end(), rest.begin(), rest.end());
                                    term = m.apply(slice(0, k1), *seq[k1], right);
                                }
                                defect = detail::sign_before(degrees, s) > 0 ? defect + term : defect - term;
                            }
                        for (const auto& [level, v] : defect.by_level()) out.push_back({k1, k2, level, lt, mi, rt, v});
                    }
                });
            });
    return out;
}

/// m^{0|1|0}_{(A,a)|M|B}(e) = sum_k m^{k|1|0}(a, ..., a, e).
inline Chain deformed_module_differential(const GappedBimodule& m, const Chain& a, const Chain& e) {
    return m.left_power_sum(a, e);
}

/// Energy window for the module solver: every m^{k|1|0} lands in T^{initial_level} M.
struct ModuleHook {
    Rational initial_level;
};

struct ModuleSolution {
    Chain cochain;   // bounding cochain a for A
    Chain element;   // e with m^{0|1|0}_{(A,a)|M|B}(e) = 0 below the cutoff
    std::optional<ObstructionReport> obstruction;
    std::vector<Rational> levels;

    bool solved() const { return !obstruction; }
};

/// Order-by-order construction of (a, e): at each energy the lowest defect is
/// written as [m^{1|1|0}(a' (x) e_0)] plus an exact term, then a and e are corrected.
inline ModuleSolution solve_module_element(const GappedBimodule& m, std::size_t seed, const ModuleHook& hook) {
    const GappedAlgebra& A = m.left();
    if (hook.initial_level <= 0) throw Error(Errc::InvalidInput, "initial energy must be positive");
    if (seed >= m.dimension()) throw Error(Errc::InvalidInput, "seed is not a module generator");
    if (!curvature(A).is_zero() || !curvature(m.right()).is_zero())
        throw Error(Errc::HypothesisFailed, "algebras must be tautologically unobstructed");
    if (auto why = commutative_dga_defect(A)) throw Error(Errc::HypothesisFailed, "left algebra " + *why);
    // Only actions that can receive a degree-one cochain in every left slot matter.
    for (const auto& t : m.terms()) {
        bool reachable = t.right.empty();
        for (auto i : t.left) reachable = reachable && A.basis()[i].degree == 1;
        if (reachable && t.level < hook.initial_level)
            throw Error(Errc::HypothesisFailed, "(i) m^{" + std::to_string(t.left.size()) + "|1|0} has a term at energy " +
                                                    t.level.get_str() + " below " + hook.initial_level.get_str());
    }
    const std::size_t dim = m.dimension();
    const Chain e0 = m.generator(seed);
    const int seed_degree = m.basis()[seed].degree;
    const QMat dm = m.differential(0);

    // Phi(x) = energy-lambda_0 part of m^{1|1|0}(x (x) e_0) on degree-one cocycles of A.
    std::vector<QVec> phi_columns, phi_vectors;
    for (const auto& z : detail::cocycles(A.differential(0), A.in_degree(1), A.dimension())) {
        Chain image = m.apply({Chain::at_level(z, 0)}, e0);
        phi_columns.push_back(image.part_at(hook.initial_level));
        phi_vectors.push_back(z);
    }
    std::vector<QVec> exact_columns, exact_vectors;
    for (std::size_t j = 0; j < dim; ++j) {
        if (m.basis()[j].degree != seed_degree) continue;
        QVec e(dim, Rational(0));
        e[j] = 1;
        exact_columns.push_back(tropic::apply(dm, e));
        exact_vectors.push_back(e);
    }
    std::vector<std::size_t> target_degree;
    for (std::size_t j = 0; j < dim; ++j)
        if (m.basis()[j].degree == seed_degree + 1) target_degree.push_back(j);
    {
        std::vector<QVec> all = phi_columns;
        all.insert(all.end(), exact_columns.begin(), exact_columns.end());
        std::size_t reached = all.empty() ? 0 : rank(detail::columns_to_matrix(all, dim), all.size());
        if (reached != detail::cocycles(dm, target_degree, dim).size())
            throw Error(Errc::HypothesisFailed, "(ii) H^1 of the algebra does not surject onto the module's first cohomology");
    }

    ModuleSolution out;
    out.cochain = A.zero();
    out.element = e0;
    Exponent last = Exponent(0);
    while (true) {
        Chain defect = deformed_module_differential(m, out.cochain, out.element);
        if (defect.is_zero()) return out;
        Rational level = defect.valuation().value();
        if (!(Exponent(level) > last) && !out.levels.empty())
            throw Error(Errc::HypothesisFailed, "module defect valuation did not increase");
        QVec lowest = defect.part_at(level);
        QVec target = lowest;
        for (auto& x : target) x = -x;
        // Cochain corrections must have positive energy.
        std::vector<QVec> columns = exact_columns;
        std::size_t offset = 0;
        if (level > hook.initial_level) {
            columns.insert(columns.begin(), phi_columns.begin(), phi_columns.end());
            offset = phi_columns.size();
        }
        auto coeffs = columns.empty() ? std::optional<QVec>() : solve(detail::columns_to_matrix(columns, dim), target, columns.size());
        if (!coeffs) {
            out.obstruction = ObstructionReport{level, lowest, "defect class is not in the image"};
            return out;
        }
        QVec da(A.dimension(), Rational(0)), de(dim, Rational(0));
        for (std::size_t r = 0; r < offset; ++r)
            for (std::size_t i = 0; i < A.dimension(); ++i) da[i] += (*coeffs)[r] * phi_vectors[r][i];
        for (std::size_t r = offset; r < coeffs->size(); ++r)
            for (std::size_t i = 0; i < dim; ++i) de[i] += (*coeffs)[r] * exact_vectors[r - offset][i];
        if (offset > 0) out.cochain = (out.cochain + Chain::at_level(da, level - hook.initial_level)).below(A.cutoff());
        out.element = (out.element + Chain::at_level(de, level)).below(m.cutoff());
        out.levels.push_back(level);
        last = Exponent(level);
    }
}

}  // namespace tropic
