#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"
#include "linalg.hpp"
#include "polyhedra.hpp"
#include "rational.hpp"

namespace tropic {

/// min over the support of (a_alpha + <alpha, q>).
class TropicalPolynomial {
public:
    using Term = std::pair<ZVec, Rational>;

    TropicalPolynomial(std::size_t n, const std::vector<Term>& terms) : n_(n) {
        if (terms.empty()) throw Error(Errc::InvalidInput, "tropical polynomial needs a nonempty support");
        for (const auto& [alpha, a] : terms) {
            if (alpha.size() != n) throw Error(Errc::InvalidInput, "exponent dimension mismatch");
            Rational c = a;
            c.canonicalize();
            if (!coeffs_.emplace(alpha, c).second) throw Error(Errc::InvalidInput, "duplicate exponent in support");
        }
    }

    std::size_t ambient_dimension() const { return n_; }
    const std::map<ZVec, Rational>& terms() const { return coeffs_; }
    std::size_t support_size() const { return coeffs_.size(); }

    Rational term_value(const ZVec& alpha, const QVec& q) const { return coeffs_.at(alpha) + dot(alpha, q); }

private:
    std::size_t n_;
    std::map<ZVec, Rational> coeffs_;
};

struct TropicalValue {
    Rational value;
    std::vector<ZVec> argmin;  // in support order
};

inline TropicalValue trop_eval(const TropicalPolynomial& f, const QVec& point) {
    if (point.size() != f.ambient_dimension()) throw Error(Errc::InvalidInput, "point dimension mismatch");
    const QVec q = canonical(point);
    TropicalValue out;
    bool first = true;
    for (const auto& [alpha, a] : f.terms()) {
        Rational v = a + dot(alpha, q);
        if (first || v < out.value) {
            out.value = v;
            out.argmin.clear();
            first = false;
        }
        if (v == out.value) out.argmin.push_back(alpha);
    }
    return out;
}

namespace detail {

/// Region where every exponent in `tied` achieves the minimum.
inline RationalPolyhedron tie_region(const TropicalPolynomial& f, const std::vector<ZVec>& tied) {
    const std::size_t n = f.ambient_dimension();
    RationalPolyhedron p(n);
    const ZVec& base = tied.front();
    const Rational& a0 = f.terms().at(base);
    for (std::size_t i = 1; i < tied.size(); ++i) p.add_equality({tied[i] - base, a0 - f.terms().at(tied[i])});
    for (const auto& [gamma, c] : f.terms())
        if (std::find(tied.begin(), tied.end(), gamma) == tied.end()) p.add_inequality({gamma - base, a0 - c});
    return p;
}

/// Lattice length of the segment spanned by collinear exponents.
inline Integer dual_edge_length(const std::vector<ZVec>& tied) {
    ZVec dir;
    for (std::size_t i = 1; i < tied.size() && dir.empty(); ++i)
        if (tied[i] != tied[0]) dir = primitive(tied[i] - tied[0]);
    Integer lo = 0, hi = 0;
    for (const auto& t : tied) {
        Rational s = dot(t - tied[0], dir) / dot(dir, dir);
        lo = std::min(lo, Integer(s));
        hi = std::max(hi, Integer(s));
    }
    return hi - lo;
}

}  // namespace detail

/// Corner locus of f as a weighted complex of its codimension-one cells.
inline WeightedPolyhedralComplex hypersurface(const TropicalPolynomial& f) {
    const std::size_t n = f.ambient_dimension();
    if (f.support_size() == 1) throw Error(Errc::ConstantPolynomial, "single monomial has empty corner locus");
    std::vector<ZVec> support;
    for (const auto& t : f.terms()) support.push_back(t.first);
    WeightedPolyhedralComplex out(n);
    std::set<std::vector<ZVec>> seen;
    for (std::size_t i = 0; i < support.size(); ++i)
        for (std::size_t j = i + 1; j < support.size(); ++j) {
            RationalPolyhedron pair = detail::tie_region(f, {support[i], support[j]});
            auto hull = affine_hull(pair);
            if (!hull || hull->dimension != static_cast<int>(n) - 1) continue;
            std::vector<ZVec> tied = trop_eval(f, hull->interior_point).argmin;
            if (!seen.insert(tied).second) continue;
            out.add_cell(detail::tie_region(f, tied), detail::dual_edge_length(tied));
        }
    return out;
}

enum class Convention { Min, Max };

inline RationalPolyhedron reflected(const RationalPolyhedron& p) {
    std::vector<Constraint> in, eq;
    for (const auto& c : p.inequalities()) in.push_back({-c.normal, c.rhs});
    for (const auto& c : p.equalities()) eq.push_back({-c.normal, c.rhs});
    return RationalPolyhedron(p.ambient_dimension(), in, eq);
}

// The max corner locus of f is the reflection of the min corner locus of -f.
inline WeightedPolyhedralComplex hypersurface(const TropicalPolynomial& f, Convention convention) {
    if (convention == Convention::Min) return hypersurface(f);
    std::vector<TropicalPolynomial::Term> negated;
    for (const auto& [alpha, a] : f.terms()) negated.push_back({alpha, -a});
    WeightedPolyhedralComplex min_locus = hypersurface(TropicalPolynomial(f.ambient_dimension(), negated));
    WeightedPolyhedralComplex out(f.ambient_dimension());
    for (const auto& cell : min_locus.cells()) out.add_cell(reflected(cell.polyhedron), cell.weight);
    return out;
}

struct CurveEdge {
    std::size_t from = 0, to = 0;
    ZVec direction;  // primitive, points from `from` to `to`
    Integer weight = 1;
};

struct CurveRay {
    std::size_t vertex = 0;
    ZVec direction;  // primitive
    Integer weight = 1;
};

/// Outgoing primitive direction and weight of one half-edge at a vertex.
struct HalfEdge {
    ZVec direction;
    Integer weight;
    bool ray = false;
    std::size_t index = 0;
};

class TropicalCurve {
public:
    TropicalCurve(std::size_t n, std::vector<QVec> vertices, std::vector<CurveEdge> edges, std::vector<CurveRay> rays)
        : n_(n), vertices_(std::move(vertices)), edges_(std::move(edges)), rays_(std::move(rays)) {
        for (auto& v : vertices_) {
            if (v.size() != n_) throw Error(Errc::InvalidInput, "vertex dimension mismatch");
            v = canonical(std::move(v));
        }
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            const auto& e = edges_[i];
            check_direction(e.direction, e.weight, "edge " + std::to_string(i));
            if (e.from >= vertices_.size() || e.to >= vertices_.size())
                throw Error(Errc::InvalidInput, "edge " + std::to_string(i) + " references a missing vertex");
            QVec diff = vertices_[e.to] - vertices_[e.from];
            Rational t = dot(diff, e.direction) / dot(e.direction, e.direction);
            if (t <= 0 || diff != t * to_rational(e.direction))
                throw Error(Errc::InvalidInput,
                            "edge " + std::to_string(i) + " endpoints are not a positive multiple of its direction");
        }
        for (std::size_t i = 0; i < rays_.size(); ++i) {
            check_direction(rays_[i].direction, rays_[i].weight, "ray " + std::to_string(i));
            if (rays_[i].vertex >= vertices_.size())
                throw Error(Errc::InvalidInput, "ray " + std::to_string(i) + " references a missing vertex");
        }
        if (!connected()) throw Error(Errc::InvalidInput, "curve graph is disconnected");
    }

    std::size_t ambient_dimension() const { return n_; }
    const std::vector<QVec>& vertices() const { return vertices_; }
    const std::vector<CurveEdge>& edges() const { return edges_; }
    const std::vector<CurveRay>& rays() const { return rays_; }

    /// t with to - from = t * direction.
    Rational stretch(std::size_t edge) const {
        const auto& e = edges_[edge];
        return dot(vertices_[e.to] - vertices_[e.from], e.direction) / dot(e.direction, e.direction);
    }

    std::vector<HalfEdge> star(std::size_t v) const {
        std::vector<HalfEdge> out;
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            if (edges_[i].from == v) out.push_back({edges_[i].direction, edges_[i].weight, false, i});
            if (edges_[i].to == v) out.push_back({-edges_[i].direction, edges_[i].weight, false, i});
        }
        for (std::size_t i = 0; i < rays_.size(); ++i)
            if (rays_[i].vertex == v) out.push_back({rays_[i].direction, rays_[i].weight, true, i});
        return out;
    }

private:
    void check_direction(const ZVec& d, const Integer& w, const std::string& what) const {
        if (d.size() != n_) throw Error(Errc::InvalidInput, what + " direction dimension mismatch");
        if (!is_primitive(d)) throw Error(Errc::InvalidInput, what + " direction is not primitive");
        if (w <= 0) throw Error(Errc::InvalidInput, what + " weight must be positive");
    }

    bool connected() const {
        if (vertices_.empty()) return true;
        std::vector<bool> seen(vertices_.size(), false);
        std::vector<std::size_t> stack{0};
        seen[0] = true;
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            for (const auto& e : edges_) {
                std::size_t other = e.from == v ? e.to : e.to == v ? e.from : vertices_.size();
                if (other < vertices_.size() && !seen[other]) {
                    seen[other] = true;
                    stack.push_back(other);
                }
            }
        }
        return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
    }

    std::size_t n_;
    std::vector<QVec> vertices_;
    std::vector<CurveEdge> edges_;
    std::vector<CurveRay> rays_;
};

/// Image of a curve under q -> g q + shift with g in GL_n(Z).
inline TropicalCurve transform(const TropicalCurve& c, const ZMat& g, const QVec& shift) {
    const std::size_t n = c.ambient_dimension();
    QMat gq = to_rational(g);
    std::vector<QVec> vs;
    for (const auto& v : c.vertices()) vs.push_back(tropic::apply(gq, v) + shift);
    std::vector<CurveEdge> es = c.edges();
    for (auto& e : es) e.direction = tropic::apply(g, e.direction);
    std::vector<CurveRay> rs = c.rays();
    for (auto& r : rs) r.direction = tropic::apply(g, r.direction);
    return TropicalCurve(n, std::move(vs), std::move(es), std::move(rs));
}

struct CurveVerdict {
    bool ok = true;
    std::vector<std::size_t> offending;  // vertex indices
};

inline ZVec vertex_balance(const TropicalCurve& c, std::size_t v) {
    ZVec sum(c.ambient_dimension(), Integer(0));
    for (const auto& h : c.star(v))
        for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += h.weight * h.direction[j];
    return sum;
}

inline CurveVerdict is_balanced_curve(const TropicalCurve& c) {
    CurveVerdict out;
    for (std::size_t v = 0; v < c.vertices().size(); ++v)
        if (!is_zero(vertex_balance(c, v))) {
            out.ok = false;
            out.offending.push_back(v);
        }
    return out;
}

/// Locally the pair of pants: trivalent, unit weights, v1 + v2 + v3 = 0, {v1, v2} saturated.
inline bool is_smooth_vertex(const TropicalCurve& c, std::size_t v) {
    auto star = c.star(v);
    if (star.size() != 3) return false;
    for (const auto& h : star)
        if (h.weight != 1) return false;
    if (!is_zero(vertex_balance(c, v))) return false;
    return maximal_minor_gcd({star[0].direction, star[1].direction}, c.ambient_dimension()) == 1;
}

inline CurveVerdict is_smooth_curve(const TropicalCurve& c) {
    CurveVerdict out;
    for (std::size_t v = 0; v < c.vertices().size(); ++v)
        if (!is_smooth_vertex(c, v)) {
            out.ok = false;
            out.offending.push_back(v);
        }
    return out;
}

inline long genus(const TropicalCurve& c) {
    if (c.vertices().empty()) return 0;
    return static_cast<long>(c.edges().size()) - static_cast<long>(c.vertices().size()) + 1;
}

class Fan {
public:
    Fan(std::size_t n, std::vector<ZVec> rays) : n_(n), rays_(std::move(rays)) {
        for (std::size_t i = 0; i < rays_.size(); ++i) {
            if (rays_[i].size() != n_ || !is_primitive(rays_[i]))
                throw Error(Errc::InvalidInput, "fan ray " + std::to_string(i) + " is not a primitive vector");
            for (std::size_t j = 0; j < i; ++j)
                if (rays_[i] == rays_[j]) throw Error(Errc::InvalidInput, "fan rays must be distinct");
        }
    }
    std::size_t ambient_dimension() const { return n_; }
    const std::vector<ZVec>& rays() const { return rays_; }

private:
    std::size_t n_;
    std::vector<ZVec> rays_;
};

/// Offending entries are ray indices of the curve.
inline CurveVerdict adapted_to_fan(const TropicalCurve& c, const Fan& fan) {
    CurveVerdict out;
    for (std::size_t i = 0; i < c.rays().size(); ++i) {
        const auto& d = c.rays()[i].direction;
        if (std::find(fan.rays().begin(), fan.rays().end(), d) == fan.rays().end()) {
            out.ok = false;
            out.offending.push_back(i);
        }
    }
    return out;
}

/// A path step: a bounded edge index, or a ray index when `ray` is set.
struct EdgeRef {
    bool ray = false;
    std::size_t index = 0;
};

inline Rational affine_length(const TropicalCurve& c, const std::vector<EdgeRef>& path) {
    for (const auto& step : path) {
        if (step.ray) throw Error(Errc::UnboundedEdgeInPath, "ray " + std::to_string(step.index) + " is unbounded");
        if (step.index >= c.edges().size())
            throw Error(Errc::InvalidInput, "edge " + std::to_string(step.index) + " does not exist");
    }
    Rational total = 0;
    if (path.empty()) return total;
    const auto& edges = c.edges();
    auto touches = [&](std::size_t e, std::size_t v) { return edges[e].from == v || edges[e].to == v; };
    // Walk the first edge toward the endpoint the second edge continues from.
    std::size_t at = edges[path[0].index].from;
    if (path.size() > 1 && !touches(path[1].index, edges[path[0].index].to) && touches(path[1].index, at))
        at = edges[path[0].index].to;
    for (std::size_t k = 0; k < path.size(); ++k) {
        const auto& e = edges[path[k].index];
        if (!touches(path[k].index, at))
            throw Error(Errc::DisconnectedPath, "edge " + std::to_string(path[k].index) + " does not continue the path");
        at = e.from == at ? e.to : e.from;
        total += c.stretch(path[k].index);
    }
    return total;
}

/// {q : <normal, q> = offset}.
struct Hyperplane {
    ZVec normal;
    Rational offset;
    bool contains(const QVec& q) const { return dot(normal, q) == offset; }
};

enum class Spacing { WellSpaced, NotWellSpaced, NotApplicable };

inline const char* spacing_name(Spacing s) {
    switch (s) {
        case Spacing::WellSpaced: return "WellSpaced";
        case Spacing::NotWellSpaced: return "NotWellSpaced";
        case Spacing::NotApplicable: return "NotApplicable";
    }
    return "?";
}

struct ExitPoint {
    std::size_t vertex;
    Rational distance;
};

struct SpacingReport {
    Spacing verdict = Spacing::NotApplicable;
    std::vector<std::size_t> cycle_edges;
    std::vector<ExitPoint> exits;  // sorted by (distance, vertex)
    std::optional<Rational> minimum;
    std::size_t attained = 0;
};

/// Bounded edges that lie on some cycle (non-bridges).
inline std::vector<std::size_t> cycle_edges(const TropicalCurve& c) {
    const std::size_t nv = c.vertices().size();
    const auto& edges = c.edges();
    std::vector<std::size_t> out;
    for (std::size_t skip = 0; skip < edges.size(); ++skip) {
        std::vector<bool> seen(nv, false);
        std::vector<std::size_t> stack{edges[skip].from};
        seen[edges[skip].from] = true;
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            for (std::size_t i = 0; i < edges.size(); ++i) {
                if (i == skip) continue;
                std::size_t other = edges[i].from == v ? edges[i].to : edges[i].to == v ? edges[i].from : nv;
                if (other < nv && !seen[other]) {
                    seen[other] = true;
                    stack.push_back(other);
                }
            }
        }
        if (seen[edges[skip].to]) out.push_back(skip);
    }
    return out;
}

inline SpacingReport well_spaced(const TropicalCurve& c, const Hyperplane& h) {
    if (genus(c) != 1) throw Error(Errc::GenusNotOne, "genus is " + std::to_string(genus(c)));
    if (h.normal.size() != c.ambient_dimension() || is_zero(h.normal))
        throw Error(Errc::InvalidInput, "hyperplane normal must be a nonzero vector of the ambient dimension");
    SpacingReport report;
    report.cycle_edges = cycle_edges(c);
    const auto& verts = c.vertices();
    const auto& edges = c.edges();
    std::vector<bool> in_h(verts.size());
    for (std::size_t v = 0; v < verts.size(); ++v) in_h[v] = h.contains(verts[v]);
    std::vector<std::size_t> sources;
    for (auto e : report.cycle_edges)
        for (auto v : {edges[e].from, edges[e].to}) {
            if (!in_h[v]) return report;
            sources.push_back(v);
        }
    std::sort(sources.begin(), sources.end());
    sources.erase(std::unique(sources.begin(), sources.end()), sources.end());

    // Dijkstra from the cycle over edges inside H, ties broken by vertex index.
    std::vector<std::optional<Rational>> dist(verts.size());
    using Item = std::pair<Rational, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
    for (auto s : sources) {
        dist[s] = Rational(0);
        queue.push({Rational(0), s});
    }
    std::vector<bool> done(verts.size(), false);
    while (!queue.empty()) {
        auto [d, v] = queue.top();
        queue.pop();
        if (done[v]) continue;
        done[v] = true;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (!in_h[edges[i].from] || !in_h[edges[i].to]) continue;
            std::size_t other = edges[i].from == v ? edges[i].to : edges[i].to == v ? edges[i].from : verts.size();
            if (other == verts.size()) continue;
            Rational nd = d + c.stretch(i);
            if (!dist[other] || nd < *dist[other]) {
                dist[other] = nd;
                queue.push({nd, other});
            }
        }
    }
    for (std::size_t v = 0; v < verts.size(); ++v) {
        if (!dist[v]) continue;
        bool leaves = false;
        for (const auto& half : c.star(v)) {
            if (half.ray) {
                leaves = leaves || dot(h.normal, half.direction) != 0;
            } else {
                const auto& e = edges[half.index];
                leaves = leaves || !in_h[e.from == v ? e.to : e.from];
            }
        }
        if (leaves) report.exits.push_back({v, *dist[v]});
    }
    std::sort(report.exits.begin(), report.exits.end(), [](const ExitPoint& a, const ExitPoint& b) {
        return a.distance != b.distance ? a.distance < b.distance : a.vertex < b.vertex;
    });
    if (report.exits.empty()) {
        // The cycle's component never leaves H, so there is no distance to compare.
        report.verdict = Spacing::WellSpaced;
        return report;
    }
    report.minimum = report.exits.front().distance;
    for (const auto& e : report.exits)
        if (e.distance == *report.minimum) ++report.attained;
    report.verdict = report.attained >= 2 ? Spacing::WellSpaced : Spacing::NotWellSpaced;
    return report;
}

struct DeformationRanks {
    long h0_def = 0;
    long h1 = 0;
};

/// Rows form an integer basis of the annihilator of d, i.e. coordinates on R^n / R d.
inline ZMat normal_projection(const ZVec& d) { return integer_kernel({d}, d.size()); }

/// Global sections of the deformation sheaf: vertex displacements in R^n, end
/// displacements in e^perp, agreeing on the normal spaces of shared edges.
inline DeformationRanks deformation_ranks(const TropicalCurve& c) {
    const std::size_t n = c.ambient_dimension();
    const std::size_t nv = c.vertices().size();
    const std::size_t nvars = n * nv + (n - 1) * c.rays().size();
    QMat rows;
    for (const auto& e : c.edges()) {
        for (const auto& w : normal_projection(e.direction)) {
            QVec row(nvars, Rational(0));
            for (std::size_t j = 0; j < n; ++j) {
                row[e.from * n + j] += Rational(w[j]);
                row[e.to * n + j] -= Rational(w[j]);
            }
            rows.push_back(std::move(row));
        }
    }
    for (std::size_t r = 0; r < c.rays().size(); ++r) {
        ZMat proj = normal_projection(c.rays()[r].direction);
        for (std::size_t k = 0; k < proj.size(); ++k) {
            QVec row(nvars, Rational(0));
            for (std::size_t j = 0; j < n; ++j) row[c.rays()[r].vertex * n + j] = Rational(proj[k][j]);
            row[n * nv + (n - 1) * r + k] = -1;
            rows.push_back(std::move(row));
        }
    }
    DeformationRanks out;
    out.h0_def = static_cast<long>(nvars) - static_cast<long>(rank(rows, nvars));
    out.h1 = genus(c);
    return out;
}

/// Reads a one-dimensional complex as a curve. Zero-dimensional cells become
/// vertices, segments bounded edges, rays rays; lines are rejected.
inline TropicalCurve curve_from_complex(const WeightedPolyhedralComplex& cx) {
    const std::size_t n = cx.ambient_dimension();
    std::vector<QVec> vertices;
    auto vertex_at = [&](const QVec& q) {
        for (std::size_t i = 0; i < vertices.size(); ++i)
            if (vertices[i] == q) return i;
        vertices.push_back(q);
        return vertices.size() - 1;
    };
    std::vector<CurveEdge> edges;
    std::vector<CurveRay> rays;
    for (const auto& cell : cx.cells()) {
        if (cell.dimension == 0) {
            vertex_at(affine_hull(cell.polyhedron)->interior_point);
            continue;
        }
        if (cell.dimension != 1) throw Error(Errc::InvalidInput, "complex is not one-dimensional");
        ZVec d = tangent_lattice(cell.polyhedron).basis().front();
        SimplexLP lp = cell.polyhedron.lp();
        LPResult lo = lp.minimize(to_rational(d)), hi = lp.maximize(to_rational(d));
        bool has_lo = lo.status == LPStatus::Optimal, has_hi = hi.status == LPStatus::Optimal;
        if (has_lo && has_hi) {
            edges.push_back({vertex_at(lo.point), vertex_at(hi.point), d, cell.weight});
        } else if (has_lo) {
            rays.push_back({vertex_at(lo.point), d, cell.weight});
        } else if (has_hi) {
            rays.push_back({vertex_at(hi.point), -d, cell.weight});
        } else {
            throw Error(Errc::InvalidInput, "a full line has no vertex to attach to");
        }
    }
    return TropicalCurve(n, std::move(vertices), std::move(edges), std::move(rays));
}

}  // namespace tropic
