// tropic: command-line front end.
//
// Exit codes: 0 success, 1 a computed check failed (or the input is
// semantically invalid), 2 the input could not be read or parsed.

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>
#include <set>

#include "tropic/tropic.hpp"

using namespace tropic;

namespace {

struct Options {
    std::string convention = "min";
    std::string emax_text = "10";
    Rational emax = 10;
    std::string svg_path;
    std::string json_path;
};

class Session {
public:
    explicit Session(std::string command) { report_.command = std::move(command); }

    void check(const std::string& name, bool passed, const std::string& detail = {}) {
        report_.checks.push_back({name, passed, detail});
    }

    // Runs `f`, which returns {passed, detail}, and records its wall time.
    template <class F>
    void timed(const std::string& name, F&& f) {
        auto start = std::chrono::steady_clock::now();
        std::pair<bool, std::string> outcome;
        try {
            outcome = f();
        } catch (const Error& e) {
            outcome = {false, e.what()};
        }
        auto us = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start).count();
        report_.timings_us.emplace_back(name, static_cast<long long>(us));
        check(name, outcome.first, outcome.second);
    }

    void witness(const std::string& name, const std::string& value) { report_.witnesses.emplace_back(name, value); }
    void warn(const std::string& w) { report_.warnings.push_back(w); }
    bool ok() const { return report_.ok(); }

    int finish(const Options& o, std::ostream& out = std::cout) const {
        for (const auto& c : report_.checks)
            out << (c.passed ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
        for (const auto& [name, value] : report_.witnesses) out << name << " = " << value << "\n";
        for (const auto& w : report_.warnings) out << "warning: " << w << "\n";
        out << (report_.ok() ? "ok" : "failed") << "\n";
        if (!o.json_path.empty()) io::write_file(o.json_path, io::emit_report(report_));
        return report_.ok() ? 0 : 1;
    }

private:
    io::ReportDocument report_;
};

std::string vec_text(const QVec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
    return s + ")";
}

std::string vec_text(const ZVec& v) { return vec_text(to_rational(v)); }

std::string index_list(const std::vector<std::size_t>& xs) {
    std::string s;
    for (auto x : xs) s += (s.empty() ? "" : ", ") + std::to_string(x);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto at = s.find(sep, start);
        out.push_back(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
        if (at == std::string_view::npos) return out;
        start = at + 1;
    }
}

Rational option_rational(const std::string& flag, std::string_view text) {
    try {
        return parse_rational(text);
    } catch (const std::invalid_argument& e) {
        throw io::ParseError(0, 0, flag + ": " + e.what());
    }
}

QVec option_vector(const std::string& flag, const std::string& text) {
    QVec out;
    for (auto part : split(text, ',')) out.push_back(option_rational(flag, part));
    return out;
}

unsigned long long seed_from_env() {
    const char* s = std::getenv("TROPIC_SEED");
    if (!s || !*s) return 0;
    try {
        std::size_t used = 0;
        unsigned long long v = std::stoull(s, &used);
        if (used != std::string(s).size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw io::ParseError(0, 0, "TROPIC_SEED must be a nonnegative integer, got '" + std::string(s) + "'");
    }
}

WeightedPolyhedralComplex curve_complex(const TropicalCurve& c) {
    WeightedPolyhedralComplex cx(c.ambient_dimension());
    for (const auto& v : c.vertices()) cx.add_cell(RationalPolyhedron::point(v));
    for (const auto& e : c.edges())
        cx.add_cell(RationalPolyhedron::segment(c.vertices()[e.from], c.vertices()[e.to]), e.weight);
    for (const auto& r : c.rays()) cx.add_cell(RationalPolyhedron::ray(c.vertices()[r.vertex], r.direction), r.weight);
    return cx;
}

std::vector<QVec> vertex_points(const WeightedPolyhedralComplex& cx) {
    std::vector<QVec> out;
    std::vector<RationalPolyhedron> frontier;
    for (const auto& cell : cx.cells()) frontier.push_back(cell.polyhedron);
    std::set<std::string> seen;
    while (!frontier.empty()) {
        RationalPolyhedron p = std::move(frontier.back());
        frontier.pop_back();
        auto hull = affine_hull(p);
        if (!hull || !seen.insert(p.str()).second) continue;
        if (hull->dimension == 0) {
            if (std::find(out.begin(), out.end(), hull->interior_point) == out.end()) out.push_back(hull->interior_point);
            continue;
        }
        for (auto& f : facets(p)) frontier.push_back(std::move(f));
    }
    std::sort(out.begin(), out.end());
    return out;
}

void maybe_svg(const Options& o, Session& s, std::size_t n, const std::function<std::string()>& draw) {
    if (o.svg_path.empty()) return;
    if (n != 2) {
        s.warn("SVG output needs ambient dimension 2; nothing drawn");
        return;
    }
    io::write_file(o.svg_path, draw());
}

int cmd_check(const Options& o, const std::string& path) {
    auto doc = io::parse_curve(io::read_file(path));
    const TropicalCurve& c = doc.curve;
    Session s("check");
    s.timed("polyhedral complex", [&] {
        auto v = validate_complex(curve_complex(c));
        std::string detail;
        for (const auto& [i, j] : v.offending) detail += (detail.empty() ? "cells meet badly: " : ", ") + std::to_string(i) + "/" + std::to_string(j);
        return std::pair{v.valid, detail};
    });
    s.timed("balanced", [&] {
        auto v = is_balanced_curve(c);
        std::string detail;
        for (auto i : v.offending)
            detail += (detail.empty() ? "" : "; ") + std::string("vertex ") + std::to_string(i) + " defect " + vec_text(vertex_balance(c, i));
        return std::pair{v.ok, detail};
    });
    s.timed("smooth", [&] {
        auto v = is_smooth_curve(c);
        return std::pair{v.ok, v.ok ? std::string() : "not a smooth pair of pants at vertices " + index_list(v.offending)};
    });
    if (doc.fan) {
        s.timed("adapted to fan", [&] {
            auto v = adapted_to_fan(c, *doc.fan);
            return std::pair{v.ok, v.ok ? std::string() : "rays outside the fan: " + index_list(v.offending)};
        });
    }
    s.witness("genus", std::to_string(genus(c)));
    maybe_svg(o, s, c.ambient_dimension(), [&] { return io::svg(c); });
    return s.finish(o);
}

int cmd_hypersurface(const Options& o, const std::string& path) {
    auto f = io::parse_polynomial(io::read_file(path));
    const std::size_t n = f.ambient_dimension();
    if (n > 3) throw Error(Errc::InvalidInput, "complex output supports ambient dimension at most 3");
    WeightedPolyhedralComplex hyp = hypersurface(f, o.convention == "max" ? Convention::Max : Convention::Min);
    Session s("hypersurface");
    s.timed("balanced", [&] {
        auto v = balancing_check(hyp);
        std::string detail;
        for (const auto& fd : v.facets)
            if (!is_zero(fd.defect)) detail += (detail.empty() ? "" : "; ") + fd.facet.str() + " defect " + vec_text(fd.defect);
        return std::pair{v.balanced, detail};
    });
    s.witness("convention", o.convention);
    s.witness("cells", std::to_string(hyp.cells().size()));
    if (n == 2) {
        try {
            TropicalCurve curve = curve_from_complex(hyp);
            for (const auto& v : curve.vertices()) s.witness("vertex", vec_text(v));
            for (const auto& e : curve.edges())
                s.witness("edge", vec_text(curve.vertices()[e.from]) + " -> " + vec_text(curve.vertices()[e.to]) + " weight " + e.weight.get_str());
            for (const auto& r : curve.rays())
                s.witness("ray", vec_text(curve.vertices()[r.vertex]) + " direction " + vec_text(r.direction) + " weight " + r.weight.get_str());
        } catch (const Error&) {
            for (const auto& cell : hyp.cells()) s.witness("cell", "weight " + cell.weight.get_str() + ": " + cell.polyhedron.str());
        }
    } else {
        for (const auto& cell : hyp.cells()) s.witness("cell", "weight " + cell.weight.get_str() + ": " + cell.polyhedron.str());
    }
    maybe_svg(o, s, n, [&] { return io::svg(hyp); });
    std::cout << io::emit_complex(hyp);
    return s.finish(o, std::cerr);
}

int cmd_realize(const Options& o, const std::string& path, std::size_t samples, bool at_vertices) {
    auto f = io::parse_polynomial(io::read_file(path));
    Session s("realize");
    if (o.convention != "min") s.warn("valuations follow the min convention; --convention is ignored here");
    if (o.emax <= 0) s.warn("E_max <= 0, so every residual bound holds trivially");
    const auto lifted = lift_coefficients(f, {}, o.emax);
    std::mt19937_64 rng(seed_from_env());
    std::vector<QVec> points = at_vertices ? vertex_points(hypersurface(f)) : sample_facet_points(f, samples, rng);
    if (points.empty()) s.warn("no sample points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const QVec& q = points[i];
        s.timed("sample " + std::to_string(i), [&] {
            Realization r = realize_point(lifted, q);
            KapranovVerdict k = kapranov_check(lifted, r.point);
            s.witness("z" + std::to_string(r.solved_coordinate + 1) + " at " + vec_text(q),
                      r.point.coordinates()[r.solved_coordinate].str());
            bool passed = k.ok && !(k.residual < Exponent(o.emax));
            return std::pair{passed, "q = " + vec_text(q) + ", residual valuation " + k.residual.str()};
        });
    }
    return s.finish(o);
}

int cmd_pipeline(const Options& o, const std::string& path, std::optional<std::size_t> end, std::optional<long> expected_dim) {
    auto doc = io::parse_curve(io::read_file(path));
    const TropicalCurve& c = doc.curve;
    Session s("pipeline");
    bool smooth = is_smooth_curve(c).ok;
    bool balanced = is_balanced_curve(c).ok;
    s.check("balanced", balanced);
    s.check("smooth", smooth, smooth ? "" : "vertices " + index_list(is_smooth_curve(c).offending));
    if (!smooth || !balanced) {
        s.warn("the lift model needs a smooth balanced curve; pipeline stopped");
        return s.finish(o);
    }
    const long g = genus(c);
    s.witness("genus", std::to_string(g));
    LiftModel model = build_lift_model(c);
    std::string betti;
    for (long b : lift_cohomology(model)) betti += (betti.empty() ? "" : ",") + std::to_string(b);
    s.witness("betti", "(" + betti + ")");

    std::vector<std::size_t> ends;
    if (end) {
        if (*end >= c.rays().size()) throw Error(Errc::NotAnEnd, "curve has " + std::to_string(c.rays().size()) + " ends");
        ends.push_back(*end);
    } else {
        for (std::size_t f = 0; f < c.rays().size(); ++f) ends.push_back(f);
    }
    std::string criterion = "skipped";
    if (g == 0) {
        bool all = true;
        for (auto f : ends) {
            const std::string tag = "end " + std::to_string(f) + ": ";
            s.timed(tag + "H^1 surjects", [&] { return std::pair{check_h1_surjection(model, f), std::string()}; });
            s.timed(tag + "H^2 injects", [&] { return std::pair{check_h2_injection(model, f), std::string()}; });
            auto v = unobstructedness_criterion(model, f);
            for (const auto& w : v.warnings) s.warn(tag + w);
            s.check(tag + "unobstructed", v.unobstructed);
            all = all && v.unobstructed;
        }
        criterion = all ? "pass" : "fail";
    } else {
        s.warn("genus " + std::to_string(g) + ": lift criteria skipped");
        if (g == 1) s.warn("genus one: try `tropic wellspaced` for the well-spacedness test");
    }
    bool template_ok = true;
    for (std::size_t v = 0; v < model.pieces.size(); ++v) template_ok = template_ok && pants_relation_holds(model, v);
    s.check("support template", template_ok, "every vertex is a pair of pants in adapted coordinates");

    auto ranks = deformation_ranks(c);
    const long n = static_cast<long>(c.ambient_dimension());
    const long expected = expected_dim ? *expected_dim : (n - 3) * (1 - g) + static_cast<long>(c.rays().size());
    s.witness("h0_def", std::to_string(ranks.h0_def));
    s.witness("expected dimension", std::to_string(expected));
    s.check("deformation space", ranks.h0_def >= expected,
            "h0_def = " + std::to_string(ranks.h0_def) + ", expected " + std::to_string(expected));
    if (ranks.h0_def > expected) s.warn("superabundant: h0_def exceeds the expected dimension");

    s.witness("verdict chain", std::string("geometric: pass -> unobstructed-criterion: ") + criterion +
                                   " -> support-template: " + (template_ok ? "pass" : "fail"));
    s.witness("assumptions", "Floer-analytic and homological mirror symmetry steps are assumed, not computed");
    return s.finish(o);
}

int cmd_ainf(const Options& o, const std::string& action, const std::string& path, const std::string& mode_text,
             const std::string& out_path) {
    const std::string text = io::read_file(path);
    Session s("ainf " + action);
    if (io::is_bimodule_text(text)) {
        auto doc = io::parse_bimodule(text);
        const GappedBimodule& m = doc.module;
        if (action == "check") {
            s.timed("left relations", [&] { return std::pair{check_relations(m.left()).empty(), std::string()}; });
            s.timed("right relations", [&] { return std::pair{check_relations(m.right()).empty(), std::string()}; });
            s.timed("bimodule relations", [&] {
                auto v = check_bimodule_relations(m);
                return std::pair{v.empty(), v.empty() ? std::string() : std::to_string(v.size()) + " violations"};
            });
        } else if (action == "solve") {
            if (!doc.seed || !doc.hook) throw Error(Errc::InvalidInput, "module solving needs seed and hook lines");
            s.timed("module element", [&] {
                auto sol = solve_module_element(m, *doc.seed, {*doc.hook});
                if (!sol.solved())
                    return std::pair{false, "obstruction at level " + sol.obstruction->level.get_str() + ": " + sol.obstruction->reason};
                s.witness("b", sol.cochain.str(m.left().basis()));
                s.witness("e", sol.element.str(m.basis()));
                return std::pair{true, std::string()};
            });
        } else {
            throw Error(Errc::InvalidInput, "bimodule files support check and solve");
        }
        return s.finish(o);
    }
    auto doc = io::parse_algebra(text);
    const GappedAlgebra& a = doc.algebra;
    auto report_violations = [](const std::vector<RelationViolation>& v) {
        if (v.empty()) return std::string();
        const auto& first = v.front();
        std::string inputs;
        for (auto i : first.inputs) inputs += (inputs.empty() ? "" : ",") + std::to_string(i);
        return std::to_string(v.size()) + " violations, first at arity " + std::to_string(first.arity) + " level " +
               first.level.get_str() + " inputs (" + inputs + ")";
    };
    if (action == "check") {
        s.timed("relations", [&] {
            auto v = check_relations(a);
            return std::pair{v.empty(), report_violations(v)};
        });
        s.witness("curvature", curvature(a).str(a.basis()));
    } else if (action == "deform") {
        if (!doc.cochain) throw Error(Errc::InvalidInput, "deform needs a cochain line");
        GappedAlgebra deformed = deform(a, DeformingCochain(a, *doc.cochain));
        s.timed("deformed relations", [&] {
            auto v = check_relations(deformed);
            return std::pair{v.empty(), report_violations(v)};
        });
        s.witness("curvature", curvature(deformed).str(a.basis()));
        if (!out_path.empty()) io::write_file(out_path, io::emit_algebra({deformed, doc.ideal, std::nullopt}));
    } else {
        SolverMode mode = mode_text == "generic" ? SolverMode::Generic
                          : mode_text == "lemma" ? SolverMode::LemmaB
                                                 : doc.ideal ? SolverMode::LemmaB : SolverMode::Generic;
        Submodule ideal = doc.ideal ? *doc.ideal : Submodule::everything(a.dimension());
        s.witness("mode", mode == SolverMode::LemmaB ? "lemma" : "generic");
        s.timed("bounding cochain", [&] {
            auto sol = solve_bounding_cochain(a, ideal, mode);
            std::string levels;
            for (std::size_t i = 0; i < sol.levels.size(); ++i)
                levels += (levels.empty() ? "" : ", ") + sol.levels[i].get_str() + " -> " + sol.curvature_after[i].str();
            if (!levels.empty()) s.witness("curvature valuation by level", levels);
            if (!sol.solved()) {
                s.witness("obstruction level", sol.obstruction->level.get_str());
                s.witness("obstruction class", Chain::at_level(sol.obstruction->defect, sol.obstruction->level).str(a.basis()));
                return std::pair{false, sol.obstruction->reason};
            }
            s.witness("b", sol.cochain.str(a.basis()));
            return std::pair{true, std::string()};
        });
    }
    return s.finish(o);
}

int cmd_wellspaced(const Options& o, const std::string& path, const std::string& normal_text, const std::string& offset_text) {
    auto doc = io::parse_curve(io::read_file(path));
    const TropicalCurve& c = doc.curve;
    const std::size_t n = c.ambient_dimension();
    ZVec normal(n, Integer(0));
    normal[n - 1] = 1;
    if (!normal_text.empty()) {
        QVec q = option_vector("--normal", normal_text);
        normal.clear();
        for (const auto& x : q) {
            if (x.get_den() != 1) throw io::ParseError(0, 0, "--normal: entries must be integers");
            normal.push_back(x.get_num());
        }
    }
    Hyperplane h{normal, offset_text.empty() ? Rational(0) : option_rational("--offset", offset_text)};
    Session s("wellspaced");
    s.timed("well-spaced", [&] {
        auto r = well_spaced(c, h);
        for (const auto& e : r.exits) s.witness("exit", "vertex " + std::to_string(e.vertex) + " at distance " + e.distance.get_str());
        std::string detail = spacing_name(r.verdict);
        if (r.minimum) detail += ", minimum " + r.minimum->get_str() + " attained " + std::to_string(r.attained) + " times";
        return std::pair{r.verdict == Spacing::WellSpaced, detail};
    });
    return s.finish(o);
}

int cmd_support(const Options& o, const std::string& kind_text, std::size_t n, std::size_t k, const std::string& point_text,
                const std::string& holonomy_text) {
    QVec q = option_vector("--point", point_text);
    SupportKind kind = PantsKind{};
    if (kind_text == "conormal") {
        if (k > n) throw Error(Errc::InvalidInput, "need k <= n");
        kind = ConormalKind{n, k};
    }
    const std::size_t dim = kind_text == "conormal" ? n : 2;
    if (q.size() != dim) throw Error(Errc::InvalidInput, "--point needs " + std::to_string(dim) + " coordinates");
    std::vector<UnitaryElement> holonomies;
    if (holonomy_text.empty()) {
        holonomies.assign(dim, UnitaryElement(NovikovSeries(1)));
    } else {
        for (auto part : split(holonomy_text, ';')) {
            NovikovSeries series;
            try {
                series = NovikovSeries::parse(part);
            } catch (const std::invalid_argument& e) {
                throw io::ParseError(0, 0, std::string("--holonomy: ") + e.what());
            }
            holonomies.emplace_back(series);
        }
    }
    if (holonomies.size() != dim) throw Error(Errc::InvalidInput, "--holonomy needs " + std::to_string(dim) + " entries");
    Session s("support");
    auto v = a_support_query(kind, FiberPoint{q, LocalSystem{holonomies}}, o.emax);
    s.witness("verdict", v.in_support ? "InSupport" : "NotInSupport");
    s.witness("reason", v.reason);
    if (v.witness)
        for (std::size_t i = 0; i < v.witness->dimension(); ++i)
            s.witness("witness u" + std::to_string(i + 1), v.witness->holonomies[i].series().str());
    return s.finish(o);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact tropical curves, realizations, Lagrangian lift topology and gapped A-infinity algebras"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--convention", o.convention, "tropical convention for hypersurfaces")
        ->check(CLI::IsMember({"min", "max"}));
    app.add_option("--emax", o.emax_text, "energy cutoff E_max (rational)");
    app.add_option("--svg", o.svg_path, "write a planar drawing");
    app.add_option("--json", o.json_path, "write the machine-readable report");

    std::string path;
    auto* check = app.add_subcommand("check", "validate a curve document");
    check->add_option("curve", path, "curve JSON")->required();

    auto* hyper = app.add_subcommand("hypersurface", "corner locus of a polynomial; complex JSON on stdout");
    hyper->add_option("polynomial", path, "polynomial JSON")->required();

    std::size_t samples = 10;
    bool at_vertices = false;
    auto* realize = app.add_subcommand("realize", "lift sampled points of the hypersurface and check them");
    realize->add_option("polynomial", path, "polynomial JSON")->required();
    realize->add_option("--samples", samples, "facet samples");
    realize->add_flag("--at-vertices", at_vertices, "sample vertices instead of facets");

    std::optional<std::size_t> end;
    std::optional<long> expected_dim;
    auto* pipeline = app.add_subcommand("pipeline", "lift topology and deformation checks for a smooth curve");
    pipeline->add_option("curve", path, "curve JSON")->required();
    pipeline->add_option("--end", end, "only this end");
    pipeline->add_option("--expected-dim", expected_dim, "expected deformation dimension");

    std::string action, mode = "auto", out_path;
    auto* ainf = app.add_subcommand("ainf", "gapped A-infinity algebras and bimodules");
    ainf->add_option("action", action, "check | deform | solve")->required()->check(CLI::IsMember({"check", "deform", "solve"}));
    ainf->add_option("file", path, "algebra text file")->required();
    ainf->add_option("--mode", mode, "solver mode")->check(CLI::IsMember({"auto", "lemma", "generic"}));
    ainf->add_option("--out", out_path, "write the deformed algebra");

    std::string normal, offset;
    auto* spaced = app.add_subcommand("wellspaced", "well-spacedness of a genus-one curve");
    spaced->add_option("curve", path, "curve JSON")->required();
    spaced->add_option("--normal", normal, "hyperplane normal, comma separated");
    spaced->add_option("--offset", offset, "hyperplane offset");

    std::string kind, point, holonomy;
    std::size_t dim_n = 2, dim_k = 1;
    auto* support = app.add_subcommand("support", "A-support query at a fiber point");
    support->add_option("kind", kind, "conormal | pants")->required()->check(CLI::IsMember({"conormal", "pants"}));
    support->add_option("--point", point, "q, comma separated")->required();
    support->add_option("--holonomy", holonomy, "unitary holonomies, ';' separated");
    support->add_option("--n", dim_n, "ambient dimension (conormal)");
    support->add_option("--k", dim_k, "subspace dimension (conormal)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        o.emax = option_rational("--emax", o.emax_text);
        if (check->parsed()) return cmd_check(o, path);
        if (hyper->parsed()) return cmd_hypersurface(o, path);
        if (realize->parsed()) return cmd_realize(o, path, samples, at_vertices);
        if (pipeline->parsed()) return cmd_pipeline(o, path, end, expected_dim);
        if (ainf->parsed()) return cmd_ainf(o, action, path, mode, out_path);
        if (spaced->parsed()) return cmd_wellspaced(o, path, normal, offset);
        if (support->parsed()) return cmd_support(o, kind, dim_n, dim_k, point, holonomy);
    } catch (const io::ParseError& e) {
        std::cerr << (e.line() ? path + ":" : "") << e.what() << "\n";
        return 2;
    } catch (const io::IoError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
