#include <fstream>
#include <json.hpp>
#include <sstream>

#include "tropic/io.hpp"

namespace tropic::io {

using Json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    if (in.bad()) throw IoError("cannot read '" + path + "'");
    return os.str();
}

void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << contents;
    if (!out) throw IoError("cannot write '" + path + "'");
}

namespace {

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

// nlohmann does not keep node positions, so errors inside a well-formed
// document are pinned to the first occurrence of the offending token.
class Source {
public:
    explicit Source(std::string_view text) : text_(text) {}

    Json parse() const {
        try {
            return Json::parse(text_);
        } catch (const nlohmann::json::parse_error& e) {
            auto [line, column] = line_column(text_, e.byte == 0 ? 0 : e.byte - 1);
            std::string what = e.what();
            auto colon = what.find("syntax error");
            throw ParseError(line, column, colon == std::string::npos ? what : what.substr(colon));
        }
    }

    [[noreturn]] void fail(const std::string& path, const std::string& why, const Json* value = nullptr,
                           std::string_view key = {}) const {
        std::size_t at = std::string_view::npos;
        if (value && (value->is_string() || value->is_number() || value->is_boolean() || value->is_null()))
            at = text_.find(value->dump());
        if (at == std::string_view::npos && !key.empty()) at = text_.find("\"" + std::string(key) + "\"");
        if (at == std::string_view::npos) throw ParseError(0, 0, path + ": " + why);
        auto [line, column] = line_column(text_, at);
        throw ParseError(line, column, path + ": " + why);
    }

    const Json& field(const Json& obj, const std::string& key, const std::string& path) const {
        if (!obj.is_object()) fail(path, "expected an object");
        auto it = obj.find(key);
        if (it == obj.end()) fail(path, "missing field '" + key + "'");
        return *it;
    }

    const Json& array(const Json& v, const std::string& path, std::string_view key) const {
        if (!v.is_array()) fail(path, "expected an array", &v, key);
        return v;
    }

    Rational rational(const Json& v, const std::string& path) const {
        if (!v.is_string()) fail(path, "rationals are written as strings \"p/q\"", &v);
        try {
            return parse_rational(v.get<std::string>());
        } catch (const std::invalid_argument& e) {
            fail(path, e.what(), &v);
        }
    }

    long long integer(const Json& v, const std::string& path) const {
        if (!v.is_number_integer()) fail(path, "expected an integer", &v);
        return v.get<long long>();
    }

    std::size_t index(const Json& v, const std::string& path) const {
        long long i = integer(v, path);
        if (i < 0) fail(path, "expected a nonnegative index", &v);
        return static_cast<std::size_t>(i);
    }

    ZVec int_vector(const Json& v, const std::string& path, std::size_t n) const {
        array(v, path, {});
        if (v.size() != n) fail(path, "expected " + std::to_string(n) + " entries", &v);
        ZVec out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(Integer(static_cast<long>(integer(v[i], path + "[" + std::to_string(i) + "]"))));
        return out;
    }

    QVec rational_vector(const Json& v, const std::string& path, std::size_t n) const {
        array(v, path, {});
        if (v.size() != n) fail(path, "expected " + std::to_string(n) + " entries", &v);
        QVec out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(rational(v[i], path + "[" + std::to_string(i) + "]"));
        return out;
    }

    std::size_t dimension(const Json& doc) const {
        const Json& n = field(doc, "ambient_dimension", "document");
        long long d = integer(n, "ambient_dimension");
        if (d < 1) fail("ambient_dimension", "must be positive", &n);
        return static_cast<std::size_t>(d);
    }

    // Semantic rejections from the domain constructors, pinned to a section key.
    template <class F>
    auto build(std::string_view key, F&& make) const {
        try {
            return make();
        } catch (const Error& e) {
            fail(std::string(key), e.what(), nullptr, key);
        } catch (const std::invalid_argument& e) {
            fail(std::string(key), e.what(), nullptr, key);
        }
    }

private:
    std::string_view text_;
};

Json integers(const ZVec& v) {
    Json out = Json::array();
    for (const auto& x : v) {
        if (!x.fits_slong_p()) throw Error(Errc::InvalidInput, "integer entry too large for the document format");
        out.push_back(x.get_si());
    }
    return out;
}

Json rationals(const QVec& v) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(x.get_str());
    return out;
}

long long small(const Integer& z) {
    if (!z.fits_slong_p()) throw Error(Errc::InvalidInput, "integer entry too large for the document format");
    return z.get_si();
}

std::string finish(const Json& doc) { return doc.dump(2) + "\n"; }

Json constraints(const std::vector<Constraint>& cs) {
    Json out = Json::array();
    for (const auto& c : cs) {
        Json row;
        row["normal"] = integers(c.normal);
        row["rhs"] = c.rhs.get_str();
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace

CurveDocument parse_curve(std::string_view text) {
    Source src(text);
    Json doc = src.parse();
    const std::size_t n = src.dimension(doc);
    std::vector<QVec> vertices;
    const Json& vs = src.array(src.field(doc, "vertices", "document"), "vertices", "vertices");
    for (std::size_t i = 0; i < vs.size(); ++i)
        vertices.push_back(src.rational_vector(vs[i], "vertices[" + std::to_string(i) + "]", n));
    std::vector<CurveEdge> edges;
    std::vector<CurveRay> rays;
    const Json& es = src.array(src.field(doc, "edges", "document"), "edges", "edges");
    for (std::size_t i = 0; i < es.size(); ++i) {
        const std::string path = "edges[" + std::to_string(i) + "]";
        const Json& e = es[i];
        ZVec direction = src.int_vector(src.field(e, "direction", path), path + ".direction", n);
        Integer weight = e.is_object() && e.contains("weight") ? Integer(static_cast<long>(src.integer(e["weight"], path + ".weight"))) : Integer(1);
        if (e.contains("vertex")) {
            if (e.contains("from") || e.contains("to")) src.fail(path, "an edge is either bounded (from, to) or a ray (vertex)", nullptr, "vertex");
            rays.push_back({src.index(e["vertex"], path + ".vertex"), direction, weight});
        } else {
            edges.push_back({src.index(src.field(e, "from", path), path + ".from"),
                             src.index(src.field(e, "to", path), path + ".to"), direction, weight});
        }
    }
    TropicalCurve curve = src.build("edges", [&] { return TropicalCurve(n, vertices, edges, rays); });
    CurveDocument out{std::move(curve), std::nullopt, "{}"};
    if (doc.contains("fan")) {
        const Json& fs = src.array(doc["fan"], "fan", "fan");
        std::vector<ZVec> fan_rays;
        for (std::size_t i = 0; i < fs.size(); ++i) fan_rays.push_back(src.int_vector(fs[i], "fan[" + std::to_string(i) + "]", n));
        out.fan = src.build("fan", [&] { return Fan(n, fan_rays); });
    }
    if (doc.contains("metadata")) {
        if (!doc["metadata"].is_object()) src.fail("metadata", "expected an object", nullptr, "metadata");
        out.metadata = doc["metadata"].dump();
    }
    for (const auto& [key, value] : doc.items())
        if (key != "ambient_dimension" && key != "vertices" && key != "edges" && key != "fan" && key != "metadata")
            src.fail(key, "unknown field", nullptr, key);
    return out;
}

std::string emit_curve(const CurveDocument& d) {
    const TropicalCurve& c = d.curve;
    Json doc;
    doc["ambient_dimension"] = c.ambient_dimension();
    doc["vertices"] = Json::array();
    for (const auto& v : c.vertices()) doc["vertices"].push_back(rationals(v));
    doc["edges"] = Json::array();
    for (const auto& e : c.edges()) {
        Json j;
        j["from"] = e.from;
        j["to"] = e.to;
        j["direction"] = integers(e.direction);
        j["weight"] = small(e.weight);
        doc["edges"].push_back(std::move(j));
    }
    for (const auto& r : c.rays()) {
        Json j;
        j["vertex"] = r.vertex;
        j["direction"] = integers(r.direction);
        j["weight"] = small(r.weight);
        doc["edges"].push_back(std::move(j));
    }
    if (d.fan) {
        doc["fan"] = Json::array();
        for (const auto& r : d.fan->rays()) doc["fan"].push_back(integers(r));
    }
    Json meta = Json::parse(d.metadata);
    if (!meta.empty()) doc["metadata"] = std::move(meta);
    return finish(doc);
}

TropicalPolynomial parse_polynomial(std::string_view text) {
    Source src(text);
    Json doc = src.parse();
    const std::size_t n = src.dimension(doc);
    const Json& ts = src.array(src.field(doc, "terms", "document"), "terms", "terms");
    std::vector<TropicalPolynomial::Term> terms;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const std::string path = "terms[" + std::to_string(i) + "]";
        terms.push_back({src.int_vector(src.field(ts[i], "exponent", path), path + ".exponent", n),
                         src.rational(src.field(ts[i], "coefficient", path), path + ".coefficient")});
    }
    for (const auto& [key, value] : doc.items())
        if (key != "ambient_dimension" && key != "terms") src.fail(key, "unknown field", nullptr, key);
    return src.build("terms", [&] { return TropicalPolynomial(n, terms); });
}

std::string emit_polynomial(const TropicalPolynomial& f) {
    Json doc;
    doc["ambient_dimension"] = f.ambient_dimension();
    doc["terms"] = Json::array();
    for (const auto& [alpha, a] : f.terms()) {
        Json t;
        t["exponent"] = integers(alpha);
        t["coefficient"] = a.get_str();
        doc["terms"].push_back(std::move(t));
    }
    return finish(doc);
}

WeightedPolyhedralComplex parse_complex(std::string_view text) {
    Source src(text);
    Json doc = src.parse();
    const std::size_t n = src.dimension(doc);
    WeightedPolyhedralComplex out(n);
    const Json& cs = src.array(src.field(doc, "cells", "document"), "cells", "cells");
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const std::string path = "cells[" + std::to_string(i) + "]";
        auto read = [&](const char* key) {
            std::vector<Constraint> out;
            const Json& rows = src.array(src.field(cs[i], key, path), path + "." + key, key);
            for (std::size_t r = 0; r < rows.size(); ++r) {
                const std::string rp = path + "." + key + "[" + std::to_string(r) + "]";
                out.push_back({src.int_vector(src.field(rows[r], "normal", rp), rp + ".normal", n),
                               src.rational(src.field(rows[r], "rhs", rp), rp + ".rhs")});
            }
            return out;
        };
        auto inequalities = read("inequalities");
        auto equalities = read("equalities");
        Integer weight(static_cast<long>(src.integer(src.field(cs[i], "weight", path), path + ".weight")));
        long long declared = src.integer(src.field(cs[i], "dimension", path), path + ".dimension");
        src.build("cells", [&] {
            out.add_cell(RationalPolyhedron(n, inequalities, equalities), weight);
            return 0;
        });
        if (out.cells().back().dimension != declared)
            src.fail(path + ".dimension", "declared " + std::to_string(declared) + " but the cell has dimension " +
                                              std::to_string(out.cells().back().dimension),
                     nullptr, "dimension");
    }
    return out;
}

std::string emit_complex(const WeightedPolyhedralComplex& c) {
    Json doc;
    doc["ambient_dimension"] = c.ambient_dimension();
    doc["cells"] = Json::array();
    for (const auto& cell : c.cells()) {
        Json j;
        j["dimension"] = cell.dimension;
        j["weight"] = small(cell.weight);
        j["equalities"] = constraints(cell.polyhedron.equalities());
        j["inequalities"] = constraints(cell.polyhedron.inequalities());
        doc["cells"].push_back(std::move(j));
    }
    return finish(doc);
}

ReportDocument parse_report(std::string_view text) {
    Source src(text);
    Json doc = src.parse();
    auto string_at = [&](const Json& v, const std::string& path) {
        if (!v.is_string()) src.fail(path, "expected a string", &v);
        return v.get<std::string>();
    };
    ReportDocument r;
    r.command = string_at(src.field(doc, "command", "document"), "command");
    const Json& checks = src.array(src.field(doc, "checks", "document"), "checks", "checks");
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const std::string path = "checks[" + std::to_string(i) + "]";
        const Json& passed = src.field(checks[i], "passed", path);
        if (!passed.is_boolean()) src.fail(path + ".passed", "expected a boolean", &passed);
        r.checks.push_back({string_at(src.field(checks[i], "name", path), path + ".name"), passed.get<bool>(),
                            string_at(src.field(checks[i], "detail", path), path + ".detail")});
    }
    const Json& ws = src.array(src.field(doc, "witnesses", "document"), "witnesses", "witnesses");
    for (std::size_t i = 0; i < ws.size(); ++i) {
        const std::string path = "witnesses[" + std::to_string(i) + "]";
        r.witnesses.emplace_back(string_at(src.field(ws[i], "name", path), path + ".name"),
                                 string_at(src.field(ws[i], "value", path), path + ".value"));
    }
    const Json& warns = src.array(src.field(doc, "warnings", "document"), "warnings", "warnings");
    for (std::size_t i = 0; i < warns.size(); ++i) r.warnings.push_back(string_at(warns[i], "warnings[" + std::to_string(i) + "]"));
    const Json& ts = src.array(src.field(doc, "timings_us", "document"), "timings_us", "timings_us");
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const std::string path = "timings_us[" + std::to_string(i) + "]";
        r.timings_us.emplace_back(string_at(src.field(ts[i], "name", path), path + ".name"),
                                  src.integer(src.field(ts[i], "value", path), path + ".value"));
    }
    const Json& ok = src.field(doc, "ok", "document");
    if (!ok.is_boolean() || ok.get<bool>() != r.ok()) src.fail("ok", "does not match the checks", nullptr, "ok");
    return r;
}

std::string emit_report(const ReportDocument& r) {
    Json doc;
    doc["command"] = r.command;
    doc["ok"] = r.ok();
    doc["checks"] = Json::array();
    for (const auto& c : r.checks) {
        Json j;
        j["name"] = c.name;
        j["passed"] = c.passed;
        j["detail"] = c.detail;
        doc["checks"].push_back(std::move(j));
    }
    doc["witnesses"] = Json::array();
    for (const auto& [name, value] : r.witnesses) doc["witnesses"].push_back(Json{{"name", name}, {"value", value}});
    doc["warnings"] = r.warnings;
    doc["timings_us"] = Json::array();
    for (const auto& [name, value] : r.timings_us) doc["timings_us"].push_back(Json{{"name", name}, {"value", value}});
    return finish(doc);
}

}  // namespace tropic::io
