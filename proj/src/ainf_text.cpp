#include <sstream>

#include "tropic/io.hpp"

// Line-based format:
//
//   emax 10
//   basis 1:0 x:1 f:2
//   ideal x f                 (or "ideal filtered")
//   cochain x: -1*T^1
//   m[0](1, x) = 1*x
//   m[1]() = 1*f
//
// Bimodules split the file into [left], [right] and [module] sections, the
// last one holding "seed", "hook" and lines n[level](l1, l2 | m | r1) = ...

namespace tropic::io {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool valid_name(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c <= ' ' || std::string_view("()[],|:;*+=#").find(c) != std::string_view::npos) return false;
    return true;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t at = s.find(sep, start);
        out.push_back(s.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
        if (at == std::string_view::npos) return out;
        start = at + 1;
    }
}

std::vector<std::string_view> words(std::string_view s) {
    std::vector<std::string_view> out;
    for (auto w : split(s, ' '))
        if (!trim(w).empty()) out.push_back(trim(w));
    return out;
}

struct Line {
    std::size_t number;
    std::string_view full;  // untrimmed, for column computation
    std::string_view text;  // trimmed
};

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {
        std::size_t number = 0;
        for (auto raw : split(text, '\n')) {
            ++number;
            // '#' never occurs in a name, so it always starts a comment.
            auto t = trim(raw.substr(0, raw.find('#')));
            if (t.empty()) continue;
            lines_.push_back({number, raw, t});
        }
    }

    const std::vector<Line>& lines() const { return lines_; }

    [[noreturn]] static void fail(const Line& line, std::string_view at, const std::string& why) {
        std::size_t column = 1;
        if (at.data() >= line.full.data() && at.data() <= line.full.data() + line.full.size())
            column = static_cast<std::size_t>(at.data() - line.full.data()) + 1;
        throw ParseError(line.number, column, why);
    }

private:
    std::string_view text_;
    std::vector<Line> lines_;
};

Rational rational_at(const Line& line, std::string_view token) {
    try {
        return parse_rational(trim(token));
    } catch (const std::invalid_argument& e) {
        Reader::fail(line, trim(token), e.what());
    }
}

std::vector<Generator> parse_basis(const Line& line, std::string_view rest) {
    std::vector<Generator> out;
    for (auto w : words(rest)) {
        auto colon = w.rfind(':');
        if (colon == std::string_view::npos) Reader::fail(line, w, "basis entries are name:degree");
        auto name = w.substr(0, colon);
        if (!valid_name(name)) Reader::fail(line, w, "invalid generator name '" + std::string(name) + "'");
        Rational deg = rational_at(line, w.substr(colon + 1));
        if (deg.get_den() != 1 || !deg.get_num().fits_sint_p()) Reader::fail(line, w, "degrees are integers");
        for (const auto& g : out)
            if (g.name == name) Reader::fail(line, w, "duplicate generator '" + std::string(name) + "'");
        out.push_back({std::string(name), static_cast<int>(deg.get_num().get_si())});
    }
    if (out.empty()) Reader::fail(line, line.text, "empty basis");
    return out;
}

std::size_t index_in(const Line& line, const std::vector<Generator>& basis, std::string_view name) {
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (basis[i].name == name) return i;
    Reader::fail(line, name, "unknown generator '" + std::string(name) + "'");
}

Inputs parse_inputs(const Line& line, const std::vector<Generator>& basis, std::string_view list) {
    Inputs out;
    if (trim(list).empty()) return out;
    for (auto part : split(list, ',')) {
        auto name = trim(part);
        if (name.empty()) Reader::fail(line, part, "empty input");
        out.push_back(index_in(line, basis, name));
    }
    return out;
}

QVec parse_output(const Line& line, const std::vector<Generator>& basis, std::string_view expr) {
    QVec out(basis.size(), Rational(0));
    for (auto part : split(expr, '+')) {
        auto term = trim(part);
        auto star = term.find('*');
        if (term.empty() || star == std::string_view::npos) Reader::fail(line, part, "terms are coefficient*generator");
        Rational c = rational_at(line, term.substr(0, star));
        out[index_in(line, basis, trim(term.substr(star + 1)))] += c;
    }
    return out;
}

// "m[level](...) = expr" split into level, the text inside the parentheses and expr.
struct Product {
    Rational level;
    std::string_view inside;
    std::string_view output;
};

Product parse_product(const Line& line, char tag) {
    std::string_view t = line.text;
    if (t.size() < 2 || t[0] != tag || t[1] != '[') Reader::fail(line, t, std::string("expected ") + tag + "[level](...)");
    auto close = t.find(']');
    auto open = t.find('(', close);
    auto end = t.find(')', open);
    auto eq = t.find('=', end);
    if (close == std::string_view::npos || open != close + 1 || end == std::string_view::npos || eq == std::string_view::npos)
        Reader::fail(line, t, std::string("expected ") + tag + "[level](inputs) = output");
    Rational level = rational_at(line, t.substr(2, close - 2));
    return {level, t.substr(open + 1, end - open - 1), t.substr(eq + 1)};
}

std::string join_names(const std::vector<Generator>& basis, const Inputs& inputs) {
    std::string out;
    for (std::size_t i = 0; i < inputs.size(); ++i) out += (i ? ", " : "") + basis[inputs[i]].name;
    return out;
}

std::string output_text(const std::vector<Generator>& basis, const QVec& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        if (!out.empty()) out += " + ";
        out += v[i].get_str() + "*" + basis[i].name;
    }
    return out;
}

std::string basis_text(const std::vector<Generator>& basis) {
    std::string out = "basis";
    for (const auto& g : basis) out += " " + g.name + ":" + std::to_string(g.degree);
    return out;
}

void emit_products(std::ostringstream& os, const GappedAlgebra& a) {
    for (const auto& t : a.terms())
        os << "m[" << t.level.get_str() << "](" << join_names(a.basis(), t.inputs) << ") = " << output_text(a.basis(), t.output)
           << "\n";
}

// Directive keyword and the rest of the line.
std::pair<std::string_view, std::string_view> directive(std::string_view t) {
    auto space = t.find(' ');
    if (space == std::string_view::npos) return {t, {}};
    return {t.substr(0, space), trim(t.substr(space + 1))};
}

// Shared state while reading one algebra section.
struct AlgebraSection {
    std::optional<Line> basis_line;
    std::vector<Generator> basis;
    std::vector<std::pair<Line, Product>> products;

    GappedAlgebra build(const Rational& emax, const Line& anchor) const {
        if (!basis_line) Reader::fail(anchor, anchor.text, "section has no basis line");
        std::vector<ProductTerm> terms;
        for (const auto& [line, p] : products)
            terms.push_back({p.level, parse_inputs(line, basis, p.inside), parse_output(line, basis, p.output)});
        try {
            return GappedAlgebra(basis, emax, terms);
        } catch (const Error& e) {
            // Point at the first product the constructor would reject on its own.
            for (std::size_t i = 0; i < terms.size(); ++i) {
                try {
                    GappedAlgebra(basis, emax, {terms[i]});
                } catch (const Error& single) {
                    Reader::fail(products[i].first, products[i].first.text, single.what());
                }
            }
            Reader::fail(*basis_line, basis_line->text, e.what());
        }
    }
};

Rational parse_emax(const Line& line, std::string_view rest) {
    Rational e = rational_at(line, rest);
    if (e <= 0) Reader::fail(line, rest, "emax must be positive");
    return e;
}

}  // namespace

AlgebraDocument parse_algebra(std::string_view text) {
    Reader reader(text);
    if (reader.lines().empty()) throw ParseError(1, 1, "empty algebra file");
    std::optional<Rational> emax;
    AlgebraSection section;
    std::optional<std::pair<Line, std::string_view>> ideal_line, cochain_line;
    for (const auto& line : reader.lines()) {
        if (line.text.front() == 'm' && line.text.size() > 1 && line.text[1] == '[') {
            if (!section.basis_line) Reader::fail(line, line.text, "products must come after the basis");
            section.products.emplace_back(line, parse_product(line, 'm'));
            continue;
        }
        auto [key, rest] = directive(line.text);
        if (key == "emax") {
            if (emax) Reader::fail(line, key, "emax given twice");
            emax = parse_emax(line, rest);
        } else if (key == "basis") {
            if (section.basis_line) Reader::fail(line, key, "basis given twice");
            section.basis_line = line;
            section.basis = parse_basis(line, rest);
        } else if (key == "ideal") {
            ideal_line.emplace(line, rest);
        } else if (key == "cochain") {
            cochain_line.emplace(line, rest);
        } else {
            Reader::fail(line, key, "unknown directive '" + std::string(key) + "'");
        }
    }
    if (!emax) throw ParseError(reader.lines().front().number, 1, "missing emax line");
    AlgebraDocument doc{section.build(*emax, reader.lines().front()), std::nullopt, std::nullopt};
    const auto& basis = doc.algebra.basis();
    if (ideal_line) {
        const auto& [line, rest] = *ideal_line;
        if (rest == "filtered") {
            doc.ideal = Submodule::positively_filtered(basis.size());
        } else {
            std::vector<std::size_t> idx;
            for (auto w : words(rest)) idx.push_back(index_in(line, basis, w));
            doc.ideal = Submodule::span(basis.size(), idx);
        }
    }
    if (cochain_line) {
        const auto& [line, rest] = *cochain_line;
        Chain c = doc.algebra.zero();
        for (auto entry : rest.empty() ? std::vector<std::string_view>{} : split(rest, ';')) {
            auto colon = entry.find(':');
            if (colon == std::string_view::npos) Reader::fail(line, entry, "cochain entries are name: series");
            std::size_t i = index_in(line, basis, trim(entry.substr(0, colon)));
            try {
                c.add(i, NovikovSeries::parse(trim(entry.substr(colon + 1))));
            } catch (const std::invalid_argument& e) {
                Reader::fail(line, trim(entry.substr(colon + 1)), e.what());
            }
        }
        try {
            doc.cochain = DeformingCochain(doc.algebra, c).chain();
        } catch (const Error& e) {
            Reader::fail(line, line.text, e.what());
        }
    }
    return doc;
}

std::string emit_algebra(const AlgebraDocument& doc) {
    const GappedAlgebra& a = doc.algebra;
    std::ostringstream os;
    os << "emax " << a.cutoff().get_str() << "\n" << basis_text(a.basis()) << "\n";
    if (doc.ideal) {
        os << "ideal";
        if (doc.ideal->positive_part) {
            os << " filtered";
        } else {
            for (std::size_t i = 0; i < a.dimension(); ++i)
                if (doc.ideal->generators[i]) os << " " << a.basis()[i].name;
        }
        os << "\n";
    }
    if (doc.cochain) {
        os << "cochain";
        bool first = true;
        for (std::size_t i = 0; i < a.dimension(); ++i) {
            if ((*doc.cochain)[i].is_zero()) continue;
            os << (first ? " " : "; ") << a.basis()[i].name << ": " << (*doc.cochain)[i].str();
            first = false;
        }
        os << "\n";
    }
    emit_products(os, a);
    return os.str();
}

bool is_bimodule_text(std::string_view text) {
    for (auto raw : split(text, '\n'))
        if (trim(raw) == "[module]") return true;
    return false;
}

BimoduleDocument parse_bimodule(std::string_view text) {
    Reader reader(text);
    if (reader.lines().empty()) throw ParseError(1, 1, "empty bimodule file");
    std::optional<Rational> emax;
    AlgebraSection left, right;
    std::optional<Line> left_header, right_header, module_header, module_basis_line;
    std::vector<Generator> module_basis;
    std::vector<std::pair<Line, Product>> module_products;
    std::optional<std::pair<Line, std::string_view>> seed_line;
    std::optional<Rational> hook;
    enum class Part { None, Left, Right, Module } part = Part::None;
    for (const auto& line : reader.lines()) {
        const std::string_view t = line.text;
        if (t == "[left]" || t == "[right]" || t == "[module]") {
            auto& header = t == "[left]" ? left_header : t == "[right]" ? right_header : module_header;
            if (header) Reader::fail(line, t, "section given twice");
            header = line;
            part = t == "[left]" ? Part::Left : t == "[right]" ? Part::Right : Part::Module;
            continue;
        }
        auto [key, rest] = directive(t);
        if (part == Part::None) {
            if (key != "emax" || emax) Reader::fail(line, key, "expected a single emax line before the sections");
            emax = parse_emax(line, rest);
            continue;
        }
        if (part == Part::Left || part == Part::Right) {
            AlgebraSection& s = part == Part::Left ? left : right;
            if (t.front() == 'm' && t.size() > 1 && t[1] == '[') {
                if (!s.basis_line) Reader::fail(line, t, "products must come after the basis");
                s.products.emplace_back(line, parse_product(line, 'm'));
            } else if (key == "basis" && !s.basis_line) {
                s.basis_line = line;
                s.basis = parse_basis(line, rest);
            } else {
                Reader::fail(line, key, "unexpected line in an algebra section");
            }
            continue;
        }
        if (t.front() == 'n' && t.size() > 1 && t[1] == '[') {
            if (!module_basis_line) Reader::fail(line, t, "module products must come after the basis");
            module_products.emplace_back(line, parse_product(line, 'n'));
        } else if (key == "basis" && !module_basis_line) {
            module_basis_line = line;
            module_basis = parse_basis(line, rest);
        } else if (key == "seed" && !seed_line) {
            seed_line.emplace(line, rest);
        } else if (key == "hook" && !hook) {
            hook = rational_at(line, rest);
        } else {
            Reader::fail(line, key, "unexpected line in the module section");
        }
    }
    if (!emax) throw ParseError(reader.lines().front().number, 1, "missing emax line");
    if (!left_header || !right_header || !module_header)
        throw ParseError(reader.lines().back().number, 1, "bimodule files need [left], [right] and [module] sections");
    if (!module_basis_line) Reader::fail(*module_header, module_header->text, "module section has no basis line");
    GappedAlgebra la = left.build(*emax, *left_header);
    GappedAlgebra ra = right.build(*emax, *right_header);
    std::vector<ModuleTerm> terms;
    for (const auto& [line, p] : module_products) {
        auto sides = split(p.inside, '|');
        if (sides.size() != 3) Reader::fail(line, p.inside, "module inputs are written (left | m | right)");
        auto m = trim(sides[1]);
        terms.push_back({p.level, parse_inputs(line, la.basis(), sides[0]), index_in(line, module_basis, m),
                         parse_inputs(line, ra.basis(), sides[2]), parse_output(line, module_basis, p.output)});
    }
    auto build = [&](const std::vector<ModuleTerm>& ts) { return GappedBimodule(la, ra, module_basis, ts); };
    std::optional<GappedBimodule> module;
    try {
        module = build(terms);
    } catch (const Error& e) {
        for (std::size_t i = 0; i < terms.size(); ++i) {
            try {
                build({terms[i]});
            } catch (const Error& single) {
                Reader::fail(module_products[i].first, module_products[i].first.text, single.what());
            }
        }
        Reader::fail(*module_basis_line, module_basis_line->text, e.what());
    }
    BimoduleDocument doc{std::move(*module), std::nullopt, hook};
    if (seed_line) doc.seed = index_in(seed_line->first, module_basis, seed_line->second);
    return doc;
}

std::string emit_bimodule(const BimoduleDocument& doc) {
    const GappedBimodule& m = doc.module;
    if (m.left().cutoff() != m.cutoff() || m.right().cutoff() != m.cutoff())
        throw Error(Errc::InvalidInput, "bimodule files share one emax across all sections");
    std::ostringstream os;
    os << "emax " << m.cutoff().get_str() << "\n";
    os << "[left]\n" << basis_text(m.left().basis()) << "\n";
    emit_products(os, m.left());
    os << "[right]\n" << basis_text(m.right().basis()) << "\n";
    emit_products(os, m.right());
    os << "[module]\n" << basis_text(m.basis()) << "\n";
    if (doc.seed) os << "seed " << m.basis()[*doc.seed].name << "\n";
    if (doc.hook) os << "hook " << doc.hook->get_str() << "\n";
    for (const auto& t : m.terms()) {
        std::string left = join_names(m.left().basis(), t.left), right = join_names(m.right().basis(), t.right);
        os << "n[" << t.level.get_str() << "](" << left << (left.empty() ? "" : " ") << "| " << m.basis()[t.module_input].name
           << " |" << (right.empty() ? "" : " ") << right << ") = " << output_text(m.basis(), t.output) << "\n";
    }
    return os.str();
}

}  // namespace tropic::io
