#pragma once

// File formats: JSON documents for curves, polynomials, complexes and reports,
// a line-based text format for gapped A-infinity algebras and bimodules, and
// SVG drawings of planar curves and complexes.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ainfinity.hpp"
#include "polyhedra.hpp"
#include "tropical.hpp"

namespace tropic::io {

/// Malformed input. Line and column are 1-based; 0 means the position is unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : std::runtime_error(line ? std::to_string(line) + ":" + std::to_string(column) + ": " + what : what),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_, column_;
};

/// A file that could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

struct CurveDocument {
    TropicalCurve curve;
    std::optional<Fan> fan;
    std::string metadata = "{}";  // compact JSON object, carried through untouched
};

CurveDocument parse_curve(std::string_view text);
std::string emit_curve(const CurveDocument& doc);

TropicalPolynomial parse_polynomial(std::string_view text);
std::string emit_polynomial(const TropicalPolynomial& f);

WeightedPolyhedralComplex parse_complex(std::string_view text);
std::string emit_complex(const WeightedPolyhedralComplex& c);

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
    friend bool operator==(const Check&, const Check&) = default;
};

struct ReportDocument {
    std::string command;
    std::vector<Check> checks;
    std::vector<std::pair<std::string, std::string>> witnesses;  // series in the Novikov text encoding
    std::vector<std::string> warnings;
    std::vector<std::pair<std::string, long long>> timings_us;

    bool ok() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
    friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

ReportDocument parse_report(std::string_view text);
std::string emit_report(const ReportDocument& r);

struct AlgebraDocument {
    GappedAlgebra algebra;
    std::optional<Submodule> ideal;
    std::optional<Chain> cochain;
};

AlgebraDocument parse_algebra(std::string_view text);
std::string emit_algebra(const AlgebraDocument& doc);

struct BimoduleDocument {
    GappedBimodule module;
    std::optional<std::size_t> seed;
    std::optional<Rational> hook;
};

BimoduleDocument parse_bimodule(std::string_view text);
std::string emit_bimodule(const BimoduleDocument& doc);

/// True when the text has a [module] section.
bool is_bimodule_text(std::string_view text);

/// Planar drawings. Rays and lines are cut at `clip_radius` lattice lengths
/// from their base point; every one-cell carries its weight as a label.
std::string svg(const TropicalCurve& c, const Rational& clip_radius = 5);
std::string svg(const WeightedPolyhedralComplex& c, const Rational& clip_radius = 5);

}  // namespace tropic::io
