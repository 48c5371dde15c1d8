#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "rational.hpp"

namespace tropic {

/// A rational energy or +infinity.
class Exponent {
public:
    Exponent() = default;  // +infinity
    Exponent(const Rational& v) : value_(v) { value_->canonicalize(); }
    Exponent(long v) : value_(Rational(v)) {}

    static Exponent infinity() { return Exponent(); }

    bool is_infinite() const { return !value_.has_value(); }
    bool is_finite() const { return value_.has_value(); }
    const Rational& value() const {
        if (!value_) throw std::logic_error("Exponent: value of +infinity");
        return *value_;
    }

    friend Exponent operator+(const Exponent& a, const Exponent& b) {
        if (a.is_infinite() || b.is_infinite()) return infinity();
        return Exponent(*a.value_ + *b.value_);
    }
    friend Exponent operator-(const Exponent& a, const Rational& b) {
        if (a.is_infinite()) return infinity();
        return Exponent(*a.value_ - b);
    }
    friend bool operator==(const Exponent& a, const Exponent& b) { return a.value_ == b.value_; }
    friend bool operator<(const Exponent& a, const Exponent& b) {
        if (a.is_infinite()) return false;
        if (b.is_infinite()) return true;
        return *a.value_ < *b.value_;
    }
    friend bool operator>(const Exponent& a, const Exponent& b) { return b < a; }
    friend bool operator<=(const Exponent& a, const Exponent& b) { return !(b < a); }
    friend bool operator>=(const Exponent& a, const Exponent& b) { return !(a < b); }

    std::string str() const { return is_infinite() ? std::string("inf") : value_->get_str(); }

private:
    std::optional<Rational> value_;
};

inline Exponent min(const Exponent& a, const Exponent& b) { return b < a ? b : a; }
inline Exponent max(const Exponent& a, const Exponent& b) { return a < b ? b : a; }

inline std::ostream& operator<<(std::ostream& os, const Exponent& e) { return os << e.str(); }

/// Default working precision for operations that must truncate an exact input.
inline const Rational kDefaultPrecision{10};

/// Truncated series  sum c_i T^{e_i} + O(T^precision)  with exact rational data.
/// Precision +infinity means the series is exact (a finite sum).
class NovikovSeries {
public:
    struct Term {
        Rational exponent;
        Rational coeff;
        friend bool operator==(const Term&, const Term&) = default;
    };

    NovikovSeries() = default;
    NovikovSeries(const Rational& c) {
        if (c != 0) terms_.push_back({Rational(0), c});
    }
    NovikovSeries(long c) : NovikovSeries(Rational(c)) {}

    NovikovSeries(std::vector<Term> terms, Exponent precision) : precision_(std::move(precision)) {
        std::map<Rational, Rational> merged;
        for (auto& t : terms) {
            t.exponent.canonicalize();
            t.coeff.canonicalize();
            merged[t.exponent] += t.coeff;
        }
        for (auto& [e, c] : merged)
            if (c != 0 && Exponent(e) < precision_) terms_.push_back({e, c});
    }

    static NovikovSeries monomial(const Rational& coeff, const Rational& exponent,
                                  Exponent precision = Exponent::infinity()) {
        return NovikovSeries({{exponent, coeff}}, std::move(precision));
    }
    static NovikovSeries T(const Rational& exponent) { return monomial(1, exponent); }
    static NovikovSeries zero(Exponent precision = Exponent::infinity()) { return NovikovSeries({}, std::move(precision)); }

    const std::vector<Term>& terms() const { return terms_; }
    const Exponent& precision() const { return precision_; }
    bool is_exact() const { return precision_.is_infinite(); }
    bool is_zero() const { return terms_.empty(); }

    Exponent valuation() const { return terms_.empty() ? Exponent::infinity() : Exponent(terms_.front().exponent); }

    /// The valuation we can vouch for: min(valuation, precision).
    Exponent certified_valuation() const { return min(valuation(), precision_); }

    Rational leading_coefficient() const { return terms_.empty() ? Rational(0) : terms_.front().coeff; }

    Rational coefficient(const Rational& exponent) const {
        for (const auto& t : terms_)
            if (t.exponent == exponent) return t.coeff;
        return 0;
    }

    /// Constant term (coefficient of T^0).
    Rational constant() const { return coefficient(0); }

    NovikovSeries truncated(const Exponent& p) const { return NovikovSeries(terms_, min(p, precision_)); }

    /// Multiplication by T^s.
    NovikovSeries shifted(const Rational& s) const {
        std::vector<Term> out = terms_;
        for (auto& t : out) t.exponent += s;
        return NovikovSeries(std::move(out), precision_.is_infinite() ? precision_ : Exponent(precision_.value() + s));
    }

    /// True when every coefficient below `e` vanishes and the precision reaches `e`.
    bool is_zero_mod(const Rational& e) const {
        if (precision_ < Exponent(e)) return false;
        return terms_.empty() || terms_.front().exponent >= e;
    }

    NovikovSeries operator-() const {
        std::vector<Term> out = terms_;
        for (auto& t : out) t.coeff = -t.coeff;
        return NovikovSeries(std::move(out), precision_);
    }

    friend NovikovSeries operator+(const NovikovSeries& a, const NovikovSeries& b) {
        NovikovSeries out;
        out.precision_ = min(a.precision_, b.precision_);
        auto below = [&](const Rational& e) { return out.precision_.is_infinite() || e < out.precision_.value(); };
        auto i = a.terms_.begin(), j = b.terms_.begin();
        while (i != a.terms_.end() || j != b.terms_.end()) {
            Term t;
            if (j == b.terms_.end() || (i != a.terms_.end() && i->exponent < j->exponent)) {
                t = *i++;
            } else if (i == a.terms_.end() || j->exponent < i->exponent) {
                t = *j++;
            } else {
                t = {i->exponent, i->coeff + j->coeff};
                ++i;
                ++j;
            }
            if (!below(t.exponent)) break;
            if (t.coeff != 0) out.terms_.push_back(std::move(t));
        }
        return out;
    }
    friend NovikovSeries operator-(const NovikovSeries& a, const NovikovSeries& b) { return a + (-b); }

    friend NovikovSeries operator*(const NovikovSeries& a, const NovikovSeries& b) {
        return multiply(a, b, Exponent::infinity());
    }

    /// a * b with every term at or above `cap` dropped (and the precision capped).
    static NovikovSeries multiply(const NovikovSeries& a, const NovikovSeries& b, const Exponent& cap) {
        Exponent p = min(min(a.certified_valuation() + b.precision_, b.certified_valuation() + a.precision_), cap);
        std::map<Rational, Rational> acc;
        for (const auto& s : a.terms_)
            for (const auto& t : b.terms_) {
                Rational e = s.exponent + t.exponent;
                if (p.is_finite() && e >= p.value()) break;
                acc[e] += s.coeff * t.coeff;
            }
        NovikovSeries out;
        out.precision_ = p;
        for (auto& [e, c] : acc)
            if (c != 0) out.terms_.push_back({e, c});
        return out;
    }

    NovikovSeries& operator+=(const NovikovSeries& o) { return *this = *this + o; }
    NovikovSeries& operator-=(const NovikovSeries& o) { return *this = *this - o; }
    NovikovSeries& operator*=(const NovikovSeries& o) { return *this = *this * o; }

    friend bool operator==(const NovikovSeries& a, const NovikovSeries& b) {
        return a.precision_ == b.precision_ && a.terms_ == b.terms_;
    }

    /// Canonical text: "c*T^e + ... + O(T^p)"; the zero series prints as "0".
    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (const auto& t : terms_) {
            if (!first) os << " + ";
            os << t.coeff.get_str() << "*T^" << t.exponent.get_str();
            first = false;
        }
        if (first) os << "0";
        if (precision_.is_finite()) os << " + O(T^" << precision_.value().get_str() << ")";
        return os.str();
    }

    static NovikovSeries parse(std::string_view text);

private:
    std::vector<Term> terms_;
    Exponent precision_;
};

inline std::ostream& operator<<(std::ostream& os, const NovikovSeries& s) { return os << s.str(); }

inline NovikovSeries NovikovSeries::parse(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
        return s;
    };
    auto bad = [&](std::string_view why) {
        return std::invalid_argument("malformed series '" + std::string(text) + "': " + std::string(why));
    };
    std::vector<Term> terms;
    Exponent precision;
    bool saw_precision = false;
    bool saw_any = false;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t plus = text.find('+', start);
        std::string_view piece = trim(text.substr(start, plus == std::string_view::npos ? std::string_view::npos : plus - start));
        if (piece.empty()) throw bad("empty summand");
        if (saw_precision) throw bad("O(...) must come last");
        saw_any = true;
        if (piece.size() > 5 && piece.substr(0, 4) == "O(T^" && piece.back() == ')') {
            precision = Exponent(parse_rational(piece.substr(4, piece.size() - 5)));
            saw_precision = true;
        } else if (piece == "0") {
        } else {
            std::size_t star = piece.find("*T^");
            if (star == std::string_view::npos) {
                terms.push_back({Rational(0), parse_rational(piece)});
            } else {
                Rational c = parse_rational(piece.substr(0, star));
                Rational e = parse_rational(piece.substr(star + 3));
                if (c == 0) throw bad("zero coefficient");
                terms.push_back({e, c});
            }
        }
        if (plus == std::string_view::npos) break;
        start = plus + 1;
    }
    if (!saw_any) throw bad("empty");
    for (std::size_t i = 1; i < terms.size(); ++i)
        if (!(terms[i - 1].exponent < terms[i].exponent)) throw bad("exponents must increase");
    for (const auto& t : terms)
        if (!(Exponent(t.exponent) < precision)) throw bad("term at or beyond precision");
    return NovikovSeries(std::move(terms), precision);
}

/// Valuation-0 series with nonzero constant term: the holonomy of a local system.
class UnitaryElement {
public:
    UnitaryElement() : value_(1) {}
    UnitaryElement(const Rational& c) : UnitaryElement(NovikovSeries(c)) {}
    UnitaryElement(long c) : UnitaryElement(Rational(c)) {}
    explicit UnitaryElement(NovikovSeries s) : value_(std::move(s)) {
        if (value_.is_zero() || value_.valuation() != Exponent(0))
            throw Error(Errc::InvalidInput, "unitary element needs valuation 0, got " + value_.str());
    }

    const NovikovSeries& series() const { return value_; }
    operator const NovikovSeries&() const { return value_; }
    friend bool operator==(const UnitaryElement&, const UnitaryElement&) = default;

private:
    NovikovSeries value_;
};

inline Exponent valuation(const NovikovSeries& a) { return a.valuation(); }

/// Inverse of a nonzero series. An exact input with a nontrivial unit part
/// gets `working_precision` as the absolute precision of the result.
inline NovikovSeries invert(const NovikovSeries& a, const Rational& working_precision = kDefaultPrecision) {
    if (a.is_zero()) throw Error(Errc::ZeroDivision, "invert of zero (" + a.str() + ")");
    const Rational v = a.valuation().value();
    const Rational c0 = a.leading_coefficient();
    // a = c0 T^v (1 + x) with val(x) > 0
    NovikovSeries x = a.shifted(-v) * NovikovSeries(Rational(1) / c0) - NovikovSeries(1);
    Exponent target = min(a.precision() - v - v, Exponent(working_precision));
    if (x.is_zero() && x.precision().is_infinite()) return NovikovSeries::monomial(Rational(1) / c0, -v);
    Exponent relative = target + Exponent(v);
    // Newton iteration y <- y (2 - u y) for u = 1 + x; correct order doubles each step.
    NovikovSeries u = x + NovikovSeries(1);
    NovikovSeries y(1);
    Rational order = x.certified_valuation().is_finite() ? x.certified_valuation().value() : relative.value();
    while (true) {
        Exponent step = min(Exponent(2 * order), relative);
        NovikovSeries uy = NovikovSeries::multiply(u, y, step);
        y = NovikovSeries::multiply(y, NovikovSeries(2) - uy, step);
        if (step == relative || y.precision() < step) break;
        // The iterate is right to order `step`; carry it as exact so the next product is not capped early.
        y = NovikovSeries(y.terms(), Exponent::infinity());
        order = 2 * order;
    }
    return (y.truncated(relative) * NovikovSeries(Rational(1) / c0)).shifted(-v).truncated(target);
}

namespace detail {
inline void require_positive(const NovikovSeries& a, const char* op) {
    if (!(a.certified_valuation() > Exponent(0)))
        throw Error(Errc::NotPositiveValuation, std::string(op) + " needs positive valuation, got " + a.str());
}
}  // namespace detail

/// exp(a) for val(a) > 0.
inline UnitaryElement exp_positive(const NovikovSeries& a, const Rational& working_precision = kDefaultPrecision) {
    detail::require_positive(a, "exp_positive");
    if (a.is_zero()) return UnitaryElement(NovikovSeries({{0, 1}}, a.precision()));
    Exponent p = min(a.precision(), Exponent(working_precision));
    NovikovSeries sum(1), power(1);
    for (long k = 1;; ++k) {
        power = (power * a * NovikovSeries(Rational(1, k))).truncated(p);
        if (power.is_zero()) break;
        sum = sum + power;
    }
    return UnitaryElement(sum.truncated(p));
}

/// log(1 + x) for val(x) > 0.
inline NovikovSeries log_one_plus(const NovikovSeries& x, const Rational& working_precision = kDefaultPrecision) {
    detail::require_positive(x, "log_one_plus");
    if (x.is_zero()) return x;
    Exponent p = min(x.precision(), Exponent(working_precision));
    NovikovSeries sum = NovikovSeries::zero(p), power(1);
    for (long k = 1;; ++k) {
        power = (power * x).truncated(p);
        if (power.is_zero()) break;
        sum = sum + power * NovikovSeries(Rational(k % 2 ? 1 : -1, k));
    }
    return sum;
}

/// Integer power (negative exponents go through `invert`).
inline NovikovSeries pow(const NovikovSeries& a, long k, const Rational& working_precision = kDefaultPrecision) {
    if (k < 0) return pow(invert(a, working_precision), -k, working_precision);
    NovikovSeries out(1), base = a;
    while (k > 0) {
        if (k & 1) out = out * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return out;
}

}  // namespace tropic
