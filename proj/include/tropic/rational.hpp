#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tropic {

using Integer = mpz_class;
using Rational = mpq_class;

using QVec = std::vector<Rational>;
using ZVec = std::vector<Integer>;

/// Parses "p", "-p" or "p/q" with q > 0. Anything else (spaces, floats,
/// zero denominators) is rejected so that documents stay exact.
inline Rational parse_rational(std::string_view text) {
    auto bad = [&] { return std::invalid_argument("malformed rational '" + std::string(text) + "'"); };
    if (text.empty()) throw bad();
    std::size_t i = 0;
    if (text[0] == '-' || text[0] == '+') i = 1;
    std::size_t digits = 0;
    std::size_t slash = std::string_view::npos;
    for (std::size_t j = i; j < text.size(); ++j) {
        char c = text[j];
        if (c >= '0' && c <= '9') {
            ++digits;
        } else if (c == '/' && slash == std::string_view::npos && j > i) {
            slash = j;
        } else {
            throw bad();
        }
    }
    if (digits == 0 || (slash != std::string_view::npos && slash + 1 == text.size())) throw bad();
    std::string body(text[0] == '+' ? text.substr(1) : text);
    Rational q;
    if (slash != std::string_view::npos) {
        Integer num(std::string(body.substr(0, body.find('/'))));
        Integer den(std::string(body.substr(body.find('/') + 1)));
        if (den == 0) throw bad();
        q = Rational(num, den);
    } else {
        q = Rational(Integer(body));
    }
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

inline Integer gcd(const Integer& a, const Integer& b) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Integer content(const ZVec& v) {
    Integer g = 0;
    for (const auto& x : v) g = gcd(g, x);
    return g;
}

inline bool is_zero(const ZVec& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

inline bool is_zero(const QVec& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

/// Divides out the content; the zero vector is returned unchanged.
inline ZVec primitive(ZVec v) {
    Integer g = content(v);
    if (g > 1)
        for (auto& x : v) x /= g;
    return v;
}

inline bool is_primitive(const ZVec& v) { return content(v) == 1; }

inline QVec to_rational(const ZVec& v) {
    QVec out;
    out.reserve(v.size());
    for (const auto& x : v) out.emplace_back(x);
    return out;
}

/// Scales a rational vector to the primitive integer vector on the same ray.
inline ZVec primitive_integral(const QVec& v) {
    Integer l = 1;
    for (const auto& x : v) {
        Integer d = x.get_den();
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
    }
    ZVec out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(Integer(x * l));
    return primitive(out);
}

template <class A, class B>
Rational dot(const std::vector<A>& a, const std::vector<B>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += Rational(a[i]) * Rational(b[i]);
    return s;
}

inline ZVec operator-(const ZVec& v) {
    ZVec out(v);
    for (auto& x : out) x = -x;
    return out;
}

inline ZVec operator+(const ZVec& a, const ZVec& b) {
    ZVec out(a);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
    return out;
}

inline ZVec operator-(const ZVec& a, const ZVec& b) {
    ZVec out(a);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
    return out;
}

inline QVec operator+(const QVec& a, const QVec& b) {
    QVec out(a);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
    return out;
}

inline QVec operator-(const QVec& a, const QVec& b) {
    QVec out(a);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
    return out;
}

inline QVec operator*(const Rational& s, const QVec& v) {
    QVec out(v);
    for (auto& x : out) x *= s;
    return out;
}

inline ZVec zvec(std::initializer_list<long> xs) {
    ZVec v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

inline QVec canonical(QVec v) {
    for (auto& x : v) x.canonicalize();
    return v;
}

inline QVec qvec(std::initializer_list<Rational> xs) { return canonical(QVec(xs)); }

/// num/den in lowest terms (the two-argument mpq constructor does not reduce).
inline Rational ratio(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

}  // namespace tropic
