#pragma once

// Scalar fields shared by every module: arbitrary-precision rationals,
// Gaussian rationals (rationals extended by i), and double precision.
// Symbolic code instantiates the polynomial/rational-function templates
// with Rational or GaussRational; the numeric lab instantiates with double.

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <string>

namespace twocut {

struct Error : std::runtime_error {
    std::string kind;
    Error(std::string k, const std::string& msg)
        : std::runtime_error(k + ": " + msg), kind(std::move(k)) {}
};

using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw Error("ZeroDenominator", "rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline bool rat_is_zero(const Rational& q) { return sgn(q) == 0; }

inline std::string rat_str(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Accepts "p", "p/q", and a plain decimal like "0.25" (used by CLI flags).
inline Rational parse_rational(const std::string& s) {
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::string den = "1" + std::string(s.size() - dot - 1, '0');
        Rational q(digits + "/" + den);
        q.canonicalize();
        return q;
    }
    Rational q(s);
    if (q.get_den() == 0) throw Error("ZeroDenominator", "rational with zero denominator: " + s);
    q.canonicalize();
    return q;
}

// a + b*i with rational a, b.
struct GaussRational {
    Rational re{0}, im{0};

    GaussRational() = default;
    GaussRational(const Rational& r) : re(r) {}
    GaussRational(long n) : re(n) {}
    GaussRational(const Rational& r, const Rational& i) : re(r), im(i) {}

    static GaussRational unit_i() { return GaussRational(Rational(0), Rational(1)); }

    bool is_zero() const { return rat_is_zero(re) && rat_is_zero(im); }
    bool is_real() const { return rat_is_zero(im); }

    GaussRational operator-() const { return {-re, -im}; }
    GaussRational conj() const { return {re, -im}; }
    Rational norm2() const { return re * re + im * im; }

    friend GaussRational operator+(const GaussRational& a, const GaussRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussRational operator-(const GaussRational& a, const GaussRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussRational operator*(const GaussRational& a, const GaussRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussRational operator/(const GaussRational& a, const GaussRational& b) {
        Rational n = b.norm2();
        if (rat_is_zero(n)) throw Error("ZeroDenominator", "division by zero Gaussian rational");
        GaussRational c = a * b.conj();
        return {c.re / n, c.im / n};
    }
    GaussRational& operator+=(const GaussRational& b) { return *this = *this + b; }
    GaussRational& operator-=(const GaussRational& b) { return *this = *this - b; }
    GaussRational& operator*=(const GaussRational& b) { return *this = *this * b; }
    GaussRational& operator/=(const GaussRational& b) { return *this = *this / b; }

    friend bool operator==(const GaussRational& a, const GaussRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussRational& a, const GaussRational& b) { return !(a == b); }
    friend bool operator<(const GaussRational& a, const GaussRational& b) {
        int c = cmp(a.re, b.re);
        if (c != 0) return c < 0;
        return cmp(a.im, b.im) < 0;
    }
};

// Serialized as "p/q" when real, "p/q+r/s*i" otherwise.
inline std::string gauss_str(const GaussRational& g) {
    if (g.is_real()) return rat_str(g.re);
    Rational a = abs(g.im);
    std::string itail = (a == 1) ? "i" : rat_str(a) + "*i";
    if (rat_is_zero(g.re)) return (sgn(g.im) < 0 ? "-" : "") + itail;
    return rat_str(g.re) + (sgn(g.im) < 0 ? "-" : "+") + itail;
}

// Access to the integer structure of a scalar, used by the fraction-free
// polynomial gcd to keep coefficients primitive.
template <class K>
struct IntegralOps;

template <>
struct IntegralOps<Rational> {
    static void lcm_den(mpz_class& l, const Rational& q) {
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den().get_mpz_t());
    }
    static void gcd_num(mpz_class& g, const Rational& q) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), q.get_num().get_mpz_t());
    }
};

template <>
struct IntegralOps<GaussRational> {
    static void lcm_den(mpz_class& l, const GaussRational& q) {
        IntegralOps<Rational>::lcm_den(l, q.re);
        IntegralOps<Rational>::lcm_den(l, q.im);
    }
    static void gcd_num(mpz_class& g, const GaussRational& q) {
        IntegralOps<Rational>::gcd_num(g, q.re);
        IntegralOps<Rational>::gcd_num(g, q.im);
    }
};

template <class K>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static bool is_zero(const Rational& x) { return rat_is_zero(x); }
    static Rational from_rational(const Rational& q) { return q; }
    static std::string str(const Rational& x) { return rat_str(x); }
};

template <>
struct ScalarTraits<GaussRational> {
    static GaussRational zero() { return GaussRational(); }
    static GaussRational one() { return GaussRational(1); }
    static bool is_zero(const GaussRational& x) { return x.is_zero(); }
    static GaussRational from_rational(const Rational& q) { return GaussRational(q); }
    static std::string str(const GaussRational& x) { return gauss_str(x); }
};

template <>
struct ScalarTraits<double> {
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static bool is_zero(double x) { return x == 0.0; }
    static double from_rational(const Rational& q) { return q.get_d(); }
    static std::string str(double x) { return std::to_string(x); }
};

}  // namespace twocut
