#pragma once

// Dense univariate polynomials over an arbitrary coefficient ring T.
// Ring operations work for any T with +,-,*; division, gcd and friends
// additionally require T to be a field. Nested instantiations
// (Poly<Poly<K>>, Poly<DiffPoly<K>>, ...) are used throughout.

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "scalar.hpp"

namespace twocut {

template <class T>
struct Poly {
    // c[k] is the coefficient of the k-th power; trailing zeros stripped.
    std::vector<T> c;

    Poly() = default;
    Poly(const T& a) { c.push_back(a); trim(); }
    explicit Poly(int n) : Poly(T(n)) {}
    explicit Poly(std::vector<T> v) : c(std::move(v)) { trim(); }

    void trim() {
        while (!c.empty() && c.back() == T{}) c.pop_back();
    }

    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero
    const T& lead() const { return c.back(); }
    T coeff(int k) const { return (k >= 0 && k < (int)c.size()) ? c[k] : T{}; }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c == b.c; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
};

template <class T>
Poly<T> poly_x(int power = 1, const T& coeff = T(1)) {
    std::vector<T> v(power + 1, T{});
    v[power] = coeff;
    return Poly<T>(std::move(v));
}

template <class T>
Poly<T> operator+(const Poly<T>& a, const Poly<T>& b) {
    std::vector<T> v(std::max(a.c.size(), b.c.size()), T{});
    for (size_t i = 0; i < a.c.size(); ++i) v[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) v[i] = v[i] + b.c[i];
    return Poly<T>(std::move(v));
}

template <class T>
Poly<T> operator-(const Poly<T>& a) {
    std::vector<T> v = a.c;
    for (auto& x : v) x = T{} - x;
    return Poly<T>(std::move(v));
}

template <class T>
Poly<T> operator-(const Poly<T>& a, const Poly<T>& b) { return a + (-b); }

template <class T>
Poly<T> operator*(const Poly<T>& a, const Poly<T>& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> v(a.c.size() + b.c.size() - 1, T{});
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) v[i + j] = v[i + j] + a.c[i] * b.c[j];
    return Poly<T>(std::move(v));
}

template <class T>
Poly<T> operator*(const T& s, const Poly<T>& a) {
    std::vector<T> v = a.c;
    for (auto& x : v) x = s * x;
    return Poly<T>(std::move(v));
}

template <class T>
Poly<T> poly_shift_up(const Poly<T>& a, int k) {  // multiply by x^k
    if (a.is_zero()) return {};
    std::vector<T> v(a.c.size() + k, T{});
    for (size_t i = 0; i < a.c.size(); ++i) v[i + k] = a.c[i];
    return Poly<T>(std::move(v));
}

template <class T>
Poly<T> derivative(const Poly<T>& a) {
    if (a.degree() < 1) return {};
    std::vector<T> v(a.c.size() - 1, T{});
    for (size_t i = 1; i < a.c.size(); ++i) v[i - 1] = T(int(i)) * a.c[i];
    return Poly<T>(std::move(v));
}

// Horner evaluation; U needs U*U, U+U and construction from T.
template <class U, class T>
U eval_poly(const Poly<T>& a, const U& x) {
    U acc{};
    for (int k = a.degree(); k >= 0; --k) acc = acc * x + U(a.c[k]);
    return acc;
}

template <class T>
Poly<T> compose(const Poly<T>& a, const Poly<T>& inner) {
    Poly<T> acc;
    for (int k = a.degree(); k >= 0; --k) acc = acc * inner + Poly<T>(a.c[k]);
    return acc;
}

template <class T>
Poly<T> poly_pow(const Poly<T>& a, int e) {
    Poly<T> r(T(1));
    for (int i = 0; i < e; ++i) r = r * a;
    return r;
}

// ---- field-coefficient operations ----

template <class T>
std::pair<Poly<T>, Poly<T>> divrem(const Poly<T>& a, const Poly<T>& b) {
    if (b.is_zero()) throw Error("ZeroDenominator", "polynomial division by zero");
    Poly<T> r = a;
    std::vector<T> q(std::max(0, a.degree() - b.degree() + 1), T{});
    while (!r.is_zero() && r.degree() >= b.degree()) {
        T f = r.lead() / b.lead();
        int k = r.degree() - b.degree();
        q[k] = q[k] + f;
        for (int i = 0; i <= b.degree(); ++i) r.c[i + k] = r.c[i + k] - f * b.c[i];
        r.trim();
    }
    return {Poly<T>(std::move(q)), r};
}

template <class T>
Poly<T> make_monic(const Poly<T>& a) {
    if (a.is_zero()) return a;
    T inv = T(1) / a.lead();
    return inv * a;
}

template <class T>
Poly<T> gcd_poly(Poly<T> a, Poly<T> b) {
    if (a.is_zero()) return make_monic(b);
    if (b.is_zero()) return make_monic(a);
    if (a.degree() == 0 || b.degree() == 0) return Poly<T>(T(1));
    while (!b.is_zero()) {
        auto [q, r] = divrem(a, b);
        (void)q;
        a = std::move(b);
        b = make_monic(r);
    }
    return make_monic(a);
}

// ---- fraction-free gcds ----
//
// Monic Euclid over Q or Q(i) grows coefficient bit sizes exponentially in
// the degree; the residue recursion hits that wall immediately. These
// overloads run a primitive pseudo-remainder sequence over the integral
// coefficients instead, stripping content after every step.

namespace gcddetail {

template <class K>
Poly<K> to_primitive(const Poly<K>& p) {
    mpz_class L(1);
    for (auto& c : p.c) IntegralOps<K>::lcm_den(L, c);
    Poly<K> q = (L == 1) ? p : K(Rational(L)) * p;
    mpz_class g(0);
    for (auto& c : q.c) IntegralOps<K>::gcd_num(g, c);
    if (g > 1) {
        Rational inv(mpz_class(1), g);
        inv.canonicalize();
        q = K(inv) * q;
    }
    return q;
}

// pseudo-remainder: repeatedly scale by the divisor's leading coefficient
// so the division stays in the integral coefficient ring
template <class T>
Poly<T> prem(Poly<T> r, const Poly<T>& b) {
    const T d = b.lead();
    while (!r.is_zero() && r.degree() >= b.degree()) {
        T lr = r.lead();
        int k = r.degree() - b.degree();
        r = d * r - lr * poly_shift_up(b, k);
    }
    return r;
}

template <class K>
Poly<K> gcd_primitive_prs(Poly<K> a, Poly<K> b) {
    if (a.is_zero()) return make_monic(b);
    if (b.is_zero()) return make_monic(a);
    if (a.degree() == 0 || b.degree() == 0) return Poly<K>(K(1));
    a = to_primitive(a);
    b = to_primitive(b);
    if (a.degree() < b.degree()) std::swap(a, b);
    for (;;) {
        Poly<K> r = prem(a, b);
        if (r.is_zero()) break;
        if (r.degree() == 0) return Poly<K>(K(1));
        a = std::move(b);
        b = to_primitive(r);
    }
    return make_monic(b);
}

}  // namespace gcddetail

inline Poly<Rational> gcd_poly(const Poly<Rational>& a, const Poly<Rational>& b) {
    return gcddetail::gcd_primitive_prs(a, b);
}

inline Poly<GaussRational> gcd_poly(const Poly<GaussRational>& a, const Poly<GaussRational>& b) {
    return gcddetail::gcd_primitive_prs(a, b);
}

template <class T>
Poly<T> exact_div(const Poly<T>& a, const Poly<T>& b) {
    auto [q, r] = divrem(a, b);
    if (!r.is_zero()) throw Error("ZeroDenominator", "exact_div with nonzero remainder");
    return q;
}

// Taylor shift: p(x + a).
template <class T>
Poly<T> taylor_shift(const Poly<T>& p, const T& a) {
    return compose(p, Poly<T>(std::vector<T>{a, T(1)}));
}

template <class T, class F>
std::string poly_str(const Poly<T>& p, const std::string& var, F coeff_str) {
    if (p.is_zero()) return "0";
    std::string out;
    for (int k = p.degree(); k >= 0; --k) {
        if (p.coeff(k) == T{}) continue;
        if (!out.empty()) out += " + ";
        std::string cs = coeff_str(p.c[k]);
        if (k == 0) { out += cs; continue; }
        std::string xs = (k == 1) ? var : var + "^" + std::to_string(k);
        out += (cs == "1") ? xs : "(" + cs + ")*" + xs;
    }
    return out;
}

}  // namespace twocut
