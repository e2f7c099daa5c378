#pragma once

// Rational functions num/den over a coefficient field F, kept in canonical
// form: numerator and denominator coprime, denominator monic. With that
// normalization value equality is component equality, and RatFunc<F> is
// itself a field, so towers like RatFunc<RatFunc<K>> provide multivariate
// rational functions when needed.

#include <utility>

#include "poly.hpp"

namespace twocut {

template <class F>
struct RatFunc {
    Poly<F> num, den;

    RatFunc() : num(), den(F(1)) {}
    RatFunc(const F& a) : num(a), den(F(1)) {}
    explicit RatFunc(int n) : num(F(n)), den(F(1)) {}
    RatFunc(const Poly<F>& n) : num(n), den(F(1)) {}
    RatFunc(Poly<F> n, Poly<F> d) : num(std::move(n)), den(std::move(d)) { normalize(); }

    void normalize() {
        if (den.is_zero()) throw Error("ZeroDenominator", "rational function with zero denominator");
        if (num.is_zero()) { den = Poly<F>(F(1)); return; }
        if (den.degree() == 0) {
            F inv = F(1) / den.c[0];
            num = inv * num;
            den = Poly<F>(F(1));
            return;
        }
        Poly<F> g = gcd_poly(num, den);
        if (g.degree() > 0) {
            num = exact_div(num, g);
            den = exact_div(den, g);
        }
        F lc = den.lead();
        if (!(lc == F(1))) {
            F inv = F(1) / lc;
            num = inv * num;
            den = inv * den;
        }
    }

    bool is_zero() const { return num.is_zero(); }

    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    RatFunc operator-() const {
        RatFunc r = *this;
        r.num = -r.num;
        return r;
    }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num * b.num, a.den * b.den);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw Error("ZeroDenominator", "division by zero rational function");
        return RatFunc(a.num * b.den, a.den * b.num);
    }
    RatFunc& operator+=(const RatFunc& b) { return *this = *this + b; }
    RatFunc& operator-=(const RatFunc& b) { return *this = *this - b; }
    RatFunc& operator*=(const RatFunc& b) { return *this = *this * b; }
    RatFunc& operator/=(const RatFunc& b) { return *this = *this / b; }
};

// Canonical-form constructor named after the operation it performs.
template <class F>
RatFunc<F> ratfunc_normalize(const Poly<F>& num, const Poly<F>& den) {
    return RatFunc<F>(num, den);
}

// Fraction-free gcd for polynomials whose coefficients are themselves
// rational functions: clear the coefficient denominators, run a primitive
// pseudo-remainder sequence over the nested polynomial ring, and strip both
// the polynomial and the integer content after every step. This keeps the
// function-field towers used by the residue recursion tractable.

namespace gcddetail {

template <class K>
Poly<K> poly_content(const Poly<Poly<K>>& p) {
    Poly<K> g;
    for (auto& c : p.c) {
        g = gcd_poly(g, c);
        if (!g.is_zero() && g.degree() == 0) break;
    }
    return g;
}

template <class K>
Poly<Poly<K>> strip_all_content(Poly<Poly<K>> p) {
    if (p.is_zero()) return p;
    mpz_class L(1);
    for (auto& c : p.c)
        for (auto& s : c.c) IntegralOps<K>::lcm_den(L, s);
    if (L != 1) {
        K f = K(Rational(L));
        for (auto& c : p.c) c = f * c;
    }
    mpz_class g(0);
    for (auto& c : p.c)
        for (auto& s : c.c) IntegralOps<K>::gcd_num(g, s);
    if (g > 1) {
        Rational inv(mpz_class(1), g);
        inv.canonicalize();
        K f = K(inv);
        for (auto& c : p.c) c = f * c;
    }
    Poly<K> ct = poly_content(p);
    if (ct.degree() > 0) {
        std::vector<Poly<K>> v;
        for (auto& c : p.c) v.push_back(exact_div(c, ct));
        p = Poly<Poly<K>>(std::move(v));
    }
    return p;
}

}  // namespace gcddetail

template <class K>
Poly<RatFunc<K>> gcd_poly(const Poly<RatFunc<K>>& A, const Poly<RatFunc<K>>& B) {
    using F = RatFunc<K>;
    if (A.is_zero()) return make_monic(B);
    if (B.is_zero()) return make_monic(A);
    if (A.degree() == 0 || B.degree() == 0) return Poly<F>(F(1));
    auto clear = [](const Poly<F>& P) {
        Poly<K> D(K(1));
        for (auto& c : P.c) {
            if (c.den.degree() > 0) {
                Poly<K> gg = gcd_poly(D, c.den);
                D = D * (gg.degree() > 0 ? exact_div(c.den, gg) : c.den);
            }
        }
        std::vector<Poly<K>> v;
        for (auto& c : P.c) v.push_back(c.num * exact_div(D, c.den));
        return Poly<Poly<K>>(std::move(v));
    };
    Poly<Poly<K>> a = gcddetail::strip_all_content(clear(A));
    Poly<Poly<K>> b = gcddetail::strip_all_content(clear(B));
    if (a.degree() < b.degree()) std::swap(a, b);
    for (;;) {
        Poly<Poly<K>> r = gcddetail::prem(a, b);
        if (r.is_zero()) break;
        if (r.degree() == 0) return Poly<F>(F(1));
        a = std::move(b);
        b = gcddetail::strip_all_content(std::move(r));
    }
    std::vector<F> out;
    for (auto& c : b.c) out.push_back(F(c));
    return make_monic(Poly<F>(std::move(out)));
}

template <class F>
F eval_ratfunc(const RatFunc<F>& f, const F& x) {
    F d = eval_poly(f.den, x);
    if (d == F{}) throw Error("SingularPoint", "evaluation at a pole");
    return eval_poly(f.num, x) / d;
}

template <class F>
RatFunc<F> derivative(const RatFunc<F>& f) {
    return RatFunc<F>(derivative(f.num) * f.den - f.num * derivative(f.den), f.den * f.den);
}

// f((a x + b) / (c x + d)), exact.
template <class F>
RatFunc<F> substitute_mobius(const RatFunc<F>& f, const F& a, const F& b, const F& c, const F& d) {
    Poly<F> up(std::vector<F>{b, a}), dn(std::vector<F>{d, c});
    int M = std::max(f.num.degree(), f.den.degree());
    auto lift = [&](const Poly<F>& p) {
        Poly<F> acc;
        for (int k = 0; k <= p.degree(); ++k) {
            if (p.coeff(k) == F{}) continue;
            acc = acc + p.coeff(k) * (poly_pow(up, k) * poly_pow(dn, M - k));
        }
        return acc;
    };
    return RatFunc<F>(lift(f.num), lift(f.den));
}

template <class F>
RatFunc<F> substitute_inv(const RatFunc<F>& f) {  // f(1/x)
    return substitute_mobius(f, F{}, F(1), F(1), F{});
}

// General substitution f(g(x)).
template <class F>
RatFunc<F> substitute(const RatFunc<F>& f, const RatFunc<F>& g) {
    RatFunc<F> n = eval_poly<RatFunc<F>>(f.num, g);
    RatFunc<F> d = eval_poly<RatFunc<F>>(f.den, g);
    return n / d;
}

}  // namespace twocut
