#pragma once

// Truncated Laurent series, the expansion/residue machinery built on them,
// and the Pol( . ) operator extracting polynomial parts at infinity.
//
// A series holds exact coefficients for exponents lo..top. Exponents below
// lo are exactly zero; nothing is claimed beyond top. Constants and
// polynomials are exact, with top = TOP_EXACT.

#include <limits>
#include <vector>

#include "ratfunc.hpp"

namespace twocut {

inline constexpr long TOP_EXACT = std::numeric_limits<long>::max() / 4;

template <class T>
struct LaurentSeries {
    long lo = 0;
    std::vector<T> a;  // a[i] = coefficient of (z - point)^(lo + i)
    long top = TOP_EXACT;

    void strip() {
        while (!a.empty() && a.front() == T{}) {
            a.erase(a.begin());
            ++lo;
        }
        if (a.empty()) lo = 0;
    }

    bool is_zero() const { return a.empty(); }
    long lowest() const { return lo; }

    T coeff(long e) const {
        if (e > top) throw Error("InvalidOrder", "Laurent coefficient beyond truncation order");
        if (e < lo || e >= lo + (long)a.size()) return T{};
        return a[e - lo];
    }

    void truncate(long new_top) {
        if (new_top < top) {
            top = new_top;
            long keep = new_top - lo + 1;
            if (keep < 0) keep = 0;
            if ((long)a.size() > keep) a.resize(keep);
            strip();
        }
    }
};

template <class T>
LaurentSeries<T> series_const(const T& c) {
    LaurentSeries<T> s;
    if (!(c == T{})) s.a = {c};
    return s;
}

template <class T>
LaurentSeries<T> operator+(const LaurentSeries<T>& x, const LaurentSeries<T>& y) {
    LaurentSeries<T> r;
    r.top = std::min(x.top, y.top);
    if (x.is_zero() && y.is_zero()) return r;
    long lo = x.is_zero() ? y.lo : (y.is_zero() ? x.lo : std::min(x.lo, y.lo));
    long hi = std::min(r.top, std::max(x.lo + (long)x.a.size(), y.lo + (long)y.a.size()) - 1);
    r.lo = lo;
    if (hi >= lo) {
        r.a.assign(hi - lo + 1, T{});
        for (long e = lo; e <= hi; ++e) {
            T v{};
            if (e >= x.lo && e < x.lo + (long)x.a.size()) v = v + x.a[e - x.lo];
            if (e >= y.lo && e < y.lo + (long)y.a.size()) v = v + y.a[e - y.lo];
            r.a[e - lo] = v;
        }
    }
    r.strip();
    return r;
}

template <class T>
LaurentSeries<T> operator-(const LaurentSeries<T>& x) {
    LaurentSeries<T> r = x;
    for (auto& v : r.a) v = T{} - v;
    return r;
}

template <class T>
LaurentSeries<T> operator-(const LaurentSeries<T>& x, const LaurentSeries<T>& y) {
    return x + (-y);
}

template <class T>
LaurentSeries<T> operator*(const LaurentSeries<T>& x, const LaurentSeries<T>& y) {
    LaurentSeries<T> r;
    auto sat = [](long t, long l) { return t >= TOP_EXACT ? TOP_EXACT : t + l; };
    r.top = std::min(sat(x.top, y.lo), sat(y.top, x.lo));
    if (x.is_zero() || y.is_zero()) return r;
    r.lo = x.lo + y.lo;
    long hi = std::min(r.top, r.lo + (long)x.a.size() + (long)y.a.size() - 2);
    if (hi < r.lo) { r.a.clear(); return r; }
    r.a.assign(hi - r.lo + 1, T{});
    for (size_t i = 0; i < x.a.size(); ++i) {
        if (x.a[i] == T{}) continue;
        for (size_t j = 0; j < y.a.size(); ++j) {
            long e = x.lo + (long)i + y.lo + (long)j;
            if (e > hi) break;
            r.a[e - r.lo] = r.a[e - r.lo] + x.a[i] * y.a[j];
        }
    }
    r.strip();
    return r;
}

template <class T>
LaurentSeries<T> scale_series(const T& c, const LaurentSeries<T>& x) {
    LaurentSeries<T> r = x;
    for (auto& v : r.a) v = c * v;
    r.strip();
    return r;
}

// Multiplicative inverse; the leading coefficient must be a unit.
template <class T>
LaurentSeries<T> inverse(const LaurentSeries<T>& x) {
    if (x.is_zero()) throw Error("ZeroDenominator", "inverse of zero series");
    long rel = (x.top >= TOP_EXACT) ? (long)x.a.size() - 1 + 16 : x.top - x.lo;
    T inv0 = T(1) / x.a[0];
    std::vector<T> b(rel + 1, T{});
    b[0] = inv0;
    for (long n = 1; n <= rel; ++n) {
        T s{};
        for (long k = 1; k <= n && k < (long)x.a.size(); ++k) s = s + x.a[k] * b[n - k];
        b[n] = T{} - inv0 * s;
    }
    LaurentSeries<T> r;
    r.lo = -x.lo;
    r.a = std::move(b);
    r.top = (x.top >= TOP_EXACT) ? -x.lo + rel : x.top - 2 * x.lo;
    r.truncate(r.top);
    r.strip();
    return r;
}

// ---- power-series helpers on coefficient vectors (index = power) ----

template <class T>
std::vector<T> ps_mul(const std::vector<T>& a, const std::vector<T>& b, size_t len) {
    std::vector<T> r(len, T{});
    for (size_t i = 0; i < a.size() && i < len; ++i)
        for (size_t j = 0; j < b.size() && i + j < len; ++j) r[i + j] = r[i + j] + a[i] * b[j];
    return r;
}

template <class T>
std::vector<T> ps_inv(const std::vector<T>& a, size_t len) {
    std::vector<T> b(len, T{});
    T inv0 = T(1) / a[0];
    b[0] = inv0;
    for (size_t n = 1; n < len; ++n) {
        T s{};
        for (size_t k = 1; k <= n && k < a.size(); ++k) s = s + a[k] * b[n - k];
        b[n] = T{} - inv0 * s;
    }
    return b;
}

// Square root of a power series with constant term 1.
template <class T>
std::vector<T> ps_sqrt1(const std::vector<T>& a, size_t len) {
    std::vector<T> t(len, T{});
    t[0] = T(1);
    T half = T(1) / T(2);
    for (size_t n = 1; n < len; ++n) {
        T s = (n < a.size()) ? a[n] : T{};
        for (size_t i = 1; i < n; ++i) s = s - t[i] * t[n - i];
        t[n] = half * s;
    }
    return t;
}

// ---- expansions of rational functions ----

template <class F>
struct ExpansionPoint {
    bool at_infinity = false;
    F value{};
    static ExpansionPoint infinity() { return {true, F{}}; }
    static ExpansionPoint at(const F& v) { return {false, v}; }
};

namespace detail {

// Laurent data of f at a finite point, coefficients valid through `order`.
template <class F>
LaurentSeries<F> expand_finite(const RatFunc<F>& f, const F& p, long order) {
    LaurentSeries<F> zero;
    zero.top = order;
    if (f.is_zero()) return zero;
    Poly<F> nu = taylor_shift(f.num, p), du = taylor_shift(f.den, p);
    long kn = 0, kd = 0;
    while (nu.coeff(kn) == F{}) ++kn;
    while (du.coeff(kd) == F{}) ++kd;
    long lo = kn - kd;
    if (order < lo) return zero;
    size_t len = order - lo + 1;
    std::vector<F> nv(nu.c.begin() + kn, nu.c.end());
    std::vector<F> dv(du.c.begin() + kd, du.c.end());
    std::vector<F> res = ps_mul(nv, ps_inv(dv, len), len);
    LaurentSeries<F> s;
    s.lo = lo;
    s.a = std::move(res);
    s.top = order;
    s.strip();
    return s;
}

}  // namespace detail

// Laurent expansion at a finite point or at infinity. At infinity the
// returned exponents refer to powers of w = 1/z, so coeff(k) multiplies
// z^(-k); `order` bounds the w-exponent.
template <class F>
LaurentSeries<F> laurent_expand(const RatFunc<F>& f, const ExpansionPoint<F>& pt, long order) {
    if (!pt.at_infinity) return detail::expand_finite(f, pt.value, order);
    RatFunc<F> g = substitute_inv(f);
    return detail::expand_finite(g, F{}, order);
}

template <class F>
F residue_at(const RatFunc<F>& f, const ExpansionPoint<F>& pt) {
    if (!pt.at_infinity) {
        auto s = detail::expand_finite(f, pt.value, 0);
        return s.coeff(-1);
    }
    RatFunc<F> g = substitute_inv(f);
    auto s = detail::expand_finite(g, F{}, 1);
    return F{} - s.coeff(1);
}

// Pol( numer / sqrt(sqrt_arg) ) at infinity, with the branch
// sqrt(sqrt_arg) ~ z^(deg/2) there. sqrt_arg must be monic of even degree.
template <class F>
Poly<F> polynomial_part_at_infinity(const Poly<F>& numer, const Poly<F>& sqrt_arg) {
    int deg = sqrt_arg.degree();
    if (deg < 0 || deg % 2 != 0 || !(sqrt_arg.lead() == F(1)))
        throw Error("InvalidBranchData", "sqrt argument must be monic of even degree");
    int d = deg / 2;
    if (numer.degree() < d) return {};
    size_t len = numer.degree() - d + 1;
    // sqrt_arg = z^deg * (1 + u(1/z)); u coefficients indexed by powers of 1/z
    std::vector<F> u(len, F{});
    for (size_t k = 1; k < len; ++k) u[k] = sqrt_arg.coeff(deg - (int)k);
    u[0] = F(1);
    std::vector<F> s = ps_inv(ps_sqrt1(u, len), len);
    // numer * z^{-d} * s: coefficient of z^e for e >= 0
    std::vector<F> out(numer.degree() - d + 1, F{});
    for (int e = 0; e <= numer.degree() - d; ++e) {
        F acc{};
        for (size_t k = 0; k < len; ++k) {
            int j = e + d + (int)k;
            if (j > numer.degree()) break;
            acc = acc + numer.coeff(j) * s[k];
        }
        out[e] = acc;
    }
    return Poly<F>(std::move(out));
}

}  // namespace twocut
