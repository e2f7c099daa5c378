#pragma once

// Gelfand-Dikii recursion, string equations, Lax matrix towers,
// compatibility reduction and the Flashka-Newell gauge map.

#include <mutex>
#include <sstream>
#include <vector>

#include "diffpoly.hpp"

namespace twocut {

using DP = DiffPoly<Rational>;
using TP = Poly<DP>;   // polynomial in t, DiffPoly coefficients
using XP = Poly<DP>;   // polynomial in x, DiffPoly coefficients
using XT = Poly<TP>;   // polynomial in x, TPoly coefficients

struct GDPair {
    DP hatR, checkR;
};

// (2k)! / (2^{2k} (k!)^2)
inline Rational catalan_weight(int k) {
    mpz_class num, den, kf;
    mpz_fac_ui(num.get_mpz_t(), 2 * k);
    mpz_fac_ui(kf.get_mpz_t(), k);
    den = kf * kf;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), 2 * k);
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Modified Gelfand-Dikii polynomials hatR_k, checkR_k. checkR is the unique
// formal t-antiderivative of u * d/dt(hatR) with no constant term; exactness
// is re-verified on every step.
inline GDPair gd_polynomials(int k) {
    if (k < 0) throw Error("InvalidOrder", "gd_polynomials needs k >= 0");
    static std::vector<GDPair> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    if (cache.empty()) cache.push_back({DP::u_var(), Rational(1, 2) * (DP::u_var() * DP::u_var())});
    while ((int)cache.size() <= k) {
        const GDPair& prev = cache.back();
        DP hat = DP::u_var() * prev.checkR - Rational(1, 4) * dot(dot(prev.hatR));
        auto chk = antidifferentiate(DP::u_var() * dot(hat));
        if (!chk)
            throw Error("ExactnessFailure", "u * d/dt(hatR_k) is not an exact derivative");
        cache.push_back({hat, *chk});
    }
    return cache[k];
}

// Coefficient of the hbar-grade-0 monomial u^{2k+1} of hatR_k, asserted
// equal to (2k)!/(2^{2k}(k!)^2).
inline Rational leading_coefficient_check(int k) {
    DP g0 = gd_polynomials(k).hatR.grade_part(0);
    JetKey key;
    key.exps = {{0, 2 * k + 1}};
    DP expect = DP::mono(catalan_weight(k), key);
    if (!(g0 == expect))
        throw Error("LeadingCoefficientMismatch",
                    "grade-0 part of hatR_" + std::to_string(k) + " is " + diffpoly_str(g0));
    return catalan_weight(k);
}

// sum_k t_k hatR_k(u) + t u, kept as a polynomial in t so that t never
// enters the differential ring itself.
struct StringEquation {
    int m = 1;
    std::vector<Rational> times;  // t_1..t_m
    TP lhs;                       // = 0
};

inline StringEquation string_equation(int m, const std::vector<Rational>& times) {
    if (m < 1 || times.empty()) throw Error("InvalidOrder", "need m >= 1 and times t_1..t_m");
    if ((int)times.size() != m) throw Error("InvalidOrder", "times must have length m");
    StringEquation se;
    se.m = m;
    se.times = times;
    DP sum;
    for (int k = 1; k <= m; ++k) sum = sum + times[k - 1] * gd_polynomials(k).hatR;
    se.lhs = Poly<DP>(std::vector<DP>{sum, DP::u_var()});
    return se;
}

inline TP hgrade0(const TP& p) {
    std::vector<DP> v;
    for (auto& c : p.c) v.push_back(c.grade_part(0));
    return TP(std::move(v));
}

namespace detail {

inline std::string tpoly_str(const TP& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (int d = 0; d <= p.degree(); ++d) {
        DP c = p.coeff(d);
        for (auto& [k, coef] : c.m) {
            std::string cs = rat_str(coef);
            bool neg = !cs.empty() && cs[0] == '-';
            std::string mag = neg ? cs.substr(1) : cs;
            std::string body;
            for (int h = 0; h < k.hpow; ++h) body += body.empty() ? "hbar" : "*hbar";
            if (d >= 1) body += (body.empty() ? "" : "*") + std::string(d == 1 ? "t" : "t^" + std::to_string(d));
            for (auto& [j, e] : k.exps)
                body += (body.empty() ? "" : "*") + jet_factor_str<Rational>(j, e);
            std::string term = body.empty() ? mag : (mag == "1" ? body : mag + "*" + body);
            if (out.empty())
                out = (neg ? "-" : "") + term;
            else
                out += (neg ? " - " : " + ") + term;
        }
    }
    return out;
}

}  // namespace detail

// Plain-text normal form, e.g. m=1, t_1=1  ->  "u'' = 2*u^3 + 4*t*u".
inline std::string string_equation_normal_form(const StringEquation& se) {
    Rational tm = se.times.back();
    if (rat_is_zero(tm)) throw Error("InvalidOrder", "t_m must be nonzero for the normal form");
    Rational kappa = tm * poly_pow(Poly<Rational>(Rational(-1, 4)), se.m).coeff(0);
    JetKey top;
    top.exps = {{2 * se.m, 1}};
    TP rest = se.lhs - TP(DP::mono(kappa, top));
    Rational inv = Rational(-1) / kappa;
    std::vector<DP> v;
    for (auto& c : rest.c) v.push_back(inv * c);
    TP rhs(std::move(v));
    return jet_factor_str<Rational>(2 * se.m, 1) + " = " + detail::tpoly_str(rhs);
}

struct LaxEntries {
    XP A, B, C;  // t_k-weighted sums over k = 1..m
};

// A_0=0, B_0=0, C_0=1;  C_{k+1} = x^2 C_k + checkR_k,  B_{k+1} = x^2 B_k + hatR_k,
// A_{k+1} = x^2 A_k + (1/2) d/dt hatR_k.
inline LaxEntries lax_matrices(int m, const std::vector<Rational>& times) {
    if (m < 1 || (int)times.size() != m) throw Error("InvalidOrder", "need times t_1..t_m");
    XP Ak, Bk, Ck(DP(1));
    XP A, B, C;
    Poly<DP> x2 = poly_x<DP>(2, DP(1));
    for (int k = 1; k <= m; ++k) {
        GDPair p = gd_polynomials(k - 1);
        Ak = x2 * Ak + XP(Rational(1, 2) * dot(p.hatR));
        Bk = x2 * Bk + XP(p.hatR);
        Ck = x2 * Ck + XP(p.checkR);
        if (Ak.degree() > 2 * k - 2 || Bk.degree() > 2 * k - 2 || Ck.degree() > 2 * k)
            throw Error("InvalidOrder", "Lax entry degree bound violated");
        if (!rat_is_zero(times[k - 1])) {
            DP tk(times[k - 1]);
            A = A + tk * Ak;
            B = B + tk * Bk;
            C = C + tk * Ck;
        }
    }
    return {A, B, C};
}

template <class E>
struct Matrix2 {
    E e[2][2];
    friend Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
        Matrix2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                r.e[i][j] = a.e[i][0] * b.e[0][j] + a.e[i][1] * b.e[1][j];
        return r;
    }
    friend Matrix2 operator-(const Matrix2& a, const Matrix2& b) {
        Matrix2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.e[i][j] = a.e[i][j] - b.e[i][j];
        return r;
    }
    friend Matrix2 operator+(const Matrix2& a, const Matrix2& b) {
        Matrix2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.e[i][j] = a.e[i][j] + b.e[i][j];
        return r;
    }
    friend bool operator==(const Matrix2& a, const Matrix2& b) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                if (!(a.e[i][j] == b.e[i][j])) return false;
        return true;
    }
};

using Matrix2Sym = Matrix2<XT>;

namespace detail {

inline TP dot_t(const TP& p) {
    // (1/N) d/dt on a t-polynomial: differentiating t^d leaves one
    // explicit hbar behind
    std::vector<DP> v(std::max(1, p.degree() + 1), DP{});
    for (int d = 0; d <= p.degree(); ++d) {
        v[d] = v[d] + dot(p.coeff(d));
        if (d >= 1) v[d - 1] = v[d - 1] + Rational(d) * p.coeff(d).hbar_shift(1);
    }
    return TP(std::move(v));
}

inline XT dot_xt(const XT& p) {
    std::vector<TP> v;
    for (auto& c : p.c) v.push_back(dot_t(c));
    return XT(std::move(v));
}

inline XT lift_xt(const XP& p, int tdeg = 0) {
    std::vector<TP> v;
    for (auto& c : p.c) {
        std::vector<DP> tc(tdeg + 1, DP{});
        tc[tdeg] = c;
        v.push_back(TP(std::move(tc)));
    }
    return XT(std::move(v));
}

// Rewrite u^(J), J >= 2m, using the string equation and its t-derivatives.
inline TP reduce_mod_string(TP p, const StringEquation& se) {
    Rational tm = se.times.back();
    Rational kappa = tm;
    for (int i = 0; i < se.m; ++i) kappa *= Rational(-1, 4);
    int top_order = 2 * se.m;
    JetKey topkey;
    topkey.exps = {{top_order, 1}};
    TP low = TP(DP::mono(kappa, topkey)) - se.lhs;  // kappa*u^(2m) - S, orders < 2m
    std::vector<TP> lows = {low};                   // lows[r] = D^r(low)
    auto low_for = [&](int J) -> const TP& {
        while ((int)lows.size() <= J - top_order) lows.push_back(dot_t(lows.back()));
        return lows[J - top_order];
    };
    Rational invk = 1 / kappa;
    for (;;) {
        int J = -1, tdeg = -1;
        JetKey key;
        for (int d = 0; d <= p.degree() && J < 0; ++d)
            for (auto& [k, c] : p.coeff(d).m)
                if (k.max_order() > J && k.max_order() >= top_order) {
                    J = k.max_order();
                    key = k;
                    tdeg = d;
                }
        if (J < top_order) break;
        DP dcoef = p.coeff(tdeg);
        Rational c = dcoef.m.at(key);
        // remove one u^(J) factor from the monomial
        JetKey rest = key;
        for (auto& pr : rest.exps)
            if (pr.first == J) { pr.second -= 1; break; }
        rest.exps.erase(std::remove_if(rest.exps.begin(), rest.exps.end(),
                                       [](auto& pr) { return pr.second == 0; }),
                        rest.exps.end());
        // p -= c * t^tdeg * mono;  p += c * t^tdeg * rest * (low_J / kappa)
        std::vector<DP> mono_t(tdeg + 1, DP{});
        mono_t[tdeg] = DP::mono(c, key);
        p = p - TP(std::move(mono_t));
        std::vector<DP> rest_t(tdeg + 1, DP{});
        rest_t[tdeg] = DP::mono(c * invk, rest);
        p = p + TP(std::move(rest_t)) * low_for(J);
    }
    return p;
}

}  // namespace detail

struct CompatReport {
    bool ok = true;
    std::string witness;  // offending reduced entry, when not ok
};

// Residual of [ (1/N) d/dx - D , R - (1/N) d/dt ] reduced modulo the string
// equation. u(t) in R may be shifted by `perturb_u` to exercise the failure
// path. `time_scale` rescales all times t_k and t by a common rational; the
// 1/N bookkeeping follows the same factor so the verdict is scale-invariant.
inline CompatReport compatibility_check(int m, const std::vector<Rational>& times,
                                        const Rational& time_scale = Rational(1),
                                        const Rational& perturb_u = Rational(0)) {
    if (m < 1 || m > 2) throw Error("InvalidOrder", "compatibility_check supports m in {1,2}");
    std::vector<Rational> st = times;
    for (auto& t : st) t *= time_scale;
    LaxEntries lax = lax_matrices(m, st);
    StringEquation se = string_equation(m, times);
    // the reduction uses the scaled equation: multiply lhs by time_scale
    StringEquation se_scaled = se;
    {
        std::vector<DP> v;
        for (auto& c : se.lhs.c) v.push_back(time_scale * c);
        se_scaled.lhs = TP(std::move(v));
        se_scaled.times = st;
    }

    XT zero{};
    XT tA = detail::lift_xt(lax.A), tB = detail::lift_xt(lax.B), tC = detail::lift_xt(lax.C);
    // corner term: t0 == t with coefficient time_scale
    std::vector<DP> tlin(2, DP{});
    tlin[1] = DP(time_scale);
    XT corner{TP(std::vector<DP>(tlin))};
    XT xB = poly_shift_up(tB, 1);
    Matrix2Sym D;
    D.e[0][0] = -tA;
    D.e[0][1] = xB + tC + corner;
    D.e[1][0] = xB - tC - corner;
    D.e[1][1] = tA;

    DP u_pert = DP::u_var() + DP(perturb_u);
    XT uc{TP(u_pert)};
    XT xc = poly_x<TP>(1, TP(DP(1)));
    Matrix2Sym R;
    R.e[0][0] = zero;
    R.e[0][1] = xc + uc;
    R.e[1][0] = -xc + uc;
    R.e[1][1] = zero;

    // (1/N) dR/dx, carrying one explicit hbar and the time-scale factor
    DP hb = DP(time_scale).hbar_shift(1);
    Matrix2Sym Rx;
    Rx.e[0][0] = zero;
    Rx.e[0][1] = XT(TP(hb));
    Rx.e[1][0] = -XT(TP(hb));
    Rx.e[1][1] = zero;

    Matrix2Sym dotD;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) dotD.e[i][j] = detail::dot_xt(D.e[i][j]);

    Matrix2Sym residual = (dotD - Rx) + (D * R - R * D);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            XT red;
            {
                std::vector<TP> v;
                for (auto& c : residual.e[i][j].c)
                    v.push_back(detail::reduce_mod_string(c, se_scaled));
                red = XT(std::move(v));
            }
            if (!red.is_zero()) {
                CompatReport rep;
                rep.ok = false;
                std::ostringstream os;
                os << "entry (" << i << "," << j << ") x-degree " << red.degree();
                rep.witness = os.str();
                return rep;
            }
        }
    return {true, ""};
}

// ---- Flashka-Newell gauge (Gaussian rationals required) ----

using GDP = DiffPoly<GaussRational>;
using GXP = Poly<GDP>;
using Matrix2Gauss = Matrix2<GXP>;

inline GDP to_gauss(const DP& p) {
    GDP r;
    for (auto& [k, c] : p.m) r.m[k] = GaussRational(c);
    return r;
}

inline GXP to_gauss(const XP& p) {
    std::vector<GDP> v;
    for (auto& c : p.c) v.push_back(to_gauss(c));
    return GXP(std::move(v));
}

struct GaugePair {
    Matrix2Gauss Rtilde, Dtilde;
};

// J R J^{-1} and (4^{m+1}/2) J D_m J^{-1} with J = [[1, i], [i, 1]].
inline GaugePair flashka_newell_gauge(int m) {
    if (m < 1 || m > 2) throw Error("InvalidOrder", "flashka_newell_gauge supports m in {1,2}");
    GaussRational I = GaussRational::unit_i();
    GaussRational half(Rational(1, 2));
    Matrix2Gauss J, Jinv;
    J.e[0][0] = GXP(GDP(GaussRational(1)));
    J.e[0][1] = GXP(GDP(I));
    J.e[1][0] = GXP(GDP(I));
    J.e[1][1] = GXP(GDP(GaussRational(1)));
    Jinv.e[0][0] = GXP(GDP(half));
    Jinv.e[0][1] = GXP(GDP(GaussRational(Rational(0)) - half * I));
    Jinv.e[1][0] = Jinv.e[0][1];
    Jinv.e[1][1] = Jinv.e[0][0];

    GXP x = poly_x<GDP>(1, GDP(GaussRational(1)));
    GXP u{to_gauss(DP::u_var())};
    Matrix2Gauss R;
    R.e[0][0] = GXP{};
    R.e[0][1] = x + u;
    R.e[1][0] = -x + u;
    R.e[1][1] = GXP{};
    Matrix2Gauss Rt = J * R * Jinv;

    Matrix2Gauss expectR;
    GXP ix = poly_x<GDP>(1, GDP(I));
    expectR.e[0][0] = -ix;
    expectR.e[0][1] = u;
    expectR.e[1][0] = u;
    expectR.e[1][1] = ix;
    if (!(Rt == expectR)) throw Error("GaugeMismatch", "J R J^-1 is not [[-ix, u], [u, ix]]");

    // D_m alone (t_m = 1, all other times zero)
    std::vector<Rational> times(m, Rational(0));
    times[m - 1] = Rational(1);
    LaxEntries lax = lax_matrices(m, times);
    GXP A = to_gauss(lax.A), B = to_gauss(lax.B), C = to_gauss(lax.C);
    GXP xB = poly_shift_up(B, 1);
    Matrix2Gauss Dm;
    Dm.e[0][0] = -A;
    Dm.e[0][1] = xB + C;
    Dm.e[1][0] = xB - C;
    Dm.e[1][1] = A;
    Rational scale_q = 1;
    for (int i = 0; i < m + 1; ++i) scale_q *= 4;
    scale_q /= 2;
    GDP scale = GDP(GaussRational(scale_q));
    Matrix2Gauss Dt = J * Dm * Jinv;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) Dt.e[i][j] = scale * Dt.e[i][j];

    Matrix2Gauss expectD;
    GDP sc = scale, mi = GDP(GaussRational(Rational(0)) - I), pi = GDP(I);
    expectD.e[0][0] = sc * (mi * C);
    expectD.e[1][1] = sc * (pi * C);
    expectD.e[0][1] = sc * (pi * A + xB);
    expectD.e[1][0] = sc * (mi * A + xB);
    if (!(Dt == expectD))
        throw Error("GaugeMismatch", "J D_m J^-1 does not have the Flashka-Newell shape");
    return {Rt, Dt};
}

}  // namespace twocut
