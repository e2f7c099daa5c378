#pragma once

// Critical potential, critical temperature, gamma, the rescaled matrix-model
// curve, the Lax spectral curve, their coincidence, and the Zhukovsky
// parametrization identity suite.
//
// pi is never evaluated: rescaled-curve prefactors carry an explicit pi^2
// flag, and square roots are only ever compared through their squares or in
// the z-parametrization where everything is rational.

#include <vector>

#include "gd.hpp"
#include "laurent.hpp"

namespace twocut {

struct CriticalData {
    int m = 1;
    Rational b{1};
    Rational eps{0};

    void validate() const {
        if (m < 1) throw Error("InvalidOrder", "m must be >= 1");
        if (sgn(b) <= 0) throw Error("InvalidRegion", "b must be positive");
        if (abs(eps) >= 1) throw Error("InvalidRegion", "eps must lie in (-1, 1)");
    }
};

struct CurveSpec {
    int m = 1;
    std::vector<Rational> times;  // t_1..t_m
    Rational u0{1};

    static CurveSpec reduced(int m, const Rational& u0) {  // t_m = 1, others 0
        CurveSpec s;
        s.m = m;
        s.times.assign(m, Rational(0));
        s.times.back() = 1;
        s.u0 = u0;
        s.validate();
        return s;
    }
    void validate() const {
        if (m < 1 || (int)times.size() != m) throw Error("InvalidOrder", "need times t_1..t_m");
        bool nz = false;
        for (auto& t : times) nz = nz || !rat_is_zero(t);
        if (!nz) throw Error("InvalidOrder", "at least one time must be nonzero");
        if (rat_is_zero(u0)) throw Error("InvalidRegion", "u0 must be nonzero");
    }
};

inline Rational binom(int n, int k) {
    if (k < 0 || k > n) return Rational(0);
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return Rational(r);
}

inline Rational rat_pow(const Rational& q, int e) {
    Rational r(1);
    for (int i = 0; i < e; ++i) r *= q;
    return r;
}

inline mpz_class factorial(int n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

// V'_c of degree 2m+1: the polynomial part of (x - b*eps)^{2m} sqrt(x^2 - b^2)
// at infinity, written out coefficient by coefficient.
template <class K = Rational>
Poly<K> critical_potential(const CriticalData& cd) {
    cd.validate();
    int m = cd.m;
    std::vector<Rational> coef(2 * m + 2, Rational(0));
    for (int j = 0; j <= 2 * m + 1; ++j) {
        Rational c = binom(2 * m, j - 1) * rat_pow(-cd.b * cd.eps, 2 * m + 1 - j);
        int nmax = (2 * m + 1 - j) / 2;
        for (int n = 1; n <= nmax; ++n) {
            Rational num = factorial(2 * n - 2);
            Rational den = Rational(factorial(n)) * Rational(factorial(n - 1)) * rat_pow(Rational(2), 2 * n - 1);
            Rational sign = (j % 2 == 0) ? Rational(1) : Rational(-1);
            c += binom(2 * m, 2 * n + j - 1) * sign * num / den *
                 rat_pow(cd.eps, 2 * (m - n) + 1 - j) * rat_pow(cd.b, 2 * m + 1 - j);
        }
        coef[j] = c;
    }
    if constexpr (std::is_same_v<K, Rational>) {
        return Poly<Rational>(std::move(coef));
    } else {
        std::vector<K> v;
        for (auto& q : coef) v.push_back(ScalarTraits<K>::from_rational(q));
        return Poly<K>(std::move(v));
    }
}

// T_c = (b^{2m+2}/2) sum_{n=1}^{m+1} eps^{2m-2n+2} (2m)! / (n!(2m-2n+2)!(n-1)! 2^{2n-1})
inline Rational critical_temperature(const CriticalData& cd) {
    cd.validate();
    int m = cd.m;
    Rational sum(0);
    for (int n = 1; n <= m + 1; ++n) {
        Rational num = factorial(2 * m);
        Rational den = Rational(factorial(n)) * Rational(factorial(2 * m - 2 * n + 2)) *
                       Rational(factorial(n - 1)) * rat_pow(Rational(2), 2 * n - 1);
        sum += rat_pow(cd.eps, 2 * m - 2 * n + 2) * num / den;
    }
    return rat_pow(cd.b, 2 * m + 2) / 2 * sum;
}

// gamma^{2m}, negative rational; asserts the two closed forms agree.
inline Rational gamma_value(const CriticalData& cd) {
    cd.validate();
    int m = cd.m;
    Rational common = cd.b * cd.b * (1 - cd.eps * cd.eps);
    Rational formA = -Rational(factorial(m)) * Rational(factorial(m)) *
                     rat_pow(Rational(2), 2 * m + 1) / (common * Rational(factorial(2 * m)));
    Rational csum(0);
    for (int n = 0; n < m; ++n) csum += catalan_weight(n);
    Rational formB = Rational(-4 * m) / (common * csum);
    if (formA != formB)
        throw Error("GammaFormulaMismatch", "the two closed forms for gamma^{2m} disagree");
    return formA;
}

// hat-y(xi) = b pi sqrt(1-eps^2) sqrt(gamma^2 - xi^2) * (xi^{2m-1} + sum_n c_n gamma^{2n} xi^{2m-1-2n}).
// gamma^2 is carried as the formal variable g (inner polynomial), with
// g^m = gamma2m as the defining relation.
using PolyG = Poly<Rational>;     // polynomials in g = gamma^2
using PolyXiG = Poly<PolyG>;      // polynomials in xi over Q[g]

struct RescaledCurve {
    Rational prefactor_sq;  // (b sqrt(1-eps^2))^2, the pi^2 being structural
    bool pi_flag = true;    // prefactor carries one factor of pi
    PolyXiG odd_part;       // xi^{2m-1} + sum_{n=1}^{m-1} c_n g^n xi^{2m-1-2n}
    Rational gamma2m;       // value of g^m
};

inline RescaledCurve rescaled_curve(const CriticalData& cd) {
    cd.validate();
    int m = cd.m;
    RescaledCurve rc;
    rc.prefactor_sq = cd.b * cd.b * (1 - cd.eps * cd.eps);
    rc.gamma2m = gamma_value(cd);
    std::vector<PolyG> xi(2 * m, PolyG{});
    xi[2 * m - 1] = PolyG(Rational(1));
    for (int n = 1; n <= m - 1; ++n) xi[2 * m - 1 - 2 * n] = poly_x<Rational>(n, catalan_weight(n));
    rc.odd_part = PolyXiG(std::move(xi));
    return rc;
}

// S(x) = sum_j t_j sum_{k=0}^{j-1} x^{2(j-k)-1} c_k u0^{2k}; the Lax curve is
// y^2 = (u0^2 - x^2) S(x)^2.
template <class K>
Poly<K> lax_sum_poly(const CurveSpec& spec) {
    spec.validate();
    std::vector<Rational> s(2 * spec.m, Rational(0));
    for (int j = 1; j <= spec.m; ++j) {
        if (rat_is_zero(spec.times[j - 1])) continue;
        for (int k = 0; k < j; ++k)
            s[2 * (j - k) - 1] += spec.times[j - 1] * catalan_weight(k) * rat_pow(spec.u0, 2 * k);
    }
    std::vector<K> v;
    for (auto& q : s) v.push_back(ScalarTraits<K>::from_rational(q));
    return Poly<K>(std::move(v));
}

struct LaxCurve {
    Poly<Rational> P;           // y^2 as a polynomial in x, degree 4m
    Poly<Rational> sum_factor;  // S(x): P = (u0^2 - x^2) S^2
};

inline LaxCurve lax_curve(const CurveSpec& spec) {
    spec.validate();
    Poly<Rational> S = lax_sum_poly<Rational>(spec);
    Poly<Rational> u2x2(std::vector<Rational>{spec.u0 * spec.u0, Rational(0), Rational(-1)});
    Poly<Rational> P = u2x2 * S * S;

    // cross-check against det(y Id - D0) with B_0, C_0 from the Lax matrices
    // and t eliminated through the u0 equation
    Poly<Rational> B0, C0;
    for (int j = 1; j <= spec.m; ++j) {
        if (rat_is_zero(spec.times[j - 1])) continue;
        Rational tj = spec.times[j - 1];
        for (int k = 0; k < j; ++k)
            B0 = B0 + poly_x<Rational>(2 * (j - k) - 1,
                                       tj * catalan_weight(k) * rat_pow(spec.u0, 2 * k + 1));
        C0 = C0 + poly_x<Rational>(2 * j, tj);
        for (int k = 1; k <= j; ++k)
            C0 = C0 + poly_x<Rational>(2 * (j - k), tj * catalan_weight(k) * rat_pow(spec.u0, 2 * k));
    }
    Rational t(0);
    for (int j = 1; j <= spec.m; ++j)
        t -= spec.times[j - 1] * catalan_weight(j) * rat_pow(spec.u0, 2 * j);
    Poly<Rational> CT = C0 + Poly<Rational>(t);
    Poly<Rational> det = B0 * B0 - CT * CT;
    if (!(det == P)) throw Error("CurveMismatch", "det(y Id - D0) disagrees with the closed form");
    return {P, S};
}

struct MatchReport {
    Rational ratio;       // rational part of the constant
    int pi_power = 2;     // the constant is ratio * pi^pi_power
};

namespace detail {

inline PolyXiG reduce_g(const PolyXiG& p, int m, const Rational& g_m) {
    // reduce every coefficient modulo g^m - gamma2m
    std::vector<PolyG> v;
    for (auto& c : p.c) {
        PolyG r;
        for (int k = 0; k <= c.degree(); ++k) {
            int q = k / m, rem = k % m;
            r = r + poly_x<Rational>(rem, c.coeff(k) * rat_pow(g_m, q));
        }
        v.push_back(r);
    }
    return PolyXiG(std::move(v));
}

}  // namespace detail

// With times = (0,..,0,1) and u0^2 = gamma^2, hat-y^2 / y_Lax^2 must be a
// constant in xi; the measured constant is reported, never hard-coded.
inline MatchReport curves_match(const CriticalData& cd) {
    cd.validate();
    int m = cd.m;
    RescaledCurve rc = rescaled_curve(cd);

    // Lax side with u0^2 kept as the formal g
    std::vector<PolyG> s(2 * m, PolyG{});
    for (int k = 0; k <= m - 1; ++k) s[2 * (m - k) - 1] = poly_x<Rational>(k, catalan_weight(k));
    PolyXiG S(std::move(s));
    PolyXiG gxi2(std::vector<PolyG>{poly_x<Rational>(1), PolyG{}, PolyG(Rational(-1))});
    PolyXiG ylax2 = gxi2 * S * S;
    PolyXiG yres2_over_pi2 = PolyG(rc.prefactor_sq) * (gxi2 * (rc.odd_part * rc.odd_part));

    // measured constant from leading coefficients (both are g-free)
    PolyG lead_res = yres2_over_pi2.lead(), lead_lax = ylax2.lead();
    if (lead_res.degree() != 0 || lead_lax.degree() != 0)
        throw Error("MatchFailure", "leading coefficients are not g-free");
    Rational ratio = lead_res.coeff(0) / lead_lax.coeff(0);

    // exact constancy, both as an identity in Q[g] and in Q[g]/(g^m - gamma^{2m})
    PolyXiG diff = yres2_over_pi2 - PolyG(ratio) * ylax2;
    if (!diff.is_zero())
        throw Error("MatchFailure", "hat-y^2 / y_Lax^2 is not constant in xi");
    PolyXiG a = detail::reduce_g(yres2_over_pi2, m, rc.gamma2m);
    PolyXiG b = detail::reduce_g(PolyG(ratio) * ylax2, m, rc.gamma2m);
    if (!(a == b)) throw Error("MatchFailure", "mismatch after imposing g^m = gamma^{2m}");
    return {ratio, 2};
}

// ---- Zhukovsky parametrization x = u0 (z^2 + 1) / (2 z) ----

using G = GaussRational;
using RZ = RatFunc<G>;

inline RZ zhuk_x(const Rational& u0) {
    G u(u0);
    Poly<G> num(std::vector<G>{u / G(2), G(0), u / G(2)});
    return RZ(num, poly_x<G>(1));
}

inline RZ zhuk_dx(const Rational& u0) {
    G u(u0);
    Poly<G> num(std::vector<G>{G(0) - u / G(2), G(0), u / G(2)});
    return RZ(num, poly_x<G>(2));
}

// the z-rational branch of sqrt(u0^2 - x^2): i u0 (z+1)(z-1) / (2z)
inline RZ zhuk_sqrt(const Rational& u0) {
    G iu = GaussRational::unit_i() * G(u0);
    Poly<G> num(std::vector<G>{G(0) - iu / G(2), G(0), iu / G(2)});
    return RZ(num, poly_x<G>(1));
}

// Verifies the identity suite exactly as rational functions of z;
// throws IdentityFailure with the 1-based index of the first failure.
inline bool zhukovsky_identities(const Rational& u0) {
    if (rat_is_zero(u0)) throw Error("InvalidRegion", "u0 must be nonzero");
    G u(u0);
    RZ z(poly_x<G>(1));
    RZ x = zhuk_x(u0);
    auto fail = [](int idx) {
        throw Error("IdentityFailure", "Zhukovsky identity " + std::to_string(idx) + " failed");
    };
    // 1: x(z) = u0 (z^2+1) / (2z)
    if (!(x == RZ(Poly<G>(std::vector<G>{u / G(2), G(0), u / G(2)}), poly_x<G>(1)))) fail(1);
    // 2: u0 - x = -u0 (z-1)^2 / (2z)
    Poly<G> zm1(std::vector<G>{G(-1), G(1)}), zp1(std::vector<G>{G(1), G(1)});
    if (!(RZ(u) - x == RZ((G(0) - u / G(2)) * (zm1 * zm1), poly_x<G>(1)))) fail(2);
    // 3: u0 + x = u0 (z+1)^2 / (2z)
    if (!(RZ(u) + x == RZ((u / G(2)) * (zp1 * zp1), poly_x<G>(1)))) fail(3);
    // 4: (sqrt(u0^2 - x^2))^2 = (i u0 (z+1)(z-1) / (2z))^2
    RZ s = zhuk_sqrt(u0);
    if (!(RZ(u * u) - x * x == s * s)) fail(4);
    // 5: dx/dz = u0 (z^2 - 1) / (2 z^2)
    if (!(derivative(x) == zhuk_dx(u0))) fail(5);
    return true;
}

}  // namespace twocut
