#pragma once

// Correlator differentials W_n^(g) on the Lax spectral curve, computed by
// the residue recursion with kernel
//     dE_z(w)/omega(z) = z^2 / (2 u0 y(z) (z - w)(1 - w z)),
// residues taken at z = +1 and z = -1, conjugate point 1/z.
//
// Everything is exact. The residue of G(z)/((z-w)(1-wz)) at z = a is
//     sum_k G_{-1-k} * f_k(w),   f_k(w) = [ -1/(w-a)^{k+1}
//                                           + w^{k+1}/(1-aw)^{k+1} ] / (1-w^2),
// so a correlator with all but one argument specialized to rationals is a
// rational function of the free argument, and one spectator may stay
// symbolic by running the same extraction over the function field Q(i)(v).
// Two symbolic spectators (needed for the z,1/z diagonals inside genus-one
// brackets) use the tower Q(i)(v1)(v2). That reaches every entry with
// g <= 2, i.e. the whole default ceiling 2g-2+n <= 4 and beyond in n.

#include <array>
#include <map>
#include <set>
#include <tuple>

#include "curves.hpp"

namespace twocut {

using F1 = RatFunc<G>;   // rational functions of one variable over Q(i)
using F2 = RatFunc<F1>;  // one more symbolic variable on top
using SK = LaurentSeries<G>;
using S1 = LaurentSeries<F1>;
using S2 = LaurentSeries<F2>;

namespace trdetail {

inline F1 f1_const(const G& c) { return F1(c); }
inline F2 f2_const(const G& c) { return F2(F1(c)); }
// embed a function of the inner variable v1 (constant in the outer one)
inline F2 f2_inner(const F1& c) { return F2(c); }
// reinterpret a univariate function as a function of the outer variable v2
inline F2 f2_outer(const F1& c) {
    auto lift = [](const Poly<G>& p) {
        std::vector<F1> v;
        for (auto& q : p.c) v.push_back(F1(q));
        return Poly<F1>(std::move(v));
    };
    return F2(lift(c.num), lift(c.den));
}

template <class CF>
CF lift_const(const G& c);
template <>
inline G trdetail::lift_const<G>(const G& c) { return c; }
template <>
inline F1 trdetail::lift_const<F1>(const G& c) { return F1(c); }
template <>
inline F2 trdetail::lift_const<F2>(const G& c) { return F2(F1(c)); }

template <class CF>
LaurentSeries<CF> lift_series(const SK& s) {
    LaurentSeries<CF> r;
    r.lo = s.lo;
    r.top = s.top;
    for (auto& c : s.a) r.a.push_back(trdetail::lift_const<CF>(c));
    return r;
}

enum class SlotKind { Rat, Sym1, Sym2 };

struct Slot {
    SlotKind kind = SlotKind::Rat;
    G value{};
    static Slot rat(const G& q) { return {SlotKind::Rat, q}; }
    static Slot sym1() { return {SlotKind::Sym1, G{}}; }
    static Slot sym2() { return {SlotKind::Sym2, G{}}; }
};

}  // namespace trdetail

struct LoopReport {
    bool ok = true;
    int poly_degree_x = -1;      // degree in x when ok
    std::string witness;         // pole location when not ok
};

// Table of correlators over one spectral curve (fixed m, times, u0).
class TRTable {
  public:
    explicit TRTable(const CurveSpec& spec, int ceiling = 4)
        : spec_(spec), ceiling_(ceiling) {
        spec_.validate();
        u0_ = G(spec_.u0);
        x_ = zhuk_x(spec_.u0);
        dx_ = zhuk_dx(spec_.u0);
        Poly<G> S = lax_sum_poly<G>(spec_);
        y_ = zhuk_sqrt(spec_.u0) * eval_poly<F1>(S, x_);
        w01_ = y_ * dx_;
        // the recursion kernel z^2/(2 u0 y (z-w)(1-wz)); the orientation of
        // the dE_z integral is fixed by the loop equations, which force the
        // opposite sign of the one printed alongside the recursion
        kpref_ = F1(Poly<G>(G(0)) - poly_x<G>(2)) / ((G(2) * u0_) * y_);
        registered_.insert({0, 1});
        registered_.insert({0, 2});
    }

    const CurveSpec& spec() const { return spec_; }
    int ceiling() const { return ceiling_; }
    const F1& x() const { return x_; }
    const F1& dx() const { return dx_; }
    const F1& y() const { return y_; }
    const F1& w01() const { return w01_; }

    // W_2^(0)(z1, z2) = 1/(z1 - z2)^2, as a function of the first slot
    static F1 w02(const G& z2) {
        Poly<G> d(std::vector<G>{G{} - z2, G(1)});
        return F1(Poly<G>(G(1)), d * d);
    }

    bool has(int g, int n) const { return registered_.count({g, n}) > 0; }

    // Registers (g, n) after checking every lower-level dependency is
    // present; the heavy evaluation work is memoized on demand.
    void compute(int g, int n) {
        if (g < 0 || n < 1 || 2 * g - 2 + n < 1)
            throw Error("InvalidOrder", "tr entries need 2g-2+n >= 1");
        if (2 * g - 2 + n > ceiling_)
            throw Error("DependencyMissing", "entry beyond the table ceiling");
        for (int gg = 0; gg <= g; ++gg)
            for (int nn = 1; 2 * gg - 2 + nn < 2 * g - 2 + n; ++nn) {
                if (2 * gg - 2 + nn < 1) continue;
                if (!has(gg, nn))
                    throw Error("DependencyMissing",
                                "level order violated: missing (" + std::to_string(gg) + "," +
                                    std::to_string(nn) + ")");
            }
        registered_.insert({g, n});
    }

    void fill() {
        for (int level = 1; level <= ceiling_; ++level)
            for (int g = 0; 2 * g <= level + 1; ++g) {
                int n = level + 2 - 2 * g;
                if (n >= 1) compute(g, n);
            }
    }

    // ---- exact access -------------------------------------------------

    // W as a rational function of its last argument, the others fixed.
    F1 specialize(int g, int n, std::vector<G> spectators) {
        if ((int)spectators.size() != n - 1)
            throw Error("InvalidOrder", "need n-1 spectator values");
        if (g == 0 && n == 1) return w01_;
        if (g == 0 && n == 2) return w02(spectators[0]);
        std::sort(spectators.begin(), spectators.end());
        auto key = std::make_tuple(g, n, spectators);
        auto it = univ_.find(key);
        if (it != univ_.end()) return it->second;
        F1 r = univ_compute(g, n, spectators);
        univ_.emplace(key, r);
        return r;
    }

    G eval(int g, int n, const std::vector<G>& pts) {
        if ((int)pts.size() != n) throw Error("InvalidOrder", "need n points");
        std::vector<G> sp(pts.begin(), pts.end() - 1);
        return eval_ratfunc(specialize(g, n, sp), pts.back());
    }

    // W_n^(g)(z, 1/z, rats) as a rational function of z
    F1 diag2(int g, int n, std::vector<G> rats) {
        if (n < 2 || (int)rats.size() != n - 2) throw Error("InvalidOrder", "diag2 arity");
        if (g == 0 && n == 2) {
            Poly<G> z2m1(std::vector<G>{G(-1), G(0), G(1)});
            return F1(poly_x<G>(2), z2m1 * z2m1);  // 1/(z - 1/z)^2
        }
        std::sort(rats.begin(), rats.end());
        auto key = std::make_tuple(g, n, rats);
        auto it = diag2_.find(key);
        if (it != diag2_.end()) return it->second;
        const Rep1& rep = rep1(g, n, rats);
        F1 out;
        for (int ai = 0; ai < 2; ++ai) {
            int a = ai == 0 ? 1 : -1;
            for (size_t k = 0; k < rep.ck[ai].size(); ++k)
                out += rep.ck[ai][k] * substitute_inv(fk_rat(a, (int)k));
        }
        diag2_.emplace(key, out);
        return out;
    }

    // W_n^(g)(z, z, rats): the same-sheet diagonal, regular for (g,n) != (0,2)
    F1 diag_eq(int g, int n, std::vector<G> rats) {
        if (g == 0 && n == 2)
            throw Error("SingularPoint", "W_2^(0) has a pole on the same-sheet diagonal");
        if (n < 2 || (int)rats.size() != n - 2) throw Error("InvalidOrder", "diag arity");
        std::sort(rats.begin(), rats.end());
        const Rep1& rep = rep1(g, n, rats);
        F1 out;
        for (int ai = 0; ai < 2; ++ai) {
            int a = ai == 0 ? 1 : -1;
            for (size_t k = 0; k < rep.ck[ai].size(); ++k)
                out += rep.ck[ai][k] * fk_rat(a, (int)k);
        }
        return out;
    }

    // regularized W_2^(0)(x, x) as a function of z (same sheet); equals the
    // diagonal of the z-form of W_2^(0)(x1, x2)
    F1 w20xx() const {
        Poly<G> z2m1(std::vector<G>{G(-1), G(0), G(1)});
        Poly<G> den = (u0_ * u0_) * (poly_pow(z2m1, 4));
        return F1(poly_x<G>(4, G(4)), den);
    }

    LoopReport loop_check(int g, int n, const std::vector<G>& zspect);

  private:
    using Key = std::tuple<int, int, std::vector<G>>;
    struct Rep1 {
        std::array<std::vector<F1>, 2> ck;  // [0] -> a=+1, [1] -> a=-1
    };
    struct Rep2 {
        std::array<std::vector<F2>, 2> ck;
    };

    CurveSpec spec_;
    int ceiling_;
    G u0_;
    F1 x_, dx_, y_, w01_, kpref_;
    std::set<std::pair<int, int>> registered_;
    std::map<Key, F1> univ_, diag2_;
    std::map<Key, Rep1> rep1_;
    std::map<Key, Rep2> rep2_;
    std::map<std::pair<int, std::vector<G>>, F2> diag2sym_;
    std::map<std::tuple<int, std::vector<G>, int, long>, S1> diag2sym_series_;
    std::map<std::tuple<int, int>, F1> fk_;
    std::map<std::pair<int, long>, SK> kpref_series_;
    std::map<std::tuple<int, int, bool, int, long>, SK> fk_series_;
    long series_top_ = 0;

    // f_k^(a)(w), the w-profile of the order-k residue coefficient at z=a
    F1 fk_rat(int a, int k) {
        auto key = std::make_tuple(a, k);
        auto it = fk_.find(key);
        if (it != fk_.end()) return it->second;
        G ga{Rational(a)};
        Poly<G> wma(std::vector<G>{G{} - ga, G(1)});       // w - a
        Poly<G> oneaw(std::vector<G>{G(1), G{} - ga});     // 1 - a w
        Poly<G> one_w2(std::vector<G>{G(1), G{}, G(-1)});  // 1 - w^2
        F1 t1(Poly<G>(G(-1)), poly_pow(wma, k + 1));
        F1 t2(poly_x<G>(k + 1), poly_pow(oneaw, k + 1));
        F1 r = (t1 + t2) / F1(one_w2);
        fk_.emplace(key, r);
        return r;
    }

    SK expand_at(const F1& f, int a, long top) const {
        return laurent_expand(f, ExpansionPoint<G>::at(G(Rational(a))), top);
    }

    SK kpref_series(int a, long top) {
        auto key = std::make_pair(a, top);
        auto it = kpref_series_.find(key);
        if (it != kpref_series_.end()) return it->second;
        SK r = expand_at(kpref_, a, top);
        kpref_series_.emplace(key, r);
        return r;
    }

    // series of f_k^{(af)} evaluated at z (inv=false) or 1/z (inv=true),
    // expanded around z = a
    SK fk_series(int af, int k, bool inv, int a, long top) {
        auto key = std::make_tuple(af, k, inv, a, top);
        auto it = fk_series_.find(key);
        if (it != fk_series_.end()) return it->second;
        F1 f = fk_rat(af, k);
        if (inv) f = substitute_inv(f);
        SK r = expand_at(f, a, top);
        fk_series_.emplace(key, r);
        return r;
    }

    static SK z_series(int a) {  // the identity function as a series at a
        SK s;
        s.lo = 0;
        s.a = {G(Rational(a)), G(1)};
        s.top = TOP_EXACT;
        return s;
    }

    template <class CF>
    LaurentSeries<CF> eval_f1_at(const F1& f, const LaurentSeries<CF>& s) const {
        auto horner = [&](const Poly<G>& p) {
            LaurentSeries<CF> acc = series_const(trdetail::lift_const<CF>(G{}));
            for (int k = p.degree(); k >= 0; --k)
                acc = acc * s + series_const(trdetail::lift_const<CF>(p.coeff(k)));
            return acc;
        };
        return horner(f.num) * inverse(horner(f.den));
    }

    S1 eval_f2_at(const F2& f, const S1& s) const {
        auto horner = [&](const Poly<F1>& p) {
            S1 acc;
            for (int k = p.degree(); k >= 0; --k) acc = acc * s + series_const(p.coeff(k));
            return acc;
        };
        return horner(f.num) * inverse(horner(f.den));
    }

    // series at z=a of 1/(zeta - s)^2 where zeta is z or 1/z and s is a
    // symbolic spectator embedded as `gen` in the coefficient field
    template <class CF>
    LaurentSeries<CF> w02_series_sym(const CF& gen, bool inv, int a, long top) {
        CF ga = trdetail::lift_const<CF>(G(Rational(a)));
        CF one = trdetail::lift_const<CF>(G(1));
        LaurentSeries<CF> out;
        out.top = top;
        if (!inv) {
            // 1/(z-s)^2 = sum_k (-1)^k (k+1) (z-a)^k / (a-s)^{k+2}
            CF c = ga - gen;
            CF cpow = one / (c * c);
            out.lo = 0;
            for (long k = 0; k <= top; ++k) {
                CF term = trdetail::lift_const<CF>(G(Rational((k % 2 == 0) ? (k + 1) : -(k + 1)))) * cpow;
                out.a.push_back(term);
                cpow = cpow / c;
            }
        } else {
            // z^2/(1-sz)^2 = z^2 * sum_k (k+1) s^k (z-a)^k / (1-sa)^{k+2}
            CF c = one - gen * ga;
            CF cpow = one / (c * c);
            CF spow = one;
            LaurentSeries<CF> base;
            base.top = top;
            base.lo = 0;
            for (long k = 0; k <= top; ++k) {
                base.a.push_back(trdetail::lift_const<CF>(G(Rational(k + 1))) * spow * cpow);
                cpow = cpow / c;
                spow = spow * gen;
            }
            LaurentSeries<CF> z2 = trdetail::lift_series<CF>(expand_at(F1(poly_x<G>(2)), a, top));
            out = z2 * base;
        }
        out.strip();
        return out;
    }

    const Rep1& rep1(int g, int n, const std::vector<G>& rats);
    const Rep2& rep2(int g, int n, const std::vector<G>& rats);

    // W_{n1}^{(0)}(z, 1/z, v, rats) as a rational function of z over Q(i)(v)
    const F2& diag2sym(int n1, const std::vector<G>& rats) {
        auto key = std::make_pair(n1, rats);
        auto it = diag2sym_.find(key);
        if (it != diag2sym_.end()) return it->second;
        const Rep2& rep = rep2(0, n1, rats);
        F2 out;
        for (int ai = 0; ai < 2; ++ai) {
            int af = ai == 0 ? 1 : -1;
            for (size_t k = 0; k < rep.ck[ai].size(); ++k)
                out += rep.ck[ai][k] * trdetail::f2_outer(substitute_inv(fk_rat(af, (int)k)));
        }
        return diag2sym_.emplace(key, std::move(out)).first->second;
    }

    S1 diag2sym_series(int n1, const std::vector<G>& rats, int a, long top) {
        auto key = std::make_tuple(n1, rats, a, top);
        auto it = diag2sym_series_.find(key);
        if (it != diag2sym_series_.end()) return it->second;
        const F2& d = diag2sym(n1, rats);
        S1 r = laurent_expand(d, ExpansionPoint<F1>::at(F1(G(Rational(a)))), top);
        diag2sym_series_.emplace(key, r);
        return r;
    }

    template <class CF>
    LaurentSeries<CF> factor_series(int h, const std::vector<trdetail::Slot>& args, bool inv,
                                    int a, long top);

    template <class CF>
    LaurentSeries<CF> bracket_series(int g, int n, const std::vector<trdetail::Slot>& spect,
                                     int a, long top);

    F1 univ_compute(int g, int n, const std::vector<G>& spectators);

    template <class CF>
    std::array<std::vector<CF>, 2> residue_coeffs(int g, int n,
                                                  const std::vector<trdetail::Slot>& spect);
};

// ---- implementation ----

template <class CF>
LaurentSeries<CF> TRTable::factor_series(int h, const std::vector<trdetail::Slot>& args,
                                         bool inv, int a, long top) {
    using trdetail::Slot;
    using trdetail::SlotKind;
    int cnt = (int)args.size() + 1;  // argument count of the factor correlator
    int nsym = 0;
    for (auto& s : args) nsym += (s.kind != SlotKind::Rat);

    if (h == 0 && cnt == 2) {
        const Slot& s = args[0];
        if (s.kind == SlotKind::Rat) {
            F1 f = w02(s.value);
            if (inv) f = substitute_inv(f);
            return trdetail::lift_series<CF>(expand_at(f, a, top));
        }
        if constexpr (std::is_same_v<CF, F1>) {
            return w02_series_sym<F1>(F1(poly_x<G>(1)), inv, a, top);
        } else if constexpr (std::is_same_v<CF, F2>) {
            CF gen = (s.kind == SlotKind::Sym1) ? trdetail::f2_inner(F1(poly_x<G>(1)))
                                                : F2(poly_x<F1>(1));
            return w02_series_sym<F2>(gen, inv, a, top);
        } else {
            throw Error("DependencyMissing", "symbolic spectator in a scalar bracket");
        }
    }

    if (nsym == 0) {
        std::vector<G> rats;
        for (auto& s : args) rats.push_back(s.value);
        F1 f = specialize(h, cnt, rats);
        if (inv) f = substitute_inv(f);
        return trdetail::lift_series<CF>(expand_at(f, a, top));
    }

    if (nsym == 1) {
        // one symbolic spectator: use the (v, ..., w) representation with
        // w composed to z or 1/z
        SlotKind sk = SlotKind::Rat;
        std::vector<G> rats;
        for (auto& s : args) {
            if (s.kind == SlotKind::Rat)
                rats.push_back(s.value);
            else
                sk = s.kind;
        }
        const Rep1& rep = rep1(h, cnt, rats);
        LaurentSeries<CF> out;
        out.top = top;
        for (int ai = 0; ai < 2; ++ai) {
            int af = ai == 0 ? 1 : -1;
            for (size_t k = 0; k < rep.ck[ai].size(); ++k) {
                CF c;
                if constexpr (std::is_same_v<CF, F1>) {
                    c = rep.ck[ai][k];
                } else if constexpr (std::is_same_v<CF, F2>) {
                    c = (sk == SlotKind::Sym1) ? trdetail::f2_inner(rep.ck[ai][k])
                                               : trdetail::f2_outer(rep.ck[ai][k]);
                } else {
                    throw Error("DependencyMissing", "symbolic spectator in a scalar bracket");
                }
                LaurentSeries<CF> fs =
                    trdetail::lift_series<CF>(fk_series(af, (int)k, inv, a, top));
                out = out + scale_series(c, fs);
            }
        }
        return out;
    }

    // two symbolic spectators: only genus-zero factors arise here
    if constexpr (std::is_same_v<CF, F2>) {
        if (h != 0)
            throw Error("DependencyMissing", "two symbolic spectators need a genus-0 factor");
        std::vector<G> rats;
        for (auto& s : args)
            if (s.kind == SlotKind::Rat) rats.push_back(s.value);
        const Rep2& rep = rep2(h, cnt, rats);
        S2 out;
        out.top = top;
        for (int ai = 0; ai < 2; ++ai) {
            int af = ai == 0 ? 1 : -1;
            for (size_t k = 0; k < rep.ck[ai].size(); ++k) {
                S2 fs = trdetail::lift_series<F2>(fk_series(af, (int)k, inv, a, top));
                out = out + scale_series(rep.ck[ai][k], fs);
            }
        }
        return out;
    }
    throw Error("DependencyMissing", "unsupported symbolic-slot pattern");
}

template <class CF>
LaurentSeries<CF> TRTable::bracket_series(int g, int n, const std::vector<trdetail::Slot>& spect,
                                          int a, long top) {
    using trdetail::Slot;
    using trdetail::SlotKind;
    LaurentSeries<CF> B;
    B.top = top;

    // diagonal term W_{n+1}^{(g-1)}(z, 1/z, spectators)
    if (g >= 1) {
        int nsym = 0;
        for (auto& s : spect) nsym += (s.kind != SlotKind::Rat);
        if (nsym == 0) {
            std::vector<G> rats;
            for (auto& s : spect) rats.push_back(s.value);
            F1 d = diag2(g - 1, n + 1, rats);
            B = B + trdetail::lift_series<CF>(expand_at(d, a, top));
        } else if (nsym == 1 && g - 1 == 0) {
            if constexpr (std::is_same_v<CF, F1>) {
                std::vector<G> rats;
                for (auto& s : spect)
                    if (s.kind == SlotKind::Rat) rats.push_back(s.value);
                B = B + diag2sym_series(n + 1, rats, a, top);
            } else {
                throw Error("DependencyMissing", "diagonal with symbolic spectator needs F1");
            }
        } else {
            throw Error("DependencyMissing",
                        "genus > 2 entries are outside the engine's symbolic reach");
        }
    }

    // sum over (h, I) excluding (0, empty) and (g, all)
    int S = (int)spect.size();
    for (int h = 0; h <= g; ++h) {
        for (unsigned mask = 0; mask < (1u << S); ++mask) {
            if (h == 0 && mask == 0) continue;
            if (h == g && mask + 1 == (1u << S)) continue;
            std::vector<Slot> I, Jc;
            for (int i = 0; i < S; ++i)
                ((mask >> i) & 1 ? I : Jc).push_back(spect[i]);
            if (h == 0 && I.empty()) continue;             // W_1^(0) never enters
            if (g - h == 0 && Jc.empty()) continue;
            LaurentSeries<CF> a1 = factor_series<CF>(h, I, false, a, top);
            LaurentSeries<CF> a2 = factor_series<CF>(g - h, Jc, true, a, top);
            B = B + a1 * a2;
        }
    }
    return B;
}

template <class CF>
std::array<std::vector<CF>, 2> TRTable::residue_coeffs(int g, int n,
                                                       const std::vector<trdetail::Slot>& spect) {
    std::array<std::vector<CF>, 2> out;
    long top = series_top_;
    for (int attempt = 0; attempt < 10; ++attempt) {
        bool ok = true;
        for (int ai = 0; ai < 2 && ok; ++ai) {
            int a = ai == 0 ? 1 : -1;
            LaurentSeries<CF> B = bracket_series<CF>(g, n, spect, a, top);
            LaurentSeries<CF> gt = B * trdetail::lift_series<CF>(kpref_series(a, top));
            if (gt.top < -1) {
                ok = false;
                break;
            }
            out[ai].clear();
            for (long k = 0; -1 - k >= gt.lowest() && !gt.is_zero(); ++k)
                out[ai].push_back(gt.coeff(-1 - k));
        }
        if (ok) return out;
        top = 2 * top + 2;
    }
    throw Error("InvalidOrder", "residue extraction failed to converge in series order");
}

inline const TRTable::Rep1& TRTable::rep1(int g, int n, const std::vector<G>& rats) {
    if (n < 2 || (int)rats.size() != n - 2) throw Error("InvalidOrder", "rep1 arity");
    auto key = std::make_tuple(g, n, rats);
    auto it = rep1_.find(key);
    if (it != rep1_.end()) return it->second;
    std::vector<trdetail::Slot> spect;
    spect.push_back(trdetail::Slot::sym1());
    for (auto& q : rats) spect.push_back(trdetail::Slot::rat(q));
    Rep1 rep;
    rep.ck = residue_coeffs<F1>(g, n, spect);
    return rep1_.emplace(key, std::move(rep)).first->second;
}

inline const TRTable::Rep2& TRTable::rep2(int g, int n, const std::vector<G>& rats) {
    if (g != 0) throw Error("DependencyMissing", "two-symbolic representations exist for g=0 only");
    if (n < 3 || (int)rats.size() != n - 3) throw Error("InvalidOrder", "rep2 arity");
    auto key = std::make_tuple(g, n, rats);
    auto it = rep2_.find(key);
    if (it != rep2_.end()) return it->second;
    std::vector<trdetail::Slot> spect;
    spect.push_back(trdetail::Slot::sym1());
    spect.push_back(trdetail::Slot::sym2());
    for (auto& q : rats) spect.push_back(trdetail::Slot::rat(q));
    Rep2 rep;
    rep.ck = residue_coeffs<F2>(g, n, spect);
    return rep2_.emplace(key, std::move(rep)).first->second;
}

inline F1 TRTable::univ_compute(int g, int n, const std::vector<G>& spectators) {
    std::vector<trdetail::Slot> spect;
    for (auto& q : spectators) spect.push_back(trdetail::Slot::rat(q));
    auto cks = residue_coeffs<G>(g, n, spect);
    F1 out;
    for (int ai = 0; ai < 2; ++ai) {
        int a = ai == 0 ? 1 : -1;
        for (size_t k = 0; k < cks[ai].size(); ++k)
            if (!cks[ai][k].is_zero()) out += F1(cks[ai][k]) * fk_rat(a, (int)k);
    }
    return out;
}

// The spec-level table entry handle and step operation.
struct Correlator {
    int g = 0, n = 1;
    TRTable* table = nullptr;

    G eval(const std::vector<G>& pts) const { return table->eval(g, n, pts); }
    F1 specialize(int free_slot, std::vector<G> others) const {
        (void)free_slot;  // symmetric: any slot may be the free one
        return table->specialize(g, n, std::move(others));
    }
};

inline Correlator tr_step(TRTable& table, int g, int n) {
    table.compute(g, n);
    return Correlator{g, n, &table};
}

inline Correlator base_w01(TRTable& table) { return Correlator{0, 1, &table}; }
inline Correlator base_w02(TRTable& table) { return Correlator{0, 2, &table}; }

// Loop-equation check at level (g, n): the polynomial
//   P(x) = W_{s+2}^{(g-1)}(x, x, J)
//        + sum_{h, I subset J} W_{1+|I|}^{(h)}(x, I) W_{1+s-|I|}^{(g-h)}(x, J\I)
//        + sum_j d/dx_j [ (W_s^{(g)}(x, J\{x_j}) - W_s^{(g)}(J)) / (x - x_j) ]
// with s = n-1 spectators J. Built as a function of z, it must be invariant
// under z -> 1/z with poles only at z = 0 and infinity, i.e. a polynomial
// in x. The middle sum runs unrestricted; x-space W's differ from the
// z-space differentials by the Jacobians and, for (0,2), the double pole.
inline LoopReport TRTable::loop_check(int g, int n, const std::vector<G>& zspect) {
    int s = n - 1;
    if ((int)zspect.size() != s) throw Error("InvalidOrder", "need n-1 spectator points");
    for (int i = 0; i < s; ++i) {
        const G& z = zspect[i];
        if (z.is_zero() || z == G(1) || z == G(-1))
            throw Error("InvalidRegion", "spectator points must avoid 0 and +-1");
        for (int j = i + 1; j < s; ++j)
            if (z == zspect[j] || z * zspect[j] == G(1))
                throw Error("InvalidRegion", "spectator points must have distinct x-values");
    }

    auto dxval = [&](const G& q) { return eval_ratfunc(dx_, q); };
    auto xval = [&](const G& q) { return eval_ratfunc(x_, q); };

    // W_{1+others}(x(.), x(others)) as a rational function of the free slot
    auto Wz = [&](int h, const std::vector<G>& others) -> F1 {
        int cnt = 1 + (int)others.size();
        F1 w = specialize(h, cnt, others);
        G dprod(1);
        for (auto& q : others) dprod *= dxval(q);
        F1 conv = w / (dx_ * F1(dprod));
        if (h == 0 && cnt == 2) {
            F1 d = x_ - F1(xval(others[0]));
            conv = conv - F1(G(1)) / (d * d);
        }
        return conv;
    };

    F1 P;
    if (g >= 1) {
        if (g - 1 == 0 && s + 2 == 2) {
            P += w20xx();
        } else {
            F1 d = diag_eq(g - 1, s + 2, zspect);
            G dprod(1);
            for (auto& q : zspect) dprod *= dxval(q);
            P += d / (dx_ * dx_ * F1(dprod));
        }
    }

    for (int h = 0; h <= g; ++h) {
        for (unsigned mask = 0; mask < (1u << s); ++mask) {
            std::vector<G> I, Jc;
            for (int i = 0; i < s; ++i) ((mask >> i) & 1 ? I : Jc).push_back(zspect[i]);
            P += Wz(h, I) * Wz(g - h, Jc);
        }
    }

    for (int j = 0; j < s; ++j) {
        std::vector<G> others;
        for (int i = 0; i < s; ++i)
            if (i != j) others.push_back(zspect[i]);
        F1 W = Wz(g, others);  // W_s^{(g)} as a function of its free slot
        const G& qj = zspect[j];
        G xj = xval(qj), xpj = dxval(qj);
        G Wq = eval_ratfunc(W, qj);
        G Wp = eval_ratfunc(derivative(W), qj);
        F1 dpole = x_ - F1(xj);
        P += F1(G{} - Wp / xpj) / dpole + (W - F1(Wq)) / (dpole * dpole);
    }

    LoopReport rep;
    if (!(substitute_inv(P) == P)) {
        rep.ok = false;
        rep.witness = "not invariant under z -> 1/z";
        return rep;
    }
    const Poly<G>& den = P.den;
    if (!(den == poly_x<G>(den.degree()))) {
        rep.ok = false;
        auto vanishes = [&](const G& q) { return eval_poly<G>(den, q) == G{}; };
        if (vanishes(G(1)) || vanishes(G(-1)))
            rep.witness = "residual pole at z = +-1";
        else {
            rep.witness = "residual pole away from 0";
            for (auto& q : zspect)
                if (vanishes(q) || vanishes(G(1) / q)) rep.witness = "residual pole at a spectator";
        }
        return rep;
    }
    rep.ok = true;
    rep.poly_degree_x = P.num.degree() - den.degree();
    return rep;
}

}  // namespace twocut
