#pragma once

// Differential polynomials in u(t). A monomial is
//     c * hbar^h * prod_j (d^j u / dt^j)^{e_j},
// where every t-derivative is the 1/N-normalized dot, so the grade
// h + sum_j j*e_j counts powers of 1/N. The explicit hbar exponent only
// appears when the dot derivative hits the bare time variable at the
// string-equation level; plain Gelfand-Dikii algebra keeps h = 0.
//
// t itself never enters a DiffPoly; polynomials in t with DiffPoly
// coefficients (TPoly) are layered on top via the generic Poly template.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "poly.hpp"

namespace twocut {

struct JetKey {
    int hpow = 0;
    std::vector<std::pair<int, int>> exps;  // (derivative order j, exponent >= 1), sorted by j

    friend bool operator==(const JetKey& a, const JetKey& b) {
        return a.hpow == b.hpow && a.exps == b.exps;
    }
    friend bool operator<(const JetKey& a, const JetKey& b) {
        if (a.hpow != b.hpow) return a.hpow < b.hpow;
        return a.exps < b.exps;
    }

    int grade() const {
        int g = hpow;
        for (auto& [j, e] : exps) g += j * e;
        return g;
    }
    int udeg() const {
        int d = 0;
        for (auto& [j, e] : exps) d += e;
        return d;
    }
    int max_order() const { return exps.empty() ? -1 : exps.back().first; }

    JetKey times(const JetKey& o) const {
        JetKey r;
        r.hpow = hpow + o.hpow;
        size_t i = 0, j = 0;
        while (i < exps.size() || j < o.exps.size()) {
            if (j == o.exps.size() || (i < exps.size() && exps[i].first < o.exps[j].first))
                r.exps.push_back(exps[i++]);
            else if (i == exps.size() || o.exps[j].first < exps[i].first)
                r.exps.push_back(o.exps[j++]);
            else {
                r.exps.emplace_back(exps[i].first, exps[i].second + o.exps[j].second);
                ++i, ++j;
            }
        }
        return r;
    }
};

template <class K>
struct DiffPoly {
    std::map<JetKey, K> m;  // canonical: sorted, no zero coefficients

    DiffPoly() = default;
    explicit DiffPoly(int n) {
        if (n != 0) m[JetKey{}] = K(n);
    }
    explicit DiffPoly(const K& c) {
        if (!(c == K{})) m[JetKey{}] = c;
    }
    static DiffPoly mono(const K& c, JetKey k) {
        DiffPoly p;
        if (!(c == K{})) p.m[std::move(k)] = c;
        return p;
    }
    // u itself
    static DiffPoly u_var(int order = 0, int exponent = 1) {
        JetKey k;
        k.exps = {{order, exponent}};
        return mono(K(1), k);
    }

    bool is_zero() const { return m.empty(); }

    friend bool operator==(const DiffPoly& a, const DiffPoly& b) { return a.m == b.m; }
    friend bool operator!=(const DiffPoly& a, const DiffPoly& b) { return !(a == b); }

    friend DiffPoly operator+(const DiffPoly& a, const DiffPoly& b) {
        DiffPoly r = a;
        for (auto& [k, c] : b.m) {
            auto it = r.m.find(k);
            if (it == r.m.end())
                r.m[k] = c;
            else {
                it->second = it->second + c;
                if (it->second == K{}) r.m.erase(it);
            }
        }
        return r;
    }
    friend DiffPoly operator-(const DiffPoly& a) {
        DiffPoly r;
        for (auto& [k, c] : a.m) r.m[k] = K{} - c;
        return r;
    }
    friend DiffPoly operator-(const DiffPoly& a, const DiffPoly& b) { return a + (-b); }
    friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
        DiffPoly r;
        for (auto& [ka, ca] : a.m)
            for (auto& [kb, cb] : b.m) {
                JetKey k = ka.times(kb);
                K c = ca * cb;
                auto it = r.m.find(k);
                if (it == r.m.end()) {
                    if (!(c == K{})) r.m[k] = c;
                } else {
                    it->second = it->second + c;
                    if (it->second == K{}) r.m.erase(it);
                }
            }
        return r;
    }
    friend DiffPoly operator*(const K& s, const DiffPoly& a) {
        DiffPoly r;
        if (s == K{}) return r;
        for (auto& [k, c] : a.m) r.m[k] = s * c;
        return r;
    }

    int max_order() const {
        int mo = -1;
        for (auto& [k, c] : m) mo = std::max(mo, k.max_order());
        return mo;
    }
    int max_grade() const {
        int g = 0;
        for (auto& [k, c] : m) g = std::max(g, k.grade());
        return g;
    }

    DiffPoly grade_part(int g) const {
        DiffPoly r;
        for (auto& [k, c] : m)
            if (k.grade() == g) r.m[k] = c;
        return r;
    }

    DiffPoly hbar_shift(int d) const {  // multiply by hbar^d
        DiffPoly r;
        for (auto& [k, c] : m) {
            JetKey kk = k;
            kk.hpow += d;
            r.m[kk] = c;
        }
        return r;
    }
};

// Dot derivative (1/N) d/dt acting on the u-jet.
template <class K>
DiffPoly<K> dot(const DiffPoly<K>& p) {
    DiffPoly<K> r;
    for (auto& [k, c] : p.m) {
        for (size_t i = 0; i < k.exps.size(); ++i) {
            auto [j, e] = k.exps[i];
            JetKey kk;
            kk.hpow = k.hpow;
            for (size_t l = 0; l < k.exps.size(); ++l) {
                if (l == i) {
                    if (e > 1) kk.exps.emplace_back(j, e - 1);
                } else
                    kk.exps.push_back(k.exps[l]);
            }
            JetKey up;
            up.exps = {{j + 1, 1}};
            kk = kk.times(up);
            r = r + DiffPoly<K>::mono(c * K(e), kk);
        }
    }
    return r;
}

namespace detail {

inline void enumerate_jets(int udeg, int grade, int min_order, JetKey& cur,
                           std::vector<JetKey>& out) {
    if (udeg == 0) {
        if (grade == 0) out.push_back(cur);
        return;
    }
    // the smallest derivative order used is j; remaining factors use > j
    for (int j = min_order; j * udeg <= grade; ++j) {
        for (int e = 1; e <= udeg && j * e <= grade; ++e) {
            int rem_d = udeg - e, rem_g = grade - j * e;
            if (rem_d > 0 && rem_g < (j + 1) * rem_d) continue;
            if (rem_d == 0 && rem_g != 0) continue;
            cur.exps.emplace_back(j, e);
            enumerate_jets(rem_d, rem_g, j + 1, cur, out);
            cur.exps.pop_back();
        }
    }
}

// All hbar-free monomial keys with the given u-degree and grade.
inline std::vector<JetKey> jet_basis(int udeg, int grade) {
    std::vector<JetKey> out;
    if (udeg == 0) {
        if (grade == 0) out.push_back(JetKey{});
        return out;
    }
    JetKey cur;
    enumerate_jets(udeg, grade, 0, cur, out);
    return out;
}

}  // namespace detail

// Formal t-antiderivative with zero integration constant: the unique Q with
// dot(Q) = p, found by exact linear algebra on the candidate monomial basis.
// Returns nullopt when p is not an exact derivative.
inline std::optional<DiffPoly<Rational>> antidifferentiate(const DiffPoly<Rational>& p) {
    using DP = DiffPoly<Rational>;
    if (p.is_zero()) return DP();
    // split by (udeg, grade); dot preserves udeg and raises grade by one
    std::map<std::pair<int, int>, DP> classes;
    for (auto& [k, c] : p.m) {
        if (k.hpow != 0) return std::nullopt;
        classes[{k.udeg(), k.grade()}] = classes[{k.udeg(), k.grade()}] + DP::mono(c, k);
    }
    DP result;
    for (auto& [dg, part] : classes) {
        auto [d, g] = dg;
        if (g == 0) return std::nullopt;  // grade-0 terms are never exact derivatives
        std::vector<JetKey> basis = detail::jet_basis(d, g - 1);
        std::vector<DP> images;
        images.reserve(basis.size());
        std::map<JetKey, int> rows;
        for (auto& b : basis) {
            DP img = dot(DP::mono(Rational(1), b));
            images.push_back(img);
            for (auto& [k, c] : img.m) rows.emplace(k, (int)rows.size());
        }
        for (auto& [k, c] : part.m) rows.emplace(k, (int)rows.size());
        int R = (int)rows.size(), C = (int)basis.size();
        std::vector<std::vector<Rational>> A(R, std::vector<Rational>(C + 1, Rational(0)));
        for (int j = 0; j < C; ++j)
            for (auto& [k, c] : images[j].m) A[rows[k]][j] = c;
        for (auto& [k, c] : part.m) A[rows[k]][C] = c;
        // Gaussian elimination
        std::vector<int> pivot_col(R, -1);
        int row = 0;
        for (int col = 0; col < C && row < R; ++col) {
            int pr = -1;
            for (int r = row; r < R; ++r)
                if (!rat_is_zero(A[r][col])) { pr = r; break; }
            if (pr < 0) continue;
            std::swap(A[row], A[pr]);
            Rational inv = 1 / A[row][col];
            for (int j = col; j <= C; ++j) A[row][j] *= inv;
            for (int r = 0; r < R; ++r) {
                if (r == row || rat_is_zero(A[r][col])) continue;
                Rational f = A[r][col];
                for (int j = col; j <= C; ++j) A[r][j] -= f * A[row][j];
            }
            pivot_col[row] = col;
            ++row;
        }
        for (int r = row; r < R; ++r)
            if (!rat_is_zero(A[r][C])) return std::nullopt;  // inconsistent
        std::vector<Rational> x(C, Rational(0));
        for (int r = 0; r < row; ++r)
            if (pivot_col[r] >= 0) x[pivot_col[r]] = A[r][C];
        for (int j = 0; j < C; ++j)
            if (!rat_is_zero(x[j])) result = result + DP::mono(x[j], basis[j]);
    }
    // verify by re-differentiation
    if (!(dot(result) == p)) return std::nullopt;
    return result;
}

// ---- printing ----

template <class K>
std::string jet_factor_str(int order, int exp) {
    std::string base = "u";
    if (order >= 1 && order <= 3)
        base += std::string(order, '\'');
    else if (order > 3)
        base += "^(" + std::to_string(order) + ")";
    if (exp == 1) return base;
    if (order == 0) return base + "^" + std::to_string(exp);
    return "(" + base + ")^" + std::to_string(exp);
}

template <class K>
std::string diffpoly_str(const DiffPoly<K>& p) {
    if (p.is_zero()) return "0";
    std::string out;
    // highest grade-0 terms first reads naturally for string equations
    std::vector<std::pair<JetKey, K>> terms(p.m.begin(), p.m.end());
    for (auto& [k, c] : terms) {
        std::string t;
        std::string cs = ScalarTraits<K>::str(c);
        bool neg = !cs.empty() && cs[0] == '-';
        std::string mag = neg ? cs.substr(1) : cs;
        std::string body;
        for (auto& [j, e] : k.exps) {
            if (!body.empty()) body += "*";
            body += jet_factor_str<K>(j, e);
        }
        for (int h = 0; h < k.hpow; ++h) body = (body.empty() ? "hbar" : "hbar*" + body);
        if (body.empty())
            t = mag;
        else
            t = (mag == "1") ? body : mag + "*" + body;
        if (out.empty())
            out = (neg ? "-" : "") + t;
        else
            out += (neg ? " - " : " + ") + t;
    }
    return out;
}

}  // namespace twocut
