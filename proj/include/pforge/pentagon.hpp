#pragma once

// Pentagon instances over the reduced classes, assembled into an exact
// polynomial system in the class variables v0..v_{V-1} and the symbols
// z (loop value) and s (z^{-1/2}), with ground relations
//   z^2 - (2n+1) z - 1 = 0   and   s^2 z - 1 = 0.
//
// An instance is labelled by outer objects (A,B,C,D,E) and internal
// (F,G,K,L) subject to F in AB, G in FC, E in GD, L in CD, K in BL, E in AK;
// the identity reads
//   V(F,C,D,E;G,L) V(A,B,L,E;F,K)
//     = sum_H V(A,B,C,G;F,H) V(A,H,D,E;G,K) V(B,C,D,K;H,L),
// with H running over BC channels with G in AH and K in HD. Factors whose
// key fails admissibility vanish.

#include "pforge/classes.hpp"

#include <cstring>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

namespace pforge {

struct Monomial {
    std::int64_t coeff = 0;
    std::uint8_t zdeg = 0, sdeg = 0;
    std::vector<std::pair<std::uint16_t, std::uint8_t>> vars; // sorted by var id

    int total_vdeg() const {
        int t = 0;
        for (auto& [v, e] : vars) t += e;
        return t;
    }
};

inline bool monomial_less(const Monomial& x, const Monomial& y) {
    int tx = x.total_vdeg(), ty = y.total_vdeg();
    if (tx != ty) return tx > ty;
    if (x.vars != y.vars) return x.vars < y.vars;
    if (x.zdeg != y.zdeg) return x.zdeg > y.zdeg;
    return x.sdeg > y.sdeg;
}

inline bool same_support(const Monomial& x, const Monomial& y) {
    return x.zdeg == y.zdeg && x.sdeg == y.sdeg && x.vars == y.vars;
}

struct Poly {
    std::vector<Monomial> terms; // canonical: sorted, combined, lead coeff > 0

    void canonicalize() {
        std::sort(terms.begin(), terms.end(), monomial_less);
        std::vector<Monomial> out;
        for (auto& m : terms) {
            if (!out.empty() && same_support(out.back(), m)) out.back().coeff += m.coeff;
            else out.push_back(m);
        }
        out.erase(std::remove_if(out.begin(), out.end(), [](const Monomial& m) { return m.coeff == 0; }),
                  out.end());
        if (!out.empty() && out.front().coeff < 0)
            for (auto& m : out) m.coeff = -m.coeff;
        terms = std::move(out);
    }

    bool zero() const { return terms.empty(); }

    std::string fingerprint() const {
        std::string s;
        s.reserve(terms.size() * 12);
        for (const auto& m : terms) {
            std::int64_t c = m.coeff;
            s.append(reinterpret_cast<const char*>(&c), 8);
            s.push_back(char(m.zdeg));
            s.push_back(char(m.sdeg));
            s.push_back(char(m.vars.size()));
            for (auto& [v, e] : m.vars) {
                s.append(reinterpret_cast<const char*>(&v), 2);
                s.push_back(char(e));
            }
        }
        return s;
    }

    bool operator==(const Poly& o) const { return fingerprint() == o.fingerprint(); }
};

template <typename C>
struct Assignment {
    std::vector<C> v;
    C z, s;
};

template <typename C>
C eval_monomial(const Monomial& m, const Assignment<C>& a) {
    C x(double(m.coeff));
    for (int i = 0; i < m.zdeg; ++i) x *= a.z;
    for (int i = 0; i < m.sdeg; ++i) x *= a.s;
    for (auto& [v, e] : m.vars)
        for (int i = 0; i < e; ++i) x *= a.v[v];
    return x;
}

struct PolySystem {
    int n = 0;
    Group group = Group::None;
    int nvars = 0;
    std::vector<Poly> polys; // pentagon equations first, then ground relations
    int num_ground = 0;

    bool operator==(const PolySystem& o) const {
        return n == o.n && group == o.group && nvars == o.nvars && num_ground == o.num_ground &&
               polys == o.polys;
    }

    template <typename C>
    std::vector<typename scalar_of<C>::type> residuals(const Assignment<C>& a, bool relative = false) const {
        using R = typename scalar_of<C>::type;
        if (int(a.v.size()) != nvars) throw DimensionMismatch("assignment has wrong dimension");
        std::vector<R> out;
        out.reserve(polys.size());
        for (const auto& p : polys) {
            C acc(0);
            R scale(1);
            for (const auto& m : p.terms) {
                C t = eval_monomial(m, a);
                acc += t;
                if (relative) scale = std::max(scale, R(abs(t)));
            }
            out.push_back(R(abs(acc)) / scale);
        }
        return out;
    }

    template <typename C>
    typename scalar_of<C>::type max_residual(const Assignment<C>& a, bool relative = false) const {
        using R = typename scalar_of<C>::type;
        R mx(0);
        for (const R& r : residuals(a, relative)) mx = std::max(mx, r);
        return mx;
    }
};

namespace detail {

struct Factor {
    // kind: 0 zero, 1 fixed s^sp, 2 variable
    int kind;
    int sp;
    int var;
};

inline Factor factor_of(const Ring& R, const ClassTable& T, const FKey& k, bool check_full) {
    if (check_full && !admissible(R, k)) return {0, 0, -1};
    std::int32_t code = T.value_code(k);
    if (code >= 0) return {2, 0, code};
    return {1, -(code + 1), -1};
}

struct TermAcc {
    std::int64_t c = 1;
    int s = 0;
    std::uint16_t vs[3];
    int nv = 0;

    bool mul(const Factor& f) {
        if (f.kind == 0) return false;
        if (f.kind == 1) s += f.sp;
        else vs[nv++] = std::uint16_t(f.var);
        return true;
    }

    Monomial monomial(std::int64_t sign) const {
        Monomial m;
        m.coeff = sign * c;
        m.sdeg = std::uint8_t(s);
        std::uint16_t sorted[3];
        std::copy(vs, vs + nv, sorted);
        std::sort(sorted, sorted + nv);
        for (int i = 0; i < nv;) {
            int j = i;
            while (j < nv && sorted[j] == sorted[i]) ++j;
            m.vars.push_back({sorted[i], std::uint8_t(j - i)});
            i = j;
        }
        return m;
    }
};

}  // namespace detail

struct GenerateOpts {
    bool full_outer = true; // false: one outer tuple per invariance orbit
};

// Builds the deduplicated pentagon system. With full_outer the iteration runs
// over every outer tuple (the quotient makes shifted instances collapse to the
// same canonical polynomial); without it only the representative slice
// A=B=C=D=r, F in {1, r} is visited, which reaches every instance orbit.
inline PolySystem generate(const Ring& R, const ClassTable& T, const GenerateOpts& opts = {}) {
    PolySystem sys;
    sys.n = R.n();
    sys.group = T.group();
    sys.nvars = T.var_count();

    std::unordered_set<std::string> seen;

    auto emit_instance = [&](Obj a, Obj b, Obj c, Obj d, Obj e, Obj f1, Obj g, Obj k, Obj l) {
        Poly p;
        detail::TermAcc lhs;
        bool lhs_ok = lhs.mul(detail::factor_of(R, T, make_key(f1, c, d, e, g, l), true)) &&
                      lhs.mul(detail::factor_of(R, T, make_key(a, b, l, e, f1, k), true));
        if (lhs_ok) p.terms.push_back(lhs.monomial(+1));
        bool any_rhs = false;
        for (const Obj h : R.channels(b, c)) {
            if (!R.contains(a, h, g) || !R.contains(h, d, k)) continue;
            detail::TermAcc t;
            bool ok = t.mul(detail::factor_of(R, T, make_key(a, b, c, g, f1, h), false)) &&
                      t.mul(detail::factor_of(R, T, make_key(a, h, d, e, g, k), false)) &&
                      t.mul(detail::factor_of(R, T, make_key(b, c, d, k, h, l), false));
            if (ok) {
                p.terms.push_back(t.monomial(-1));
                any_rhs = true;
            }
        }
        if (!lhs_ok && !any_rhs) return;
        p.canonicalize();
        if (p.zero()) return;
        if (seen.insert(p.fingerprint()).second) sys.polys.push_back(std::move(p));
    };

    auto scan_inner = [&](Obj a, Obj b, Obj c, Obj d, Obj f1) {
        for (const Obj g : R.channels(f1, c))
            for (const Obj e : R.channels(g, d))
                for (const Obj l : R.channels(c, d))
                    for (const Obj k : R.channels(b, l)) {
                        if (!R.contains(a, k, e)) continue;
                        emit_instance(a, b, c, d, e, f1, g, k, l);
                    }
    };

    const int m = R.num_objects();
    if (opts.full_outer) {
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                for (int c = 0; c < m; ++c)
                    for (int d = 0; d < m; ++d)
                        for (const Obj f1 : R.channels(Obj(a), Obj(b)))
                            scan_inner(Obj(a), Obj(b), Obj(c), Obj(d), f1);
    } else {
        Obj r0 = Obj(R.nu());
        scan_inner(r0, r0, r0, r0, R.unit());
        scan_inner(r0, r0, r0, r0, r0);
    }

    // ground relations
    {
        Poly zq; // z^2 - (2n+1) z - 1
        zq.terms.push_back(Monomial{1, 2, 0, {}});
        zq.terms.push_back(Monomial{-(2 * std::int64_t(R.n()) + 1), 1, 0, {}});
        zq.terms.push_back(Monomial{-1, 0, 0, {}});
        zq.canonicalize();
        Poly sq; // s^2 z - 1
        sq.terms.push_back(Monomial{1, 1, 2, {}});
        sq.terms.push_back(Monomial{-1, 0, 0, {}});
        sq.canonicalize();
        sys.polys.push_back(std::move(zq));
        sys.polys.push_back(std::move(sq));
        sys.num_ground = 2;
    }
    return sys;
}

inline PolySystem generate_quotient(const Ring& R, const ClassTable& T) {
    GenerateOpts o;
    o.full_outer = false;
    return generate(R, T, o);
}

}  // namespace pforge
