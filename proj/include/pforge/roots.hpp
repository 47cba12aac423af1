#pragma once

// Real-root isolation for square-free integer polynomials: Sturm chains over
// exact rationals, bisection with exact sign evaluation, then a short Newton
// polish at extended precision.

#include "pforge/numeric.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace pforge {

struct NotSquareFree : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntPoly {
    std::vector<BigInt> c; // ascending: c[0] + c[1] x + ...

    int degree() const { return int(c.size()) - 1; }

    template <typename T>
    T eval(const T& x) const {
        T acc(0);
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + T(c[i]);
        return acc;
    }

    BigRat eval_rat(const BigRat& x) const {
        BigRat acc(0);
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + BigRat(c[i]);
        return acc;
    }

    IntPoly derivative() const {
        IntPoly d;
        for (std::size_t i = 1; i < c.size(); ++i) d.c.push_back(c[i] * BigInt(i));
        return d;
    }
};

namespace detail {

using RatPoly = std::vector<BigRat>; // ascending

inline void rp_trim(RatPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline RatPoly rp_from(const IntPoly& p) {
    RatPoly q;
    for (const auto& ci : p.c) q.push_back(BigRat(ci));
    rp_trim(q);
    return q;
}

inline RatPoly rp_rem(RatPoly a, const RatPoly& b) {
    while (a.size() >= b.size() && !a.empty()) {
        BigRat f = a.back() / b.back();
        std::size_t off = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
        a.pop_back();
        rp_trim(a);
    }
    return a;
}

inline int rp_sign_at(const RatPoly& p, const BigRat& x) {
    BigRat acc(0);
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc.sign();
}

inline int rp_sign_at_inf(const RatPoly& p, int dir) {
    if (p.empty()) return 0;
    int s = p.back().sign();
    if (dir < 0 && (p.size() - 1) % 2 == 1) s = -s;
    return s;
}

struct Sturm {
    std::vector<RatPoly> chain;

    explicit Sturm(const IntPoly& p) {
        chain.push_back(rp_from(p));
        chain.push_back(rp_from(p.derivative()));
        rp_trim(chain.back());
        while (chain.back().size() > 1 || (chain.back().size() == 1 && false)) {
            RatPoly r = rp_rem(chain[chain.size() - 2], chain.back());
            if (r.empty()) break;
            for (auto& x : r) x = -x;
            chain.push_back(std::move(r));
            if (chain.back().size() == 1) break;
        }
    }

    int variations_at(const BigRat& x) const {
        int v = 0, prev = 0;
        for (const auto& q : chain) {
            int s = rp_sign_at(q, x);
            if (s != 0) {
                if (prev != 0 && s != prev) ++v;
                prev = s;
            }
        }
        return v;
    }
    int variations_at_inf(int dir) const {
        int v = 0, prev = 0;
        for (const auto& q : chain) {
            int s = rp_sign_at_inf(q, dir);
            if (s != 0) {
                if (prev != 0 && s != prev) ++v;
                prev = s;
            }
        }
        return v;
    }
    // number of real roots in (a, b]
    int count(const BigRat& a, const BigRat& b) const { return variations_at(a) - variations_at(b); }
};

}  // namespace detail

inline bool square_free(const IntPoly& p) {
    detail::Sturm st(p);
    // gcd(p, p') is the last nonzero chain element; square-free iff constant
    return st.chain.back().size() <= 1;
}

inline int count_real_roots(const IntPoly& p) {
    detail::Sturm st(p);
    return st.variations_at_inf(-1) - st.variations_at_inf(+1);
}

// All real roots, ascending, certified by Sturm counts and refined to full
// working precision. Throws NotSquareFree when gcd(p, p') is non-constant.
inline std::vector<MpReal> isolate_real_roots(const IntPoly& p) {
    if (p.degree() < 1) return {};
    if (!square_free(p)) throw NotSquareFree("polynomial has repeated roots");
    detail::Sturm st(p);

    // Cauchy bound
    double lead = std::abs(p.c.back().convert_to<double>());
    double maxr = 0;
    for (std::size_t i = 0; i + 1 < p.c.size(); ++i)
        maxr = std::max(maxr, std::abs(p.c[i].convert_to<double>()) / lead);
    BigInt bound = BigInt(std::ceil(1 + maxr)) + 1;

    struct Iv {
        BigRat a, b;
        int cnt;
    };
    std::vector<Iv> work{{BigRat(-bound), BigRat(bound), st.count(BigRat(-bound), BigRat(bound))}};
    std::vector<Iv> isolated;
    while (!work.empty()) {
        Iv iv = work.back();
        work.pop_back();
        if (iv.cnt == 0) continue;
        if (iv.cnt == 1) {
            isolated.push_back(iv);
            continue;
        }
        BigRat m = (iv.a + iv.b) / 2;
        int left = st.count(iv.a, m);
        work.push_back({iv.a, m, left});
        work.push_back({m, iv.b, iv.cnt - left});
    }
    std::sort(isolated.begin(), isolated.end(), [](const Iv& x, const Iv& y) { return x.a < y.a; });

    std::vector<MpReal> roots;
    IntPoly dp = p.derivative();
    for (auto& iv : isolated) {
        // exact bisection until the bracket is tight enough for Newton
        BigRat a = iv.a, b = iv.b;
        int sa = st.chain.empty() ? 0 : detail::rp_sign_at(st.chain[0], a);
        if (sa == 0) { // endpoint is the root itself
            roots.push_back(to_mp(a));
            continue;
        }
        for (int it = 0; it < 80; ++it) {
            BigRat m = (a + b) / 2;
            int sm = detail::rp_sign_at(st.chain[0], m);
            if (sm == 0) {
                a = b = m;
                break;
            }
            if (sm == sa) a = m;
            else b = m;
        }
        MpReal x = (to_mp(a) + to_mp(b)) / 2;
        for (int it = 0; it < 64; ++it) {
            MpReal f = p.eval(x), df = dp.eval(x);
            if (df == 0) break;
            MpReal step = f / df;
            x -= step;
            if (abs(step) < abs(x) * MpReal("1e-48") + MpReal("1e-60")) break;
        }
        roots.push_back(x);
    }
    return roots;
}

}  // namespace pforge
