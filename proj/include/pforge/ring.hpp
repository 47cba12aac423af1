#pragma once

// Fusion ring with nu = 2n+1 invertible objects g^k and nu non-invertible
// objects g^k.r, subject to g^nu = 1, g.r = r.g^{nu-1}, r^2 = 1 + sum_k g^k.r.
// Objects are dense ids: 0..nu-1 invertible (power k), nu..2nu-1 the r-types.

#include "pforge/numeric.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace pforge {

using Obj = std::uint8_t;

struct Zeta {
    int n;
    int sign;      // +1 or -1
    QuadExt exact; // (nu +/- m*sqrt(D0))/2 with nu^2+4 = m^2*D0, D0 square-free

    double d() const { return exact.d(); }
    MpReal mp() const { return exact.mp(); }
};

inline Zeta zeta(int n, int sign) {
    std::int64_t nu = 2 * n + 1;
    std::int64_t m, d0;
    squarefree_split(nu * nu + 4, m, d0);
    QuadExt z(BigRat(nu, 2), BigRat(sign * m, 2), d0);
    return Zeta{n, sign, z};
}

struct AxiomReport {
    bool pass = true;
    std::vector<std::string> violations;
};

class Ring {
  public:
    explicit Ring(int n) : n_(n), nu_(2 * n + 1) {
        const int m = 2 * nu_;
        table_.assign(m * m, {});
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                table_[a * m + b] = multiply(Obj(a), Obj(b));
    }

    int n() const { return n_; }
    int nu() const { return nu_; }
    int num_objects() const { return 2 * nu_; }

    bool invertible(Obj x) const { return x < nu_; }
    int power(Obj x) const { return invertible(x) ? x : x - nu_; }
    Obj unit() const { return 0; }
    Obj inv_obj(int k) const { return Obj(mod(k)); }
    Obj rho_obj(int k) const { return Obj(nu_ + mod(k)); }

    Obj dual(Obj x) const { return invertible(x) ? inv_obj(-power(x)) : x; }

    // g^h * x and x * g^h
    Obj left_mul(int h, Obj x) const {
        return invertible(x) ? inv_obj(h + power(x)) : rho_obj(h + power(x));
    }
    Obj right_mul(Obj x, int h) const {
        return invertible(x) ? inv_obj(power(x) + h) : rho_obj(power(x) - h);
    }

    const std::vector<Obj>& channels(Obj a, Obj b) const { return table_[a * 2 * nu_ + b]; }

    bool contains(Obj a, Obj b, Obj c) const {
        if (invertible(a)) {
            if (invertible(b)) return invertible(c) && power(c) == mod(power(a) + power(b));
            return !invertible(c) && power(c) == mod(power(a) + power(b));
        }
        if (invertible(b)) return !invertible(c) && power(c) == mod(power(a) - power(b));
        if (invertible(c)) return power(c) == mod(power(a) - power(b));
        return true; // r-type times r-type contains every r-type once
    }

    int coeff(Obj a, Obj b, Obj c) const { return contains(a, b, c) ? 1 : 0; }

    std::string name(Obj x) const {
        std::string s;
        int k = power(x);
        if (invertible(x)) {
            if (k == 0) return "1";
            s = "g";
            if (k > 1) s += "^" + std::to_string(k);
            return s;
        }
        if (k == 0) return "r";
        s = "g";
        if (k > 1) s += "^" + std::to_string(k);
        return s + ".r";
    }

    // Verifies unit, associativity and duality on the stored table. The table
    // may have been tampered with by tests; report, do not throw.
    AxiomReport check_axioms() const {
        AxiomReport rep;
        const int m = 2 * nu_;
        auto N = [&](Obj a, Obj b, Obj c) -> int {
            const auto& ch = table_[a * m + b];
            return std::find(ch.begin(), ch.end(), c) != ch.end() ? 1 : 0;
        };
        for (int a = 0; a < m && rep.violations.size() < 8; ++a) {
            for (int b = 0; b < m; ++b) {
                if (N(0, a, b) != (a == b ? 1 : 0)) {
                    rep.violations.push_back("unit failure at (" + name(Obj(a)) + "," + name(Obj(b)) + ")");
                }
            }
        }
        for (int a = 0; a < m && rep.violations.size() < 8; ++a)
            for (int b = 0; b < m; ++b)
                for (int c = 0; c < m; ++c)
                    for (int d = 0; d < m; ++d) {
                        int lhs = 0, rhs = 0;
                        for (int e = 0; e < m; ++e) lhs += N(Obj(a), Obj(b), Obj(e)) * N(Obj(e), Obj(c), Obj(d));
                        for (int f = 0; f < m; ++f) rhs += N(Obj(b), Obj(c), Obj(f)) * N(Obj(a), Obj(f), Obj(d));
                        if (lhs != rhs) {
                            rep.violations.push_back("associativity failure at (" + name(Obj(a)) + "," +
                                                     name(Obj(b)) + "," + name(Obj(c)) + "," + name(Obj(d)) + ")");
                            if (rep.violations.size() >= 8) goto dual_check;
                        }
                    }
    dual_check:
        for (int a = 0; a < m && rep.violations.size() < 8; ++a) {
            if (N(Obj(a), dual(Obj(a)), 0) != 1)
                rep.violations.push_back("dual failure: 1 not in " + name(Obj(a)) + " x " + name(dual(Obj(a))));
            for (int b = 0; b < m; ++b)
                for (int c = 0; c < m; ++c)
                    if (N(Obj(a), Obj(b), Obj(c)) != N(dual(Obj(b)), dual(Obj(a)), dual(Obj(c)))) {
                        rep.violations.push_back("dual compatibility failure at (" + name(Obj(a)) + "," +
                                                 name(Obj(b)) + ")");
                    }
        }
        rep.pass = rep.violations.empty();
        return rep;
    }

    // Test hook: damage the stored table (check_axioms reads the table).
    void corrupt_drop_channel(Obj a, Obj b, Obj c) {
        auto& ch = table_[a * 2 * nu_ + b];
        ch.erase(std::remove(ch.begin(), ch.end(), c), ch.end());
    }

  private:
    int mod(int k) const {
        k %= nu_;
        return k < 0 ? k + nu_ : k;
    }

    std::vector<Obj> multiply(Obj a, Obj b) const {
        std::vector<Obj> out;
        if (invertible(a) && invertible(b)) {
            out.push_back(inv_obj(power(a) + power(b)));
        } else if (invertible(a)) {
            out.push_back(rho_obj(power(a) + power(b)));
        } else if (invertible(b)) {
            out.push_back(rho_obj(power(a) - power(b)));
        } else {
            out.push_back(inv_obj(power(a) - power(b)));
            for (int k = 0; k < nu_; ++k) out.push_back(rho_obj(k));
        }
        return out;
    }

    int n_;
    int nu_;
    std::vector<std::vector<Obj>> table_;
};

}  // namespace pforge
