#pragma once

// Checks against every claim a solution must satisfy: pentagon residuals,
// unitarity, gauge invariants, automorphism orbits and the graph-calculus
// identities (loop, theta, the two mixed-channel identities, tetrahedra).

#include "pforge/solve.hpp"
#include "pforge/tetra.hpp"

#include <set>

namespace pforge {

struct NotClosed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// F-symbol value of an arbitrary admissible key under a solution.
template <typename C>
struct FEval {
    const Ring* R;
    const ClassTable* T;
    const std::vector<C>* v;
    C z, s;

    C operator()(const FKey& k) const {
        std::int32_t code = T->value_code(k);
        if (code >= 0) return (*v)[code];
        C x(1);
        for (int i = 0; i < -(code + 1); ++i) x *= s;
        return x;
    }
};

inline FEval<Cd> evaluator(const Ring& R, const ClassTable& T, const Solution& sol) {
    return FEval<Cd>{&R, &T, &sol.v, sol.z, sol.s};
}
inline FEval<MpComplex> evaluator_mp(const Ring& R, const ClassTable& T, const Solution& sol) {
    return FEval<MpComplex>{&R, &T, &sol.v_mp, sol.z_mp, sol.s_mp};
}

inline double residual(const Ring& R, const ClassTable& T, const PolySystem& sys, const Solution& sol) {
    return sys.max_residual(sol.assignment());
}

inline Cd gauge_invariant(const ClassTable& T, const Solution& sol) {
    return sol.v[T.var_of_cell(0, 0)];
}

// ---------------------------------------------------------------------------
// Unitarity

struct UnitarityReport {
    double dev_ffdag = 0;  // max |F F^dag - I|
    double dev_cross = 0;  // max |F^{abc}_d F^{bcd}_a - I|
    bool unitary = false;
};

inline UnitarityReport unitarity(const Ring& R, const ClassTable& T, const Solution& sol,
                                 double tol = 1e-9) {
    auto F = evaluator(R, T, sol);
    const int nu = R.nu();
    UnitarityReport rep;

    auto rows_of = [&](Obj a, Obj b, Obj c, Obj d) {
        std::vector<Obj> rows;
        for (const Obj e : R.channels(a, b))
            if (R.contains(e, c, d)) rows.push_back(e);
        return rows;
    };
    auto cols_of = [&](Obj a, Obj b, Obj c, Obj d) {
        std::vector<Obj> cols;
        for (const Obj f : R.channels(b, c))
            if (R.contains(a, f, d)) cols.push_back(f);
        return cols;
    };

    for (int pa = 0; pa < nu; ++pa)
        for (int pb = 0; pb < nu; ++pb)
            for (int pc = 0; pc < nu; ++pc)
                for (int pd = 0; pd < nu; ++pd) {
                    Obj a = R.rho_obj(pa), b = R.rho_obj(pb), c = R.rho_obj(pc), d = R.rho_obj(pd);
                    auto rows = rows_of(a, b, c, d);
                    auto cols = cols_of(a, b, c, d);
                    std::vector<Cd> M(rows.size() * cols.size());
                    for (std::size_t i = 0; i < rows.size(); ++i)
                        for (std::size_t j = 0; j < cols.size(); ++j)
                            M[i * cols.size() + j] = F(make_key(a, b, c, d, rows[i], cols[j]));
                    // F F^dag
                    for (std::size_t i = 0; i < rows.size(); ++i)
                        for (std::size_t j = 0; j < rows.size(); ++j) {
                            Cd acc(0);
                            for (std::size_t k = 0; k < cols.size(); ++k)
                                acc += M[i * cols.size() + k] * std::conj(M[j * cols.size() + k]);
                            rep.dev_ffdag = std::max(rep.dev_ffdag, std::abs(acc - Cd(i == j ? 1 : 0, 0)));
                        }
                    // cross identity with F' = F^{bcd}_a
                    auto rows2 = rows_of(b, c, d, a); // = cols (same coupling set)
                    auto cols2 = cols_of(b, c, d, a);
                    std::vector<Cd> M2(rows2.size() * cols2.size());
                    for (std::size_t i = 0; i < rows2.size(); ++i)
                        for (std::size_t j = 0; j < cols2.size(); ++j)
                            M2[i * cols2.size() + j] = F(make_key(b, c, d, a, rows2[i], cols2[j]));
                    for (std::size_t i = 0; i < rows.size(); ++i)
                        for (std::size_t j = 0; j < cols2.size(); ++j) {
                            Cd acc(0);
                            for (std::size_t k = 0; k < cols.size(); ++k)
                                acc += M[i * cols.size() + k] * M2[k * cols2.size() + j];
                            Cd want(rows[i] == cols2[j] ? 1 : 0, 0);
                            rep.dev_cross = std::max(rep.dev_cross, std::abs(acc - want));
                        }
                }
    rep.unitary = rep.dev_ffdag < tol && rep.dev_cross < tol;
    return rep;
}

// ---------------------------------------------------------------------------
// Graph calculus

struct GraphCheck {
    std::string name;
    double dev;
};

inline std::vector<GraphCheck> graph_checks(const Ring& R, const ClassTable& T, const Solution& sol) {
    const int nu = R.nu();
    Cd z = sol.z, s = sol.s;
    Cd xi = z / s; // theta value in this gauge: z^{3/2}
    std::vector<GraphCheck> out;

    Zeta zt = zeta(R.n(), sol.zeta_sign);
    double loop_dev = std::abs(Cd(1, 0) / (s * s) - z);
    loop_dev = std::max(loop_dev, std::abs(z - Cd(zt.d(), 0)));
    out.push_back({"LoopValue", loop_dev});
    out.push_back({"Theta", std::abs(s * z * z - xi)});
    out.push_back({"Graph1", std::abs(s - xi / (z * z))});
    out.push_back({"Graph2", std::abs(Cd(1, 0) / (s * s) - z)});
    out.push_back({"Graph3", std::abs(s - z / xi)});

    // Tetrahedron values tet = F * xi^2 / z on the all-non-invertible sector,
    // compared across the geometric tetrahedron action.
    Cd factor = xi * xi / z;
    double dev_a4 = 0, dev_refl_eq = 0, dev_refl_conj = 0;
    for (int sg = 0; sg < nu; ++sg)
        for (int kp = 0; kp < nu; ++kp) {
            FKey rep = T.rep_key(sg, kp);
            Cd tet = sol.v[T.var_of_cell(sg, kp)] * factor;
            for (const auto& el : tetra_group()) {
                auto [s2, k2] = T.cell_of(tetra_apply(el, rep));
                Cd tet2 = sol.v[T.var_of_cell(s2, k2)] * factor;
                if (el.even) {
                    dev_a4 = std::max(dev_a4, std::abs(tet - tet2));
                } else {
                    dev_refl_eq = std::max(dev_refl_eq, std::abs(tet - tet2));
                    dev_refl_conj = std::max(dev_refl_conj, std::abs(tet - std::conj(tet2)));
                }
            }
        }
    out.push_back({"TetraA4", dev_a4});
    out.push_back({"TetraReflection", dev_refl_eq});
    out.push_back({"TetraReflectionConj", dev_refl_conj});
    return out;
}

// ---------------------------------------------------------------------------
// Orbits under the automorphism group of Z_{2n+1}

inline std::vector<int> units_mod(int nu) {
    std::vector<int> us;
    for (int k = 1; k < nu; ++k) {
        int a = k, b = nu;
        while (b) {
            a %= b;
            std::swap(a, b);
        }
        if (a == 1) us.push_back(k);
    }
    return us;
}

struct OrbitReport {
    struct Orbit {
        std::vector<int> members;
        Cd invariant;
        int zeta_sign;
        bool all_unitary;
        double invariant_spread;
    };
    std::vector<Orbit> orbits;
    bool invariants_constant = true; // per orbit, to tol
    bool invariants_distinct = true; // across orbits at equal zeta sign
};

inline double solution_distance(const Solution& a, const Solution& b) {
    if (a.v.size() != b.v.size() || a.zeta_sign != b.zeta_sign) return 1e30;
    double d = 0;
    for (std::size_t i = 0; i < a.v.size(); ++i) d = std::max(d, std::abs(a.v[i] - b.v[i]));
    return d;
}

inline OrbitReport orbits(const Ring& R, const ClassTable& T, const std::vector<Solution>& sols,
                          double tol = 1e-8,
                          const std::vector<UnitarityReport>* unit = nullptr) {
    const int nsol = int(sols.size());
    std::vector<int> parent(nsol);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };

    auto locate = [&](const Solution& img) {
        for (int j = 0; j < nsol; ++j)
            if (solution_distance(img, sols[j]) < tol) return j;
        return -1;
    };

    for (int i = 0; i < nsol; ++i)
        for (int k : units_mod(R.nu())) {
            Solution img = automorphism_act(sols[i], k, T);
            int j = locate(img);
            if (j < 0)
                throw NotClosed("automorphism image of solution " + std::to_string(i) +
                                " under k=" + std::to_string(k) + " is missing from the set");
            int a = find(i), b = find(j);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }

    OrbitReport rep;
    std::map<int, int> root_to_orbit;
    for (int i = 0; i < nsol; ++i) {
        int r = find(i);
        auto [it, fresh] = root_to_orbit.try_emplace(r, int(rep.orbits.size()));
        if (fresh) rep.orbits.push_back({});
        rep.orbits[it->second].members.push_back(i);
    }
    for (auto& orb : rep.orbits) {
        Cd inv = gauge_invariant(T, sols[orb.members[0]]);
        double spread = 0;
        bool uni = true;
        for (int m : orb.members) {
            spread = std::max(spread, std::abs(gauge_invariant(T, sols[m]) - inv));
            if (unit) uni = uni && (*unit)[m].unitary;
        }
        orb.invariant = inv;
        orb.invariant_spread = spread;
        orb.zeta_sign = sols[orb.members[0]].zeta_sign;
        orb.all_unitary = unit ? uni : false;
        if (spread > tol) rep.invariants_constant = false;
    }
    for (std::size_t i = 0; i < rep.orbits.size(); ++i)
        for (std::size_t j = i + 1; j < rep.orbits.size(); ++j)
            if (rep.orbits[i].zeta_sign == rep.orbits[j].zeta_sign &&
                std::abs(rep.orbits[i].invariant - rep.orbits[j].invariant) < tol)
                rep.invariants_distinct = false;
    return rep;
}

// Close a seed set under the automorphism group (used to build full orbit
// sets from one assembled solution per orbit).
inline std::vector<Solution> automorphism_closure(const Ring& R, const ClassTable& T,
                                                  const std::vector<Solution>& seeds,
                                                  double dedup = 1e-8) {
    std::vector<Solution> out;
    auto push = [&](const Solution& s) {
        for (auto& o : out)
            if (solution_distance(o, s) < dedup) return;
        out.push_back(s);
    };
    for (const auto& s : seeds) {
        push(s);
        for (int k : units_mod(R.nu())) push(automorphism_act(s, k, T));
    }
    return out;
}

}  // namespace pforge
