#pragma once

// Numeric solving: damped Gauss-Newton over the compiled pentagon system,
// multistart enumeration of isolated roots, table assembly from bundled case
// data, Galois partners by path continuation, and the automorphism action.

#include "pforge/cases.hpp"
#include "pforge/pentagon.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <thread>

namespace pforge {

struct ResidualTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoPartnerFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotAUnit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Solution {
    int n = 0;
    Group group = Group::None;
    int zeta_sign = +1;
    std::vector<Cd> v;
    Cd z, s;
    std::vector<MpComplex> v_mp;
    MpComplex z_mp, s_mp;
    bool certified = false;
    std::string provenance;
    std::vector<std::string> notes; // e.g. fallback substitutions

    Assignment<Cd> assignment() const { return {v, z, s}; }
    Assignment<MpComplex> assignment_mp() const { return {v_mp, z_mp, s_mp}; }
};

template <typename C>
void set_zs(int n, int sign, C& z, C& s) {
    using R = typename scalar_of<C>::type;
    Zeta zt = zeta(n, sign);
    if constexpr (std::is_same_v<C, Cd>) z = C(zt.d(), 0);
    else z = C(zt.mp(), R(0));
    s = branch_sqrt(C(1) / z);
}

// ---------------------------------------------------------------------------
// Compiled system

struct Compiled {
    int nvars = 0;
    struct Term {
        std::int64_t coeff;
        std::uint8_t zdeg, sdeg, nv;
        std::uint16_t v[3];
    };
    std::vector<Term> terms;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> eqs; // offset, count

    static Compiled from(const PolySystem& sys) {
        Compiled c;
        c.nvars = sys.nvars;
        int npent = int(sys.polys.size()) - sys.num_ground;
        for (int i = 0; i < npent; ++i) {
            const Poly& p = sys.polys[i];
            std::uint32_t off = std::uint32_t(c.terms.size());
            for (const Monomial& m : p.terms) {
                Term t{};
                t.coeff = m.coeff;
                t.zdeg = m.zdeg;
                t.sdeg = m.sdeg;
                t.nv = 0;
                for (auto& [var, e] : m.vars)
                    for (int r = 0; r < e; ++r) t.v[t.nv++] = var;
                c.terms.push_back(t);
            }
            c.eqs.push_back({off, std::uint32_t(c.terms.size()) - off});
        }
        return c;
    }

    template <typename C>
    C eval_eq(std::size_t i, const std::vector<C>& v, const C& z, const C& s) const {
        C acc(0);
        auto [off, cnt] = eqs[i];
        for (std::uint32_t t = off; t < off + cnt; ++t) {
            const Term& tm = terms[t];
            C x(double(tm.coeff));
            for (int k = 0; k < tm.zdeg; ++k) x *= z;
            for (int k = 0; k < tm.sdeg; ++k) x *= s;
            for (int k = 0; k < tm.nv; ++k) x *= v[tm.v[k]];
            acc += x;
        }
        return acc;
    }

    // value and gradient w.r.t. the vars appearing in equation i
    template <typename C>
    C eval_eq_grad(std::size_t i, const std::vector<C>& v, const C& z, const C& s,
                   std::vector<C>& grad, std::vector<char>& mark, std::vector<int>& touched) const {
        C acc(0);
        auto [off, cnt] = eqs[i];
        for (std::uint32_t t = off; t < off + cnt; ++t) {
            const Term& tm = terms[t];
            C base(double(tm.coeff));
            for (int k = 0; k < tm.zdeg; ++k) base *= z;
            for (int k = 0; k < tm.sdeg; ++k) base *= s;
            C x = base;
            for (int k = 0; k < tm.nv; ++k) x *= v[tm.v[k]];
            acc += x;
            for (int k = 0; k < tm.nv; ++k) {
                C g = base;
                for (int m = 0; m < tm.nv; ++m)
                    if (m != k) g *= v[tm.v[m]];
                std::uint16_t var = tm.v[k];
                if (!mark[var]) {
                    mark[var] = 1;
                    touched.push_back(var);
                }
                grad[var] += g;
            }
        }
        return acc;
    }

    template <typename C>
    typename scalar_of<C>::type max_residual(const std::vector<C>& v, const C& z, const C& s) const {
        using R = typename scalar_of<C>::type;
        R mx(0);
        for (std::size_t i = 0; i < eqs.size(); ++i) mx = std::max(mx, R(abs(eval_eq(i, v, z, s))));
        return mx;
    }

    template <typename C>
    typename scalar_of<C>::type max_rel_residual(const std::vector<C>& v, const C& z, const C& s) const {
        using R = typename scalar_of<C>::type;
        R mx(0);
        for (std::size_t i = 0; i < eqs.size(); ++i) {
            C acc(0);
            R scale(1);
            auto [off, cnt] = eqs[i];
            for (std::uint32_t t = off; t < off + cnt; ++t) {
                const Term& tm = terms[t];
                C x(double(tm.coeff));
                for (int k = 0; k < tm.zdeg; ++k) x *= z;
                for (int k = 0; k < tm.sdeg; ++k) x *= s;
                for (int k = 0; k < tm.nv; ++k) x *= v[tm.v[k]];
                acc += x;
                scale = std::max(scale, R(abs(x)));
            }
            mx = std::max(mx, R(abs(acc)) / scale);
        }
        return mx;
    }
};

// Deterministic equation subset: every variable covered several times.
inline std::vector<std::uint32_t> newton_subset(const Compiled& c, int per_var = 10) {
    std::vector<int> cover(c.nvars, 0);
    std::vector<std::uint32_t> sel;
    for (std::uint32_t i = 0; i < c.eqs.size(); ++i) {
        auto [off, cnt] = c.eqs[i];
        bool want = false;
        for (std::uint32_t t = off; t < off + cnt && !want; ++t)
            for (int k = 0; k < c.terms[t].nv; ++k)
                if (cover[c.terms[t].v[k]] < per_var) want = true;
        if (!want) continue;
        sel.push_back(i);
        for (std::uint32_t t = off; t < off + cnt; ++t)
            for (int k = 0; k < c.terms[t].nv; ++k) ++cover[c.terms[t].v[k]];
    }
    return sel;
}

namespace detail {

// Solve (A + lambda I) x = b in place for complex Hermitian-ish A.
template <typename C>
bool lu_solve(std::vector<C> A, std::vector<C> b, int n, std::vector<C>& x) {
    using R = typename scalar_of<C>::type;
    std::vector<int> piv(n);
    std::iota(piv.begin(), piv.end(), 0);
    for (int col = 0; col < n; ++col) {
        int best = col;
        R bv = abs(A[col * n + col]);
        for (int r = col + 1; r < n; ++r) {
            R cv = abs(A[r * n + col]);
            if (cv > bv) {
                bv = cv;
                best = r;
            }
        }
        if (!(bv > R(0))) return false;
        if (best != col) {
            for (int k = 0; k < n; ++k) std::swap(A[col * n + k], A[best * n + k]);
            std::swap(b[col], b[best]);
        }
        C inv = C(1) / A[col * n + col];
        for (int r = col + 1; r < n; ++r) {
            C f = A[r * n + col] * inv;
            if (f == C(0)) continue;
            for (int k = col; k < n; ++k) A[r * n + k] -= f * A[col * n + k];
            b[r] -= f * b[col];
        }
    }
    x.assign(n, C(0));
    for (int r = n - 1; r >= 0; --r) {
        C acc = b[r];
        for (int k = r + 1; k < n; ++k) acc -= A[r * n + k] * x[k];
        x[r] = acc / A[r * n + r];
    }
    return true;
}

}  // namespace detail

struct NewtonOpts {
    int max_iter = 80;
    double step_tol = 1e-14;
    double lambda0 = 0.0;
    double diverge_norm = 1e3;
};

// Damped Gauss-Newton on the selected equations. Returns true when the step
// norm dropped below step_tol (caller still certifies via residuals).
template <typename C>
bool gauss_newton(const Compiled& c, const std::vector<std::uint32_t>& sel, std::vector<C>& v,
                  const C& z, const C& s, const NewtonOpts& opts = {}) {
    using R = typename scalar_of<C>::type;
    const int n = c.nvars;
    std::vector<C> grad(n, C(0)), H(n * n), g(n), step, trial(n);
    std::vector<char> mark(n, 0);
    std::vector<int> touched;

    auto objective = [&](const std::vector<C>& w) {
        R o(0);
        for (auto i : sel) {
            C val = c.eval_eq(i, w, z, s);
            o += R(abs(val)) * R(abs(val));
        }
        return o;
    };

    R fprev = objective(v);
    double lambda = opts.lambda0;
    for (int iter = 0; iter < opts.max_iter; ++iter) {
        std::fill(H.begin(), H.end(), C(0));
        std::fill(g.begin(), g.end(), C(0));
        for (auto i : sel) {
            touched.clear();
            C val = c.eval_eq_grad(i, v, z, s, grad, mark, touched);
            for (int a : touched) {
                C ca = conj(grad[a]);
                g[a] += ca * val;
                for (int b : touched) H[a * n + b] += ca * grad[b];
            }
            for (int a : touched) {
                grad[a] = C(0);
                mark[a] = 0;
            }
        }
        for (int a = 0; a < n; ++a) H[a * n + a] += C(lambda);
        for (auto& x : g) x = -x;
        if (!detail::lu_solve(H, g, n, step)) return false;

        R stepnorm(0);
        for (auto& x : step) stepnorm = std::max(stepnorm, R(abs(x)));
        double alpha = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 14; ++ls) {
            for (int a = 0; a < n; ++a) trial[a] = v[a] + C(alpha) * step[a];
            R f = objective(trial);
            if (f < fprev) {
                v = trial;
                fprev = f;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            lambda = lambda == 0.0 ? 1e-8 : lambda * 16;
            if (lambda > 1e6) return stepnorm < R(1e-8);
            continue;
        }
        R vnorm(0);
        for (auto& x : v) vnorm = std::max(vnorm, R(abs(x)));
        if (vnorm > R(opts.diverge_norm)) return false;
        if (stepnorm * R(alpha) < R(opts.step_tol)) return true;
        lambda *= 0.25;
        if (lambda < 1e-14) lambda = 0.0;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Multistart

struct MultistartOpts {
    long starts = -1; // default 200 * V
    std::uint64_t seed = 1;
    double tol = 1e-10;
    double dedup_radius = 1e-6;
    int max_iter = 100;
    double radius = 3.0;
    int threads = 0;
};

inline void certify_mp(const Compiled& c, const std::vector<std::uint32_t>& sel, Solution& sol) {
    sol.v_mp.assign(sol.v.size(), MpComplex(0));
    for (std::size_t i = 0; i < sol.v.size(); ++i)
        sol.v_mp[i] = MpComplex(sol.v[i].real(), sol.v[i].imag());
    set_zs(sol.n, sol.zeta_sign, sol.z_mp, sol.s_mp);
    NewtonOpts no;
    no.max_iter = 12;
    no.step_tol = 1e-40;
    gauss_newton(c, sel, sol.v_mp, sol.z_mp, sol.s_mp, no);
    sol.certified = true;
    for (std::size_t i = 0; i < sol.v.size(); ++i)
        sol.v[i] = Cd(sol.v_mp[i].real().convert_to<double>(), sol.v_mp[i].imag().convert_to<double>());
}

inline std::vector<Solution> multistart_solve(const Ring& R, const ClassTable& T, const PolySystem& sys,
                                              int zeta_sign, const MultistartOpts& opts = {}) {
    Compiled c = Compiled::from(sys);
    const int V = c.nvars;
    std::vector<std::uint32_t> all(c.eqs.size());
    std::iota(all.begin(), all.end(), 0u);
    std::vector<std::uint32_t> sel = c.eqs.size() > 6000 ? newton_subset(c, 12) : all;

    Cd z, s;
    set_zs(R.n(), zeta_sign, z, s);

    long starts = opts.starts > 0 ? opts.starts : 200L * std::max(1, V);
    std::mt19937_64 rng(opts.seed);
    std::vector<std::vector<Cd>> inits(starts, std::vector<Cd>(V));
    auto uniform = [&](std::mt19937_64& r) { return double(r() >> 11) * 0x1.0p-53; };
    for (auto& init : inits)
        for (auto& x : init) {
            double rad = opts.radius * std::sqrt(uniform(rng));
            double th = 2 * 3.14159265358979323846 * uniform(rng);
            x = Cd(rad * std::cos(th), rad * std::sin(th));
        }

    std::vector<int> converged(starts, 0);
    NewtonOpts no;
    no.max_iter = opts.max_iter;
    auto work = [&](long lo, long hi) {
        for (long i = lo; i < hi; ++i) {
            if (!gauss_newton(c, sel, inits[i], z, s, no)) continue;
            if (c.max_residual(inits[i], z, s) < opts.tol) converged[i] = 1;
        }
    };
    int nthreads = opts.threads > 0 ? opts.threads : int(std::thread::hardware_concurrency());
    nthreads = std::max(1, std::min<int>(nthreads, 16));
    if (nthreads == 1 || starts < 32) {
        work(0, starts);
    } else {
        std::vector<std::thread> pool;
        long chunk = (starts + nthreads - 1) / nthreads;
        for (int t = 0; t < nthreads; ++t) {
            long lo = t * chunk, hi = std::min<long>(starts, lo + chunk);
            if (lo < hi) pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    // dedup in start order (deterministic)
    std::vector<std::vector<Cd>> found;
    for (long i = 0; i < starts; ++i) {
        if (!converged[i]) continue;
        bool fresh = true;
        for (auto& f : found) {
            double dist = 0;
            for (int k = 0; k < V; ++k) dist = std::max(dist, std::abs(f[k] - inits[i][k]));
            if (dist < opts.dedup_radius) {
                fresh = false;
                break;
            }
        }
        if (fresh) found.push_back(inits[i]);
    }

    std::vector<Solution> out;
    for (auto& f : found) {
        Solution sol;
        sol.n = R.n();
        sol.group = T.group();
        sol.zeta_sign = zeta_sign;
        sol.v = f;
        sol.z = z;
        sol.s = s;
        sol.provenance = "multistart";
        certify_mp(c, sel, sol);
        if (c.max_residual(sol.v_mp, sol.z_mp, sol.s_mp) < MpReal(opts.tol)) out.push_back(sol);
    }
    std::sort(out.begin(), out.end(), [](const Solution& a, const Solution& b) {
        auto quant = [](const std::vector<Cd>& v) {
            std::vector<long long> q;
            for (auto x : v) {
                q.push_back(std::llround(x.real() * 1e8));
                q.push_back(std::llround(x.imag() * 1e8));
            }
            return q;
        };
        return quant(a.v) < quant(b.v);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Assembly from bundled tables

struct AssembleOpts {
    bool fallback = false;
    double tol = 1e-10;
};

class RootCache {
  public:
    explicit RootCache(const CaseData& cd) : cd_(&cd) {}

    MpComplex resolve(const std::string& sym) {
        auto cl = cd_->closed.find(sym);
        if (cl != cd_->closed.end()) return cl->second.eval<MpComplex>(cd_->D0);
        auto [fam, idx] = split_symbol(sym);
        const auto& roots = family_roots(fam);
        if (idx < 1 || idx > int(roots.size()))
            throw DataError("root index out of range: " + sym + " (family has " +
                            std::to_string(roots.size()) + " real roots)");
        return MpComplex(roots[idx - 1], MpReal(0));
    }

    const std::vector<MpReal>& family_roots(char fam) {
        auto it = roots_.find(fam);
        if (it == roots_.end()) {
            auto fit = cd_->families.find(fam);
            if (fit == cd_->families.end()) throw DataError(std::string("unknown family: ") + fam);
            it = roots_.emplace(fam, isolate_real_roots(fit->second)).first;
        }
        return it->second;
    }

  private:
    const CaseData* cd_;
    std::map<char, std::vector<MpReal>> roots_;
};

inline Solution assemble_matrix(const CaseData& cd, const Ring& R, const ClassTable& T,
                                const PolySystem& sys,
                                const std::vector<std::vector<std::string>>& matrix,
                                const AssembleOpts& opts = {}) {
    const int nu = R.nu();
    if (int(matrix.size()) != nu) throw DataError("matrix has wrong dimension for " + cd.name);
    RootCache cache(cd);

    Solution sol;
    sol.n = R.n();
    sol.group = T.group();
    sol.zeta_sign = +1;
    set_zs(sol.n, +1, sol.z_mp, sol.s_mp);
    sol.v_mp.assign(T.var_count(), MpComplex(0));
    std::vector<std::string> assigned(T.var_count());
    for (int sg = 0; sg < nu; ++sg)
        for (int kp = 0; kp < nu; ++kp) {
            const std::string& sym = matrix[sg][kp];
            int var = T.var_of_cell(sg, kp);
            if (!assigned[var].empty()) {
                if (assigned[var] != sym)
                    throw DataError(cd.name + ": cells of one class carry different symbols: " +
                                    assigned[var] + " vs " + sym);
                continue;
            }
            assigned[var] = sym;
            sol.v_mp[var] = cache.resolve(sym);
        }
    sol.v.resize(T.var_count());
    for (int i = 0; i < T.var_count(); ++i)
        sol.v[i] = Cd(sol.v_mp[i].real().convert_to<double>(), sol.v_mp[i].imag().convert_to<double>());
    set_zs(sol.n, +1, sol.z, sol.s);
    sol.provenance = "table:" + cd.name;

    Compiled c = Compiled::from(sys);
    double res = c.max_residual(sol.v, sol.z, sol.s);
    if (res > opts.tol) {
        if (!opts.fallback)
            throw ResidualTooLarge(cd.name + ": assembled residual " + std::to_string(res));
        // Polish numerically and re-snap each value to a root of its family.
        std::vector<std::uint32_t> all(c.eqs.size());
        std::iota(all.begin(), all.end(), 0u);
        NewtonOpts no;
        if (!gauss_newton(c, all, sol.v, sol.z, sol.s, no) || c.max_residual(sol.v, sol.z, sol.s) > opts.tol)
            throw ResidualTooLarge(cd.name + ": fallback polish failed, residual " +
                                   std::to_string(c.max_residual(sol.v, sol.z, sol.s)));
        for (int var = 0; var < T.var_count(); ++var) {
            auto [fam, idx] = split_symbol(assigned[var]);
            if (idx == 0) continue;
            if (!cd.families.count(fam)) continue;
            const auto& roots = cache.family_roots(fam);
            int best = -1;
            double bd = 1e9;
            for (int i = 0; i < int(roots.size()); ++i) {
                double d = std::abs(sol.v[var] - Cd(roots[i].convert_to<double>(), 0));
                if (d < bd) {
                    bd = d;
                    best = i + 1;
                }
            }
            if (best > 0 && bd < 1e-6 && best != idx) {
                sol.notes.push_back("fallback: " + assigned[var] + " -> " + fam + std::to_string(best));
                sol.v_mp[var] = MpComplex(roots[best - 1], MpReal(0));
            }
        }
        if (sol.notes.empty())
            throw ResidualTooLarge(cd.name + ": no alternative root assignment verifies");
        for (int i = 0; i < T.var_count(); ++i)
            sol.v[i] = Cd(sol.v_mp[i].real().convert_to<double>(), sol.v_mp[i].imag().convert_to<double>());
        if (c.max_residual(sol.v, sol.z, sol.s) > opts.tol)
            throw ResidualTooLarge(cd.name + ": snapped assignment does not verify");
    }
    // certify at extended precision
    std::vector<std::uint32_t> sel = c.eqs.size() > 6000 ? newton_subset(c, 12) : std::vector<std::uint32_t>();
    if (sel.empty()) {
        sel.resize(c.eqs.size());
        std::iota(sel.begin(), sel.end(), 0u);
    }
    NewtonOpts no;
    no.max_iter = 10;
    no.step_tol = 1e-40;
    gauss_newton(c, sel, sol.v_mp, sol.z_mp, sol.s_mp, no);
    sol.certified = true;
    for (int i = 0; i < T.var_count(); ++i)
        sol.v[i] = Cd(sol.v_mp[i].real().convert_to<double>(), sol.v_mp[i].imag().convert_to<double>());
    return sol;
}

inline Solution assemble_from_table(const CaseData& cd, const Ring& R, const ClassTable& T,
                                    const PolySystem& sys, const AssembleOpts& opts = {}) {
    if (cd.matrix.empty())
        throw DataError(cd.name + ": no component matrix is bundled for this case");
    return assemble_matrix(cd, R, T, sys, cd.matrix, opts);
}

// ---------------------------------------------------------------------------
// Automorphism action and Galois partner

inline int mod_inverse(int k, int nu) {
    int t = 0, nt = 1, r = nu, nr = ((k % nu) + nu) % nu;
    while (nr != 0) {
        int q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (r != 1) throw NotAUnit("k is not a unit modulo 2n+1");
    return ((t % nu) + nu) % nu;
}

inline Solution automorphism_act(const Solution& sol, int k, const ClassTable& T) {
    const int nu = T.nu();
    int kinv = mod_inverse(k, nu);
    Solution out = sol;
    out.provenance = sol.provenance + ">aut" + std::to_string(k);
    for (int sg = 0; sg < nu; ++sg)
        for (int kp = 0; kp < nu; ++kp) {
            int src = T.var_of_cell((kinv * sg) % nu, (kinv * kp) % nu);
            out.v[T.var_of_cell(sg, kp)] = sol.v[src];
            if (!sol.v_mp.empty()) out.v_mp[T.var_of_cell(sg, kp)] = sol.v_mp[src];
        }
    return out;
}

struct GaloisOpts {
    int steps = 128;
    double tol = 1e-11;
};

// Continuation along sqrt(D) -> -sqrt(D) through the upper (then lower) half
// plane; the endpoint is re-polished against the exact zeta_- and normalized
// to the principal branch s = i |zeta_-|^{-1/2}.
inline Solution galois_partner(const Solution& sol, const Ring& R, const ClassTable& T,
                               const PolySystem& sys, const GaloisOpts& opts = {}) {
    if (sol.zeta_sign != +1) throw NoPartnerFound("partner tracking starts from a zeta_+ solution");
    Compiled c = Compiled::from(sys);
    std::vector<std::uint32_t> sel = c.eqs.size() > 6000 ? newton_subset(c, 12) : std::vector<std::uint32_t>();
    if (sel.empty()) {
        sel.resize(c.eqs.size());
        std::iota(sel.begin(), sel.end(), 0u);
    }

    const double nu = 2.0 * R.n() + 1.0;
    const double sq = std::sqrt(nu * nu + 4.0);

    for (int dir : {+1, -1}) {
        std::vector<Cd> v = sol.v;
        Cd sprev = sol.s;
        bool ok = true;
        for (int j = 1; j <= opts.steps && ok; ++j) {
            double th = dir * 3.14159265358979323846 * j / opts.steps;
            Cd w = sq * Cd(std::cos(th), std::sin(th));
            Cd z = (Cd(nu, 0) + w) / 2.0;
            Cd s = std::sqrt(Cd(1, 0) / z);
            if (std::abs(s + sprev) < std::abs(s - sprev)) s = -s;
            sprev = s;
            NewtonOpts no;
            no.max_iter = 40;
            ok = gauss_newton(c, sel, v, z, s, no) && c.max_residual(v, z, s) < opts.tol * 100;
        }
        if (!ok) continue;

        Solution out;
        out.n = sol.n;
        out.group = sol.group;
        out.zeta_sign = -1;
        set_zs(out.n, -1, out.z, out.s);
        // principal branch: flip by conjugation if the tracked s landed on -i
        if (std::abs(sprev - out.s) > std::abs(sprev + out.s))
            for (auto& x : v) x = std::conj(x);
        out.v = v;
        NewtonOpts no;
        if (!gauss_newton(c, sel, out.v, out.z, out.s, no)) continue;
        if (c.max_residual(out.v, out.z, out.s) > opts.tol * 10) continue;
        out.provenance = sol.provenance + ">galois";
        certify_mp(c, sel, out);
        return out;
    }
    throw NoPartnerFound("continuation to zeta_- failed for " + sol.provenance);
}

}  // namespace pforge
