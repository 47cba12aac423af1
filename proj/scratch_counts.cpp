#include "pforge/classes.hpp"
#include "pforge/pentagon.hpp"
#include <chrono>
#include <cstdio>

using namespace pforge;

int main() {
    int expect_a4[] = {8, 22, 44, 74, 112, 158, 212};
    int expect_s4[] = {7, 16, 29, 46, 67, 92, 121};
    auto t0 = std::chrono::steady_clock::now();
    for (int n = 0; n <= 7; ++n) {
        Ring R(n);
        ClassTable Tn(R, Group::None);
        ClassTable Ta(R, Group::A4);
        ClassTable Ts(R, Group::S4);
        int nu = 2 * n + 1;
        std::printf("n=%d nu=%2d keys=%9zu | none: var=%4d indep=%4d (want %4d) | a4: %4d (want %s) | s4: %4d (want %s)\n",
                    n, nu, Tn.keys().size(), Tn.var_count(), Tn.independent_count(), nu * nu + 1,
                    Ta.independent_count(), n >= 1 ? std::to_string(expect_a4[n - 1]).c_str() : "-",
                    Ts.independent_count(), n >= 1 ? std::to_string(expect_s4[n - 1]).c_str() : "-");
    }
    auto t1 = std::chrono::steady_clock::now();
    std::printf("elapsed %.1fs\n", std::chrono::duration<double>(t1 - t0).count());

    // pentagon sanity at n=0: expect the single variable forced to -1/z
    Ring R0(0);
    ClassTable T0(R0, Group::None);
    PolySystem S = generate(R0, T0);
    std::printf("n=0 system: %zu polys (incl %d ground), vars=%d\n", S.polys.size(), S.num_ground, S.nvars);
    // Fibonacci check: v0 = -1/zeta_+
    Zeta zp = zeta(0, +1);
    Assignment<Cd> A;
    A.z = Cd(zp.d(), 0);
    A.s = branch_sqrt(Cd(1.0, 0) / A.z);
    A.v = {Cd(-1.0 / zp.d(), 0)};
    std::printf("n=0 fib residual = %.3e\n", S.max_residual(A));
    // quotient == full at n=0,1?
    for (int n = 0; n <= 1; ++n) {
        Ring R(n);
        for (Group g : {Group::None, Group::A4, Group::S4}) {
            ClassTable T(R, g);
            PolySystem full = generate(R, T);
            PolySystem sl = generate_quotient(R, T);
            std::vector<std::string> fa, fb;
            for (auto& p : full.polys) fa.push_back(p.fingerprint());
            for (auto& p : sl.polys) fb.push_back(p.fingerprint());
            std::sort(fa.begin(), fa.end());
            std::sort(fb.begin(), fb.end());
            std::printf("n=%d group=%s: full=%zu slice=%zu equal=%d\n", n, to_string(g).c_str(),
                        fa.size(), fb.size(), int(fa == fb));
        }
    }
    return 0;
}
