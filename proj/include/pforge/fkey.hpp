#pragma once

// Six-label index (L1..L4; L5,L6) of an F-symbol and its admissibility:
// L5 in L1xL2, L4 in L5xL3, L6 in L2xL3, L4 in L1xL6.

#include "pforge/ring.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace pforge {

struct FKey {
    std::array<Obj, 6> l{}; // a, b, c, d, e, f

    Obj a() const { return l[0]; }
    Obj b() const { return l[1]; }
    Obj c() const { return l[2]; }
    Obj d() const { return l[3]; }
    Obj e() const { return l[4]; }
    Obj f() const { return l[5]; }

    std::uint64_t packed() const {
        std::uint64_t v = 0;
        for (int i = 0; i < 6; ++i) v = (v << 8) | l[i];
        return v;
    }
    static FKey unpack(std::uint64_t v) {
        FKey k;
        for (int i = 5; i >= 0; --i) {
            k.l[i] = Obj(v & 0xff);
            v >>= 8;
        }
        return k;
    }
    bool operator==(const FKey& o) const { return l == o.l; }
    bool operator<(const FKey& o) const { return packed() < o.packed(); }
};

inline FKey make_key(Obj a, Obj b, Obj c, Obj d, Obj e, Obj f) { return FKey{{a, b, c, d, e, f}}; }

inline bool admissible(const Ring& R, const FKey& k) {
    return R.contains(k.a(), k.b(), k.e()) && R.contains(k.e(), k.c(), k.d()) &&
           R.contains(k.b(), k.c(), k.f()) && R.contains(k.a(), k.f(), k.d());
}

inline std::string key_name(const Ring& R, const FKey& k) {
    std::string s = "(";
    for (int i = 0; i < 4; ++i) s += R.name(k.l[i]) + (i < 3 ? "," : ";");
    s += R.name(k.l[4]) + "," + R.name(k.l[5]) + ")";
    return s;
}

// The four invariance shifts by a fixed invertible g^h. Each preserves
// admissibility and the F-symbol value in a transparent category.
inline FKey shifted(const Ring& R, const FKey& k, int gen, int h) {
    FKey m = k;
    switch (gen) {
        case 0: // L1 -> L1.g^-h, L2 -> g^h.L2, L6 -> g^h.L6
            m.l[0] = R.right_mul(k.l[0], -h);
            m.l[1] = R.left_mul(h, k.l[1]);
            m.l[5] = R.left_mul(h, k.l[5]);
            break;
        case 1: // L2 -> L2.g^-h, L3 -> g^h.L3, L5 -> L5.g^-h
            m.l[1] = R.right_mul(k.l[1], -h);
            m.l[2] = R.left_mul(h, k.l[2]);
            m.l[4] = R.right_mul(k.l[4], -h);
            break;
        case 2: // L3 -> L3.g^-h, L4 -> L4.g^-h, L6 -> L6.g^-h
            m.l[2] = R.right_mul(k.l[2], -h);
            m.l[3] = R.right_mul(k.l[3], -h);
            m.l[5] = R.right_mul(k.l[5], -h);
            break;
        case 3: // L1 -> g^h.L1, L4 -> g^h.L4, L5 -> g^h.L5
            m.l[0] = R.left_mul(h, k.l[0]);
            m.l[3] = R.left_mul(h, k.l[3]);
            m.l[4] = R.left_mul(h, k.l[4]);
            break;
        default: throw std::logic_error("bad shift generator");
    }
    return m;
}

// Visit every admissible key once, in increasing packed order.
inline void for_each_key(const Ring& R, const std::function<void(const FKey&)>& fn) {
    const int m = R.num_objects();
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (const Obj e : R.channels(Obj(a), Obj(b)))
                for (int c = 0; c < m; ++c)
                    for (const Obj d : R.channels(e, Obj(c)))
                        for (const Obj f : R.channels(Obj(b), Obj(c)))
                            if (R.contains(Obj(a), f, d)) {
                                FKey k = make_key(Obj(a), Obj(b), Obj(c), d, e, f);
                                fn(k);
                            }
}

inline std::vector<FKey> enumerate_keys(const Ring& R) {
    std::vector<FKey> keys;
    for_each_key(R, [&](const FKey& k) { keys.push_back(k); });
    std::sort(keys.begin(), keys.end());
    return keys;
}

}  // namespace pforge
