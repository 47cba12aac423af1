#pragma once

// Equivalence-class partition of all admissible keys under the transparent
// constraints, optionally sharpened by tetrahedral invariance. Classes are
// either pinned to a fixed monomial in zeta (stored as a power of
// s = zeta^{-1/2}) or become one independent variable of the pentagon system.

#include "pforge/fkey.hpp"

#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace pforge {

enum class Group { None, A4, S4 };

inline std::string to_string(Group g) {
    switch (g) {
        case Group::None: return "none";
        case Group::A4: return "a4";
        case Group::S4: return "s4";
    }
    return "?";
}

enum class Tag : std::uint8_t {
    FixedOne,   // >=1 outer label invertible: value 1            (s^0)
    FixedZInv,  // both inner labels invertible: value zeta^-1    (s^2)
    FixedZHalf, // one inner label invertible: value zeta^-1/2    (s^1)
    Var,
};

inline int s_power(Tag t) {
    switch (t) {
        case Tag::FixedOne: return 0;
        case Tag::FixedZInv: return 2;
        case Tag::FixedZHalf: return 1;
        default: throw std::logic_error("s_power of a variable class");
    }
}

struct FixedConflict : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownKey : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ClassInfo {
    Tag tag;
    std::uint64_t min_key;
    std::uint64_t size;
    std::int32_t var_index; // -1 for fixed classes
};

struct Census {
    std::uint64_t keys_total = 0;
    std::uint64_t keys_fixed_one = 0, keys_zinv = 0, keys_zhalf = 0, keys_var = 0;
    std::uint64_t classes_fixed_one = 0, classes_zinv = 0, classes_zhalf = 0;
    std::uint64_t classes_var = 0;
};

class ClassTable {
  public:
    ClassTable(const Ring& R, Group group) : n_(R.n()), nu_(R.nu()), group_(group) {
        build(R);
    }

    int n() const { return n_; }
    int nu() const { return nu_; }
    Group group() const { return group_; }
    int var_count() const { return var_count_; }

    // var_count plus the zeta degree of freedom; matches the published counts.
    int independent_count() const { return var_count_ + 1; }

    const std::vector<std::uint64_t>& keys() const { return keys_; }
    const std::vector<ClassInfo>& classes() const { return classes_; }

    struct Lookup {
        Tag tag;
        std::int32_t class_id;
        std::int32_t var_index; // -1 for fixed
    };

    Lookup class_of(const FKey& k) const {
        auto it = std::lower_bound(keys_.begin(), keys_.end(), k.packed());
        if (it == keys_.end() || *it != k.packed()) throw UnknownKey("inadmissible key");
        std::int32_t c = cls_[std::size_t(it - keys_.begin())];
        return Lookup{classes_[c].tag, c, classes_[c].var_index};
    }

    // Fast path used by the pentagon generator/evaluator; assumes the key is
    // admissible. Returns var index in [0,V) or -(1+s_power) for fixed keys.
    std::int32_t value_code(const FKey& k) const {
        int inv_outer = 0;
        for (int i = 0; i < 4; ++i) inv_outer += int(k.l[i] < nu_);
        if (inv_outer > 0) return -1;
        bool ei = k.l[4] < nu_, fi = k.l[5] < nu_;
        if (ei && fi) return -3;
        if (ei || fi) return -2;
        int p = k.l[0] - nu_, q = k.l[1] - nu_, r = k.l[2] - nu_;
        int s = k.l[3] - nu_, j = k.l[4] - nu_, f = k.l[5] - nu_;
        int sig = mod(s + q - p - r), kap = mod(f + j - p - r);
        return var_of_cell_[sig * nu_ + kap];
    }

    // Canonical cell (sigma, kappa) of an all-non-invertible key: the unique
    // representative (r,r,r,g^sigma.r; r,g^kappa.r) reachable by shifts.
    std::pair<int, int> cell_of(const FKey& k) const {
        int p = k.l[0] - nu_, q = k.l[1] - nu_, r = k.l[2] - nu_;
        int s = k.l[3] - nu_, j = k.l[4] - nu_, f = k.l[5] - nu_;
        return {mod(s + q - p - r), mod(f + j - p - r)};
    }

    FKey rep_key(int sigma, int kappa) const {
        Obj r0 = Obj(nu_);
        return make_key(r0, r0, r0, Obj(nu_ + mod(sigma)), r0, Obj(nu_ + mod(kappa)));
    }

    int var_of_cell(int sigma, int kappa) const { return var_of_cell_[mod(sigma) * nu_ + mod(kappa)]; }
    const std::vector<std::pair<int, int>>& cells_of_var(int v) const { return cells_of_var_[v]; }

    Census census() const {
        Census c;
        c.keys_total = keys_.size();
        for (std::size_t i = 0; i < keys_.size(); ++i) {
            switch (classes_[cls_[i]].tag) {
                case Tag::FixedOne: ++c.keys_fixed_one; break;
                case Tag::FixedZInv: ++c.keys_zinv; break;
                case Tag::FixedZHalf: ++c.keys_zhalf; break;
                case Tag::Var: ++c.keys_var; break;
            }
        }
        for (const auto& ci : classes_) {
            switch (ci.tag) {
                case Tag::FixedOne: ++c.classes_fixed_one; break;
                case Tag::FixedZInv: ++c.classes_zinv; break;
                case Tag::FixedZHalf: ++c.classes_zhalf; break;
                case Tag::Var: ++c.classes_var; break;
            }
        }
        return c;
    }

  private:
    int mod(int k) const {
        k %= nu_;
        return k < 0 ? k + nu_ : k;
    }

    static Tag tag_of(const Ring& R, const FKey& k) {
        for (int i = 0; i < 4; ++i)
            if (R.invertible(k.l[i])) return Tag::FixedOne;
        bool ei = R.invertible(k.l[4]), fi = R.invertible(k.l[5]);
        if (ei && fi) return Tag::FixedZInv;
        if (ei || fi) return Tag::FixedZHalf;
        return Tag::Var;
    }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::uint32_t x, std::uint32_t y) {
        x = find(x);
        y = find(y);
        if (x == y) return;
        if (x < y) parent_[y] = x; // keep the smallest index as root: stable ids
        else parent_[x] = y;
    }

    std::uint32_t index_of(std::uint64_t packed) const {
        auto it = std::lower_bound(keys_.begin(), keys_.end(), packed);
        if (it == keys_.end() || *it != packed) throw std::logic_error("shift image not admissible");
        return std::uint32_t(it - keys_.begin());
    }

    void build(const Ring& R) {
        keys_.clear();
        for_each_key(R, [&](const FKey& k) { keys_.push_back(k.packed()); });
        std::sort(keys_.begin(), keys_.end());

        const std::uint32_t N = std::uint32_t(keys_.size());
        parent_.resize(N);
        std::iota(parent_.begin(), parent_.end(), 0u);

        // Transparent invariance: union each key with its four unit shifts.
        if (nu_ > 1) {
            for (std::uint32_t i = 0; i < N; ++i) {
                FKey k = FKey::unpack(keys_[i]);
                for (int gen = 0; gen < 4; ++gen) unite(i, index_of(shifted(R, k, gen, 1).packed()));
            }
        }

        // Tetrahedral invariance on the representative slice: the rotation
        // exchanging the base row and base column, and for S4 the reflection
        // transposing the whole representative table.
        if (group_ == Group::A4) {
            for (int t = 1; t < nu_; ++t)
                unite(index_of(rep_key(0, t).packed()), index_of(rep_key(t, 0).packed()));
        } else if (group_ == Group::S4) {
            for (int s = 0; s < nu_; ++s)
                for (int t = s + 1; t < nu_; ++t)
                    unite(index_of(rep_key(s, t).packed()), index_of(rep_key(t, s).packed()));
        }

        // Finalize: classes in order of their smallest member key.
        cls_.assign(N, -1);
        classes_.clear();
        std::map<std::uint32_t, std::int32_t> root_to_class;
        for (std::uint32_t i = 0; i < N; ++i) {
            std::uint32_t r = find(i);
            auto [it, fresh] = root_to_class.try_emplace(r, std::int32_t(classes_.size()));
            FKey k = FKey::unpack(keys_[i]);
            Tag t = tag_of(R, k);
            if (fresh) {
                classes_.push_back(ClassInfo{t, keys_[i], 1, -1});
            } else {
                ClassInfo& ci = classes_[it->second];
                ci.size++;
                if (ci.tag != t) {
                    throw FixedConflict("differently fixed keys merged: " + key_name(R, FKey::unpack(ci.min_key)) +
                                        " vs " + key_name(R, k));
                }
            }
            cls_[i] = it->second;
        }
        // Roots are minimal members, and keys_ is sorted, so classes_ is
        // already ordered by min_key. Assign contiguous var indices.
        var_count_ = 0;
        for (auto& ci : classes_)
            if (ci.tag == Tag::Var) ci.var_index = var_count_++;

        var_of_cell_.assign(nu_ * nu_, -1);
        cells_of_var_.assign(var_count_, {});
        for (int s = 0; s < nu_; ++s)
            for (int t = 0; t < nu_; ++t) {
                auto lk = class_of(rep_key(s, t));
                if (lk.tag != Tag::Var) throw std::logic_error("representative cell is not a variable class");
                var_of_cell_[s * nu_ + t] = lk.var_index;
                cells_of_var_[lk.var_index].push_back({s, t});
            }
    }

    int n_, nu_;
    Group group_;
    std::vector<std::uint64_t> keys_;
    std::vector<std::uint32_t> parent_;
    std::vector<std::int32_t> cls_;
    std::vector<ClassInfo> classes_;
    int var_count_ = 0;
    std::vector<std::int32_t> var_of_cell_;
    std::vector<std::vector<std::pair<int, int>>> cells_of_var_;
};

}  // namespace pforge
