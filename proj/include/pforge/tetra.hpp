#pragma once

// Geometric action of the tetrahedron symmetry group on the six key slots.
// Slots sit on edges; an edge is the pair of faces it borders:
//   L1={0,3} L2={0,2} L3={1,2} L4={1,3} L5={0,1} L6={2,3}
// A face permutation induces a slot permutation. On the all-non-invertible
// sector every object is self-dual, so no dualization accompanies the move.

#include "pforge/fkey.hpp"

#include <array>
#include <vector>

namespace pforge {

struct TetraElem {
    std::array<int, 6> src; // image.l[i] = key.l[src[i]]
    bool even;
};

inline const std::vector<TetraElem>& tetra_group() {
    static const std::vector<TetraElem> elems = [] {
        constexpr int edge_faces[6][2] = {{0, 3}, {0, 2}, {1, 2}, {1, 3}, {0, 1}, {2, 3}};
        auto slot_of = [&](int x, int y) {
            for (int s = 0; s < 6; ++s)
                if ((edge_faces[s][0] == x && edge_faces[s][1] == y) ||
                    (edge_faces[s][0] == y && edge_faces[s][1] == x))
                    return s;
            return -1;
        };
        std::vector<TetraElem> out;
        std::array<int, 4> p{0, 1, 2, 3};
        do {
            int inversions = 0;
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j) inversions += p[i] > p[j];
            TetraElem el;
            el.even = inversions % 2 == 0;
            for (int s = 0; s < 6; ++s) {
                int img = slot_of(p[edge_faces[s][0]], p[edge_faces[s][1]]);
                el.src[img] = s; // edge s moves onto slot img
            }
            out.push_back(el);
        } while (std::next_permutation(p.begin(), p.end()));
        return out;
    }();
    return elems;
}

inline FKey tetra_apply(const TetraElem& el, const FKey& k) {
    FKey m;
    for (int i = 0; i < 6; ++i) m.l[i] = k.l[el.src[i]];
    return m;
}

inline std::vector<FKey> tetra_orbit(const FKey& k, bool include_odd) {
    std::vector<FKey> orbit;
    for (const auto& el : tetra_group()) {
        if (!include_odd && !el.even) continue;
        FKey m = tetra_apply(el, k);
        if (std::find(orbit.begin(), orbit.end(), m) == orbit.end()) orbit.push_back(m);
    }
    return orbit;
}

}  // namespace pforge
