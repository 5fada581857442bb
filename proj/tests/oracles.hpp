#pragma once

// Independent brute-force oracles used only by the test suites. These stay
// deliberately naive: they share no code with the implementations they check.

#include <bit>
#include <cstdint>
#include <vector>

#include "gaplab/graph.hpp"

namespace gaplab::oracles {

inline bool mask_connected(const Graph& g, uint32_t mask) {
    if (mask == 0) return false;
    uint32_t start = mask & (~mask + 1);
    uint32_t seen = start;
    uint32_t frontier = start;
    while (frontier) {
        uint32_t next = 0;
        for (int v = 0; v < g.n(); ++v) {
            if (!(frontier >> v & 1u)) continue;
            for (int u : g.neighbors(v))
                if ((mask >> u & 1u) && !(seen >> u & 1u)) next |= 1u << u;
        }
        seen |= next;
        frontier = next;
    }
    return seen == mask;
}

// Minimum vertex count of a connected subgraph containing all terminals,
// by exhaustive subset enumeration (n <= 20). Returns -1 if none exists.
inline int exhaustive_steiner_size(const Graph& g, const std::vector<int>& terminals) {
    uint32_t tmask = 0;
    for (int t : terminals) tmask |= 1u << t;
    int best = -1;
    for (uint32_t mask = 0; mask < (1u << g.n()); ++mask) {
        if ((mask & tmask) != tmask) continue;
        if (best != -1 && std::popcount(mask) >= best) continue;
        if (mask_connected(g, mask)) best = std::popcount(mask);
    }
    return best;
}

}  // namespace gaplab::oracles
