#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gaplab/graph.hpp"

namespace gaplab {

struct SteinerResult {
    int size = 0;  // vertex count of a minimum Steiner tree
    std::vector<std::pair<int, int>> witness;  // edge list of one optimal tree
};

// Thrown when the terminal set spans multiple components; carries the
// terminals grouped by component.
class DisconnectedTerminals : public std::runtime_error {
public:
    explicit DisconnectedTerminals(std::vector<std::vector<int>> parts);
    std::vector<std::vector<int>> partition;
};

// Exact minimum Steiner trees over one immutable graph, with shared caches
// (BFS distances, memoized sizes, the diameter-2 certificate). The caches
// are not synchronized: confine a solver to one worker, or give each worker
// its own.
class SteinerSolver {
public:
    explicit SteinerSolver(const Graph& g);

    const Graph& graph() const { return g_; }

    // Terminal-indexed dynamic programming (Dreyfus-Wagner) with the BFS
    // relaxation depth capped at 2|S|-2 edges when every pair of terminals
    // is within distance 2 (the cap is validated per call and lifted
    // otherwise). Produces and validates a witness tree.
    SteinerResult solve(std::span<const int> terminals);

    // Size only. On graphs certified diameter <= 2 this uses closed forms
    // for |S| <= 4 (cross-checked against the DP in the test suite);
    // otherwise it falls back to the DP. Memoized.
    int size(std::span<const int> terminals);

    // st(S u {i}) relative to st(S) for every i not in S.
    struct ExtensionCounts {
        int base = 0;         // st(S)
        long same = 0;        // st(S u i) == st(S)
        long plus_one = 0;    // st(S u i) == st(S) + 1
        long plus_two_or_more = 0;
    };
    ExtensionCounts count_extensions(std::span<const int> terminals);
    // Per-vertex variant; visit(i, st(S u i)) for each i not in S.
    void for_each_extension(std::span<const int> terminals,
                            const std::function<void(int, int)>& visit);

    // Certificate that every vertex pair is adjacent or shares a neighbor
    // (computed lazily, cached).
    bool diameter2();

    // st({a,b,i}) for distinct vertices on a diameter-2-certified graph.
    int pair_extension_size(int a, int b, int i);

private:
    struct DpState;
    const std::vector<int32_t>& dist_from(int source);
    const std::vector<int>& component_ids();
    void require_connected(std::span<const int> terminals);
    std::vector<int> canonical(std::span<const int> terminals) const;
    int size_closed_form(const std::vector<int>& s);
    int st3_diam2(int a, int b, int c);
    int st4_diam2(const std::vector<int>& s);
    SteinerResult run_dp(const std::vector<int>& terminals);

    const Graph& g_;
    int diam2_state_ = -1;  // -1 unknown, 0 no, 1 yes
    std::unordered_map<int, std::vector<int32_t>> bfs_cache_;
    std::vector<int> components_;
    std::unordered_map<std::string, int> size_memo_;
};

// One-shot convenience wrapper (no cache reuse across calls).
SteinerResult steiner_size(const Graph& g, std::span<const int> terminals);

}  // namespace gaplab
