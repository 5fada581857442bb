#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gaplab {

// Undirected simple graph. Immutable after construction; all queries are
// const and safe to call concurrently.
class Graph {
public:
    Graph() = default;
    // Edges may arrive unordered; they are canonicalized to u < v and sorted.
    // Rejects self-loops, duplicates and out-of-range endpoints.
    static Graph from_edges(int n, std::vector<std::pair<int, int>> edges);

    int n() const { return n_; }
    long m() const { return static_cast<long>(edges_.size()); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const { return adj_[static_cast<size_t>(v)]; }
    int degree(int v) const { return static_cast<int>(adj_[static_cast<size_t>(v)].size()); }

    bool adjacent(int u, int v) const {
        return (row(u)[static_cast<size_t>(v) >> 6] >> (v & 63)) & 1u;
    }
    // Bit row of vertex u; row_words() 64-bit words, bit v set iff {u,v} in E.
    const uint64_t* row(int u) const { return bits_.data() + static_cast<size_t>(u) * words_; }
    size_t row_words() const { return words_; }

private:
    int n_ = 0;
    size_t words_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;
    std::vector<uint64_t> bits_;
};

struct GnpParams {
    int n = 0;
    double p = 0.0;
    uint64_t seed = 0;
};

// G(n,p) sampler. Pairs are visited in lexicographic order with one uniform
// variate each, so output depends only on (n, p, seed).
Graph gen_gnp(const GnpParams& params);

// Convenience: the working edge probability p = ln(n)/sqrt(n).
double gnp_default_p(int n);

// Degree / common-neighbor audit against the random-graph properties the
// gap construction relies on:
//   degrees within [sqrt(n) ln(n) / 2, 2 sqrt(n) ln(n)]
//   every pair has at least one common neighbor
//   every pair has at most 2 ln^2(n) common neighbors
struct PropertyReport {
    int min_degree = 0;
    int max_degree = 0;
    long min_common = 0;
    long max_common = 0;
    bool pass_degree = false;
    bool pass_common_lower = false;
    bool pass_common_upper = false;
    double degree_lo = 0, degree_hi = 0, common_hi = 0;  // evaluated bounds

    bool all_pass() const { return pass_degree && pass_common_lower && pass_common_upper; }
    std::string to_json() const;
};

PropertyReport audit_random_graph_properties(const Graph& g);

// True iff every pair of vertices is adjacent or shares a neighbor. Cheaper
// than the full audit (early exit per pair); used to enable small-set Steiner
// shortcuts.
bool has_diameter_le2(const Graph& g);

struct DensestResult {
    std::vector<int> vertices;
    long edge_count = 0;
};

// Exhaustive maximum-edge k-subset. Throws BudgetExceeded when C(n,k) is
// above `budget` subsets. `reverse_order` enumerates vertices high-to-low;
// the forward/reverse pair is used as a double-enumeration check.
DensestResult densest_k_bruteforce(const Graph& g, int k, uint64_t budget = 50'000'000,
                                   bool reverse_order = false);

// Swap-based local search from seeded random starts; returns the best local
// optimum over `restarts` runs. Valid integral lower bound, deterministic
// per (seed, restarts).
DensestResult densest_k_localsearch(const Graph& g, int k, int restarts, uint64_t seed);

long count_induced_edges(const Graph& g, std::span<const int> vertices);

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, uint64_t need, uint64_t budget);
    uint64_t needed;
    uint64_t budget;
};

// Text format: "n m" then m lines "u v" with u < v, 0-indexed.
Graph read_graph(std::istream& in);
Graph load_graph(const std::string& path);
void write_graph(const Graph& g, std::ostream& out);
void save_graph(const Graph& g, const std::string& path);

}  // namespace gaplab
