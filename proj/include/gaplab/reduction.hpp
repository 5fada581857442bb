#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gaplab/csp.hpp"

namespace gaplab {

// The constraint-variable bipartite graph of a CSP instance, with the right
// side replicated beta times.
//
// Vertex ids are a fixed function of the labels:
//   left  (C_i, alpha_c):        id = i * |C| + c, where alpha_c is the
//                                codeword with message index c shifted by
//                                -b^(i) (codewords enumerated in odometer
//                                message order),
//   right (x_j, value, copy):    id = num_left + copy * n * q + j * q + value.
class BipartiteInstance {
public:
    static BipartiteInstance build(const CspInstance& inst, int beta);

    const CspInstance& instance() const { return inst_; }
    int beta() const { return beta_; }
    long k() const { return 2 * inst_.num_constraints(); }
    long num_left() const { return num_left_; }
    long num_right() const { return num_right_; }          // beta * n * q
    long num_right_base() const { return num_right_base_; }  // n * q (one copy)
    long num_vertices() const { return num_left_ + num_right_; }
    long num_edges() const;  // beta * m * |C| * K
    long codeword_count() const { return static_cast<long>(codewords_.size()); }

    // label accessors
    long left_id(long constraint, long codeword) const;
    std::pair<long, long> left_label(long id) const;  // (constraint, codeword index)
    // alpha of a left vertex at tuple position t
    uint8_t left_alpha(long id, int position) const;
    long right_id(int var, int value, int copy) const;
    struct RightLabel {
        int var, value, copy;
    };
    RightLabel right_label(long id) const;

    bool is_left(long id) const { return id < num_left_; }
    // neighbors of a left vertex: beta * K right ids, deterministic order
    void for_each_left_neighbor(long left, const std::function<void(long)>& fn) const;
    // neighbors of a right vertex: left ids, deterministic order
    void for_each_right_neighbor(long right, const std::function<void(long)>& fn) const;
    std::vector<long> neighbors(long id) const;

    long count_edges(std::span<const long> left_set, std::span<const long> right_set) const;

private:
    CspInstance inst_;
    int beta_ = 1;
    long num_left_ = 0, num_right_ = 0, num_right_base_ = 0;
    std::vector<std::vector<uint8_t>> codewords_;
    // alpha values per left vertex, row-major K bytes each
    std::vector<uint8_t> alphas_;
    // right -> left adjacency for one copy, built lazily at construction
    std::vector<std::vector<long>> right_base_adj_;
};

// agr-based classification: constraint i is poorly satisfied by a right set
// R (subset of the single-copy right side, as ids or (var,value) flags) iff
// max over its satisfying alphas of |{(x_j, alpha(x_j)) in R}| <= 8K/q.
struct PoorlySatisfiedReport {
    std::vector<char> poorly_satisfied;  // per constraint
    std::vector<int> max_agreement;      // per constraint
    long threshold_num = 0;              // 8K
    long threshold_den = 1;              // q
};
PoorlySatisfiedReport classify_poorly_satisfied(const BipartiteInstance& bi,
                                                std::span<const char> right_base_in_set);

struct BalancedSubgraphResult {
    std::vector<long> left;
    std::vector<long> right;
    long edge_count = 0;
    const char* mode = "";
};

// For a fixed left set, the optimal right set of size `right_budget` is the
// degree-greedy choice (edges add independently per right vertex).
BalancedSubgraphResult best_for_left_set(const BipartiteInstance& bi,
                                         std::span<const long> left_set, long right_budget);

enum class BalancedMode { exhaustive_left, sampled_local_search };

// Maximize edges over |left| = k, |right| = k. Exhaustive mode enumerates
// left k-subsets (budget-guarded); the default samples seeded left sets and
// runs swap local search, evaluating each candidate with the greedy right
// choice. Deterministic per seed.
BalancedSubgraphResult densest_balanced_subgraph(const BipartiteInstance& bi, BalancedMode mode,
                                                 uint64_t budget = 100'000, long samples = 200,
                                                 uint64_t seed = 1);

struct SoundnessReport {
    long best_edges = 0;
    double completeness = 0;      // beta * m * K
    double bound_17 = 0;          // 17 beta m K / q
    double ratio = 0;             // completeness / best_edges
    double ratio_annotation = 0;  // q / 17
    bool hypotheses_hold = false;  // q > 1000 and K > q^2/2
    std::string status;            // "binding" or "informational"
    std::string to_json() const;
};
SoundnessReport soundness_report(const BipartiteInstance& bi, long best_edges);

// File: vertex label tables plus an explicit (leftId, rightId) edge list,
// with the parent instance embedded.
std::string bipartite_to_json(const BipartiteInstance& bi);
BipartiteInstance bipartite_from_json(const std::string& text);
void save_bipartite(const BipartiteInstance& bi, const std::string& path);
BipartiteInstance load_bipartite(const std::string& path);

}  // namespace gaplab
