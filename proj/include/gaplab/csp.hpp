#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaplab/code.hpp"

namespace gaplab {

// One constraint: the shifted restriction (a|_T + b) must be a codeword.
struct CspConstraint {
    std::vector<int> vars;       // ordered K-tuple of distinct variable indices
    std::vector<uint8_t> shift;  // b in F_q^K
};

struct CspInstance {
    int n = 0;
    LinearCode code;  // C: membership of shifted tuples is tested against it
    std::vector<CspConstraint> constraints;
    uint64_t seed = 0;

    int num_vars() const { return n; }
    int arity() const { return code.length(); }
    long num_constraints() const { return static_cast<long>(constraints.size()); }
    double beta() const { return static_cast<double>(constraints.size()) / n; }
};

struct Assignment {
    std::vector<uint8_t> values;  // length n, entries in [0, q)
};

// Random instance per the sampling rule: each tuple drawn without
// replacement by a seeded partial Fisher-Yates, each shift uniform.
// Per-constraint substreams are derived from (seed, index), so tuple draws
// coincide between the random and planted samplers at equal seeds.
CspInstance sample_random_instance(int n, long m, const LinearCode& code, uint64_t seed);

bool constraint_satisfied(const CspInstance& inst, long index, const Assignment& a);
long count_satisfied(const CspInstance& inst, const Assignment& a);

// Same tuple stream as sample_random_instance; shifts are sampled uniformly
// from {b : (a*|_T + b) in C} for a hidden uniform assignment a*, which the
// returned instance is guaranteed to satisfy (asserted at construction).
std::pair<CspInstance, Assignment> plant_satisfiable_instance(int n, long m,
                                                              const LinearCode& code,
                                                              uint64_t seed);

struct ExpansionVerdict {
    bool pass = false;
    bool exhaustive = true;
    long sets_checked = 0;
    // per s in [2, r]: minimum |union of tuples| over checked s-sets
    std::vector<std::pair<int, int>> min_union_by_s;
    std::vector<long> witness;  // constraint indices of the worst set
};

// Checks that every set of s constraints involves more than (K - delta) s
// variables, for each s in [2, r]; delta may be half-integral, so the
// threshold comparison is done in integers (2|union| > (2K - 2delta) s).
// Exhaustive when the subset counts fit the budget, otherwise seeded
// sampling when allow_sampling is set (else BudgetExceeded).
ExpansionVerdict audit_expansion(const CspInstance& inst, int r, double delta,
                                 uint64_t budget = 5'000'000, bool allow_sampling = false,
                                 long samples = 100'000, uint64_t seed = 1);

// Exhaustive maximum over all q^n assignments; lexicographically first
// maximizer. Throws BudgetExceeded when q^n exceeds the budget.
std::pair<Assignment, long> best_assignment_bruteforce(const CspInstance& inst,
                                                       uint64_t budget = 10'000'000);

// Instance file: {"n", "q", "seed", "code": {...}, "constraints":
// [{"vars": [...], "shift": [...]}]}
std::string csp_to_json(const CspInstance& inst);
CspInstance csp_from_json(const std::string& text);
void save_csp(const CspInstance& inst, const std::string& path);
CspInstance load_csp(const std::string& path);

}  // namespace gaplab
