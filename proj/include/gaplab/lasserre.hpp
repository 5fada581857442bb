#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gaplab/rational.hpp"
#include "gaplab/reduction.hpp"

namespace gaplab {

// Partial assignment (S, alpha): sorted distinct variables with values.
struct CspLabel {
    std::vector<std::pair<int, uint8_t>> assign;

    CspLabel() = default;
    explicit CspLabel(std::vector<std::pair<int, uint8_t>> entries);
    size_t size() const { return assign.size(); }
    bool empty() const { return assign.empty(); }
    std::string key() const;
    // nullopt when the two assignments conflict on a shared variable
    static std::optional<CspLabel> merge(const CspLabel& a, const CspLabel& b);
    friend bool operator==(const CspLabel&, const CspLabel&) = default;
};

// Affine solution set of a satisfiable instance's full linear system,
// represented as particular solution + nullspace basis over F_q.
class SolutionSpace {
public:
    static SolutionSpace solve(const CspInstance& inst);  // throws if inconsistent

    int n() const { return n_; }
    int q() const { return q_; }
    int rank() const { return rank_; }
    int nullity() const { return nullity_; }
    double size() const;  // q^nullity
    const std::vector<uint8_t>& particular() const { return particular_; }

    // |{a in A : a agrees with the label}| = q^result, or -1 when empty.
    long count_exponent(const CspLabel& label) const;
    // every element of A satisfies all constraints; spot-asserted at solve()

private:
    int n_ = 0, q_ = 2, rank_ = 0, nullity_ = 0;
    std::vector<uint8_t> particular_;
    FqMatrix basis_;  // nullity x n
};

// Exact inner-product oracle over CSP labels.
class CspOracle {
public:
    virtual ~CspOracle() = default;
    virtual Rational inner(const CspLabel& a, const CspLabel& b) const = 0;
    virtual bool has(const CspLabel& label) const = 0;
    virtual int round_bound() const = 0;
    Rational norm2(const CspLabel& label) const { return inner(label, label); }
};

// The planted-satisfiable realization: V_{(S,alpha)} is the normalized
// indicator of {a in A : a|_S = alpha}, so
//   <V_{(S1,a1)}, V_{(S2,a2)}> = |{a in A : a|_{S1}=a1, a|_{S2}=a2}| / |A|,
// computed by solution counting (no vectors materialized). Exact rationals.
class PlantedCspOracle : public CspOracle {
public:
    PlantedCspOracle(const CspInstance& inst, SolutionSpace space, int rounds);

    Rational inner(const CspLabel& a, const CspLabel& b) const override;
    bool has(const CspLabel& label) const override;
    int round_bound() const override { return rounds_; }
    const SolutionSpace& space() const { return space_; }
    const CspInstance& instance() const { return *inst_; }

private:
    const CspInstance* inst_;
    SolutionSpace space_;
    int rounds_;
    mutable std::unordered_map<std::string, Rational> cache_;
};

PlantedCspOracle build_planted_csp_oracle(const CspInstance& inst, int rounds);

// Imported Gram table over explicit labels (external vector families).
class CspGramTable : public CspOracle {
public:
    CspGramTable(std::vector<CspLabel> labels, std::vector<std::vector<Rational>> gram,
                 int rounds);
    Rational inner(const CspLabel& a, const CspLabel& b) const override;
    bool has(const CspLabel& label) const override;
    int round_bound() const override { return rounds_; }
    const std::vector<CspLabel>& labels() const { return labels_; }
    void set_entry(size_t i, size_t j, const Rational& v);  // fault injection in tests

private:
    std::vector<CspLabel> labels_;
    std::vector<std::vector<Rational>> gram_;
    std::map<std::string, size_t> index_;
    int rounds_;
};

struct LasserreCheck {
    std::string name;
    bool pass = false;
    long checked = 0;
    std::string witness;  // first violation, empty if none
};

struct LasserreVerdict {
    std::vector<LasserreCheck> checks;
    double gram_lambda_min = 0;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    const LasserreCheck* find(const std::string& name) const;
};

struct LasserreCheckOptions {
    long quad_samples = 10000;  // union-consistency samples at label size 2
    long pair_samples = 200;    // sampled size-2 labels for scans
    uint64_t seed = 1;
    double psd_tol = 1e-8;
};

// Moment-oracle property checks for a CSP family: perfect value per constraint,
// nonnegativity, zero on conflicts, union consistency (exhaustive at size 1,
// sampled at size 2), per-variable value-sum 1, the observation that
// sum_alpha C_i(alpha) V_(T_i,alpha) = V_empty (residual expanded through
// pairwise inner products), and PSD of the singleton Gram matrix.
LasserreVerdict verify_csp_properties(const CspOracle& oracle, const CspInstance& inst,
                                      const LasserreCheckOptions& opts = {});

// DkS-labeled oracle over subsets of the reduction's vertices.
class DksOracle {
public:
    virtual ~DksOracle() = default;
    virtual Rational inner(std::span<const long> s1, std::span<const long> s2) const = 0;
    virtual bool has(std::span<const long> label) const = 0;
    virtual int round_bound() const = 0;
    Rational norm2(std::span<const long> s) const { return inner(s, s); }
};

// The lifting map: collect each left vertex's tuple assignment and each
// right vertex's single-variable assignment (copy index ignored); an
// inconsistent collection maps to the zero vector, otherwise to the base
// oracle's label on the union.
class LiftedDksOracle : public DksOracle {
public:
    LiftedDksOracle(const CspOracle& base, const BipartiteInstance& bi, int rounds);
    Rational inner(std::span<const long> s1, std::span<const long> s2) const override;
    bool has(std::span<const long> label) const override;
    int round_bound() const override { return rounds_; }
    // nullopt encodes the zero vector
    std::optional<CspLabel> map_label(std::span<const long> vertices) const;

private:
    const CspOracle* base_;
    const BipartiteInstance* bi_;
    int rounds_;
};

LiftedDksOracle lift_to_dks(const CspOracle& oracle, const BipartiteInstance& bi, int rounds);

// Fig-3 constraint checks on the lifted oracle: nonnegativity, unit empty
// norm, sampled union consistency, the size constraint at every enumerated S
// including the exact (m + beta n) = 2m identity, and the exact objective
// sum over E' of |U_{u,v}|^2 = beta m K.
LasserreVerdict verify_dks_lasserre(const DksOracle& oracle, const BipartiteInstance& bi,
                                    const LasserreCheckOptions& opts = {});

struct MinDegreeVerdict {
    LasserreVerdict base;
    Rational realized_min_factor;  // d*
    Rational requested_d;
    bool pass = false;  // d* >= requested d
};

// Eq.-5 min-degree identities: for every enumerated S, left vertices satisfy
// sum_{v in G(u)} <U_{u,v}, U_S> = beta K <U_u, U_S> exactly and right
// vertices the same with factor #{i : T_i contains x_j}. d defaults to the
// realized minimum factor d* when not supplied.
MinDegreeVerdict verify_min_degree(const DksOracle& oracle, const BipartiteInstance& bi,
                                   std::optional<Rational> d = std::nullopt,
                                   const LasserreCheckOptions& opts = {});

// Imported Gram table over explicit DkS vertex-set labels, so externally
// produced families run through the same verdict machinery.
class DksGramTable : public DksOracle {
public:
    DksGramTable(std::vector<std::vector<long>> labels,
                 std::vector<std::vector<Rational>> gram, int rounds);
    Rational inner(std::span<const long> s1, std::span<const long> s2) const override;
    bool has(std::span<const long> label) const override;
    int round_bound() const override { return rounds_; }

private:
    std::vector<std::vector<Rational>> gram_;
    std::map<std::string, size_t> index_;
    int rounds_;
};

// Gram import/export: {"type": "csp"|"dks", "rounds", "labels", "gram"} with
// exact "num/den" entries.
std::string csp_gram_to_json(const CspOracle& oracle, const std::vector<CspLabel>& labels);
CspGramTable csp_gram_from_json(const std::string& text);
std::vector<CspLabel> default_csp_labels(const CspInstance& inst);  // {} + all singletons
std::string dks_gram_to_json(const DksOracle& oracle,
                             const std::vector<std::vector<long>>& labels);
DksGramTable dks_gram_from_json(const std::string& text);
std::vector<std::vector<long>> default_dks_labels(const BipartiteInstance& bi);

}  // namespace gaplab
