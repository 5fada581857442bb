#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaplab/graph.hpp"
#include "gaplab/quartic.hpp"
#include "gaplab/steiner.hpp"

namespace gaplab {

// Abstract subset-indexed value table x_S; every implementation serves exact
// values in Q(n^{1/4}).
class SubsetValues {
public:
    virtual ~SubsetValues() = default;
    virtual Quartic value(std::span<const int> subset) const = 0;
    virtual const Graph& graph() const = 0;
    virtual int level_cap() const = 0;  // max |S| served
    int64_t radicand() const { return graph().n(); }
};

// The explicit Sherali-Adams solution
//     x_S = n^{-(st(S)+1)/4} * L^{-|S|}   for 1 <= |S| <= L,
//     x_empty = 1, x_S = 0 when S is disconnected.
// Values are computed on demand from memoized Steiner sizes; the table is
// never materialized eagerly. Not synchronized (per-worker instances).
class SaAssignment : public SubsetValues {
public:
    enum class AuditMode { full, diameter2_only, skip };

    SaAssignment(const Graph& g, int level, AuditMode mode = AuditMode::full);

    Quartic value(std::span<const int> subset) const override;
    const Graph& graph() const override { return *g_; }
    int level_cap() const override { return level_; }

    int level() const { return level_; }
    // Steiner size with st(empty)=0; -1 encodes a disconnected subset.
    int steiner_or_disconnected(std::span<const int> subset) const;
    bool audit_warning() const { return audit_warning_; }
    bool level_warning() const { return level_warning_; }
    bool diameter2() const { return diam2_; }
    SteinerSolver& solver() const { return *solver_; }

private:
    const Graph* g_;
    int level_;
    std::unique_ptr<SteinerSolver> solver_;
    bool audit_warning_ = false;
    bool level_warning_ = false;
    bool diam2_ = false;
};

// 0/1 table of an actual vertex subset H: x_S = [S subset of H]. Used for the
// integral sanity checks.
class IntegralAssignment : public SubsetValues {
public:
    IntegralAssignment(const Graph& g, std::vector<int> chosen);
    Quartic value(std::span<const int> subset) const override;
    const Graph& graph() const override { return *g_; }
    int level_cap() const override { return g_->n(); }
    long min_induced_degree() const;

private:
    const Graph* g_;
    std::vector<char> in_set_;
    std::vector<int> chosen_;
};

enum class SaFamily { size, density, inclusion_exclusion, dominate };
const char* family_name(SaFamily f);
std::optional<SaFamily> family_from_name(const std::string& name);

// Which vertices i the density constraint is instantiated at.
enum class DensityScope { members_of_S, all_vertices };

struct SaSampler {
    bool exhaustive = false;  // all (S,T) with the caps below (small graphs only)
    long samples = 1000;
    uint64_t seed = 1;
    int max_s = 2;
    int max_t = 2;
    int max_total = 4;  // |S| + |T| cap
};

struct SaViolation {
    std::vector<int> S, T;
    int vertex = -1;  // the i of a size/density instantiation, if any
    std::string lhs, rhs;
    double lhs_approx = 0, rhs_approx = 0;
};

struct SaVerdict {
    SaFamily family = SaFamily::inclusion_exclusion;
    long checked = 0;
    long violation_count = 0;
    std::vector<SaViolation> violations;  // first few witnesses
    Quartic worst_slack;                  // min margin; negative iff violated
    bool pass() const { return violation_count == 0; }
};

// Exact verification of one constraint family of the level-r relaxation,
// with the full alternating sums over J subset of T.
//  - size:    sum_i sum_J (-1)^|J| x(S+J+i)  <=  k * sum_J (-1)^|J| x(S+J)
//  - density: sum_{j in G(i)} sum_J (-1)^|J| x(S+J+i+j) >= d * sum_J ... x(S+J+i)
//  - inclusion-exclusion: 0 <= sum_J (-1)^|J| x(S+J) <= 1
//  - dominate: x_S >= sum_J (-1)^|J| x(S+J) >= x_S / 2
SaVerdict verify_family(const SubsetValues& a, SaFamily family, int r, const Quartic& d, long k,
                        const SaSampler& sampler,
                        DensityScope scope = DensityScope::members_of_S);

struct DominateResult {
    bool upper = false;  // sum <= x_S
    bool lower = false;  // sum >= x_S / 2
    Quartic value;
};
DominateResult check_dominate(const SubsetValues& a, std::span<const int> S,
                              std::span<const int> T);

struct SizeProfileRow {
    std::vector<int> S;
    int steiner_base = 0;
    long members = 0, same = 0, plus_one = 0, plus_two = 0;  // bucket counts
    Quartic ratio;                                           // sum_i x(S+i) / x_S
    double ratio_approx = 0;
    double bucket_contrib[4] = {0, 0, 0, 0};  // members/same/+1/+2 share of ratio
    const char* dominant_bucket = "";
};

struct SizeProfile {
    std::vector<SizeProfileRow> rows;
    Quartic max_ratio;
    std::vector<int> argmax_S;
    bool pass_sqrt_n = false;  // max ratio <= sqrt(n)
};

// Ratio (sum_{i in V} x_{S u i}) / x_S per sampled S, decomposed into the
// Steiner buckets st(S+i) in {st, st+1, st+2} plus the i-in-S terms.
SizeProfile size_constraint_profile(const SaAssignment& a, const SaSampler& sampler);

// Table file IO. Values are serialized as exact "num/den" strings when
// rational; otherwise as "num/den@e" meaning (num/den) * n^{e/4}. The graph
// is embedded so the file is self-contained.
void save_sa_table(const SaAssignment& a, const std::string& path, int materialize_max_size = -1);

struct LoadedSaTable {
    std::unique_ptr<Graph> graph;
    std::unique_ptr<SaAssignment> assignment;
};
// Rebuilds the assignment from the embedded graph and level, recomputing and
// checking every stored value exactly.
LoadedSaTable load_sa_table(const std::string& path,
                            SaAssignment::AuditMode mode = SaAssignment::AuditMode::diameter2_only);

std::string quartic_table_str(const Quartic& v);
Quartic parse_quartic_table_str(const std::string& s, int64_t radicand);

}  // namespace gaplab
