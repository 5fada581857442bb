#include "gaplab/csp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <fstream>
#include <numeric>
#include <set>

#include "gaplab/graph.hpp"  // BudgetExceeded
#include "gaplab/rng.hpp"
#include "json.hpp"

namespace gaplab {

namespace {

constexpr uint64_t kTupleStream = 0x7475706cULL;  // tuple draws
constexpr uint64_t kShiftStream = 0x73686674ULL;  // shift draws

std::vector<int> sample_tuple(int n, int k, uint64_t seed, long index) {
    Engine eng = make_engine(derive_seed(seed, kTupleStream, static_cast<uint64_t>(index)));
    std::vector<int> pool(static_cast<size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < k; ++i) {
        auto j = static_cast<size_t>(i) + next_below(eng, static_cast<uint64_t>(n - i));
        std::swap(pool[static_cast<size_t>(i)], pool[j]);
    }
    pool.resize(static_cast<size_t>(k));
    return pool;
}

}  // namespace

CspInstance sample_random_instance(int n, long m, const LinearCode& code, uint64_t seed) {
    const int k = code.length();
    if (n < k) throw std::invalid_argument("csp: n must be at least the arity K");
    CspInstance inst;
    inst.n = n;
    inst.code = code;
    inst.seed = seed;
    inst.constraints.reserve(static_cast<size_t>(m));
    const int q = code.q();
    for (long i = 0; i < m; ++i) {
        CspConstraint c;
        c.vars = sample_tuple(n, k, seed, i);
        Engine shift_eng = make_engine(derive_seed(seed, kShiftStream, static_cast<uint64_t>(i)));
        c.shift.resize(static_cast<size_t>(k));
        for (auto& b : c.shift) b = static_cast<uint8_t>(next_below(shift_eng, static_cast<uint64_t>(q)));
        inst.constraints.push_back(std::move(c));
    }
    return inst;
}

bool constraint_satisfied(const CspInstance& inst, long index, const Assignment& a) {
    const auto& c = inst.constraints.at(static_cast<size_t>(index));
    const FieldSpec& f = inst.code.field();
    std::vector<uint8_t> shifted(c.vars.size());
    for (size_t j = 0; j < c.vars.size(); ++j)
        shifted[j] = static_cast<uint8_t>(
            f.add(a.values.at(static_cast<size_t>(c.vars[j])), c.shift[j]));
    return inst.code.contains(shifted);
}

long count_satisfied(const CspInstance& inst, const Assignment& a) {
    long count = 0;
    for (long i = 0; i < inst.num_constraints(); ++i)
        if (constraint_satisfied(inst, i, a)) ++count;
    return count;
}

std::pair<CspInstance, Assignment> plant_satisfiable_instance(int n, long m,
                                                              const LinearCode& code,
                                                              uint64_t seed) {
    const int k = code.length();
    if (n < k) throw std::invalid_argument("csp: n must be at least the arity K");
    const FieldSpec& f = code.field();
    const int q = code.q();

    Engine hidden_eng = make_engine(derive_seed(seed, 0x68696464ULL));
    Assignment hidden;
    hidden.values.resize(static_cast<size_t>(n));
    for (auto& v : hidden.values) v = static_cast<uint8_t>(next_below(hidden_eng, static_cast<uint64_t>(q)));

    CspInstance inst;
    inst.n = n;
    inst.code = code;
    inst.seed = seed;
    inst.constraints.reserve(static_cast<size_t>(m));
    for (long i = 0; i < m; ++i) {
        CspConstraint c;
        c.vars = sample_tuple(n, k, seed, i);
        // b = w - a*|_T for a uniform codeword w: exactly the uniform
        // distribution on {b : (a*|_T + b) in C}
        Engine shift_eng = make_engine(derive_seed(seed, kShiftStream, static_cast<uint64_t>(i)));
        std::vector<uint8_t> msg(static_cast<size_t>(code.dim()));
        for (auto& d : msg) d = static_cast<uint8_t>(next_below(shift_eng, static_cast<uint64_t>(q)));
        std::vector<uint8_t> word(static_cast<size_t>(k), 0);
        for (int row = 0; row < code.dim(); ++row) {
            if (msg[static_cast<size_t>(row)] == 0) continue;
            for (int col = 0; col < k; ++col)
                word[static_cast<size_t>(col)] = static_cast<uint8_t>(f.add(
                    word[static_cast<size_t>(col)],
                    f.mul(msg[static_cast<size_t>(row)], code.generator().at(row, col))));
        }
        c.shift.resize(static_cast<size_t>(k));
        for (int j = 0; j < k; ++j)
            c.shift[static_cast<size_t>(j)] = static_cast<uint8_t>(
                f.sub(word[static_cast<size_t>(j)],
                      hidden.values[static_cast<size_t>(c.vars[static_cast<size_t>(j)])]));
        inst.constraints.push_back(std::move(c));
    }
    for (long i = 0; i < m; ++i)
        if (!constraint_satisfied(inst, i, hidden))
            throw std::logic_error("planted constraint not satisfied by the hidden assignment");
    return {std::move(inst), std::move(hidden)};
}

namespace {

uint64_t binomial_capped(long n, int k, uint64_t cap) {
    if (k < 0 || k > n) return 0;
    uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        double est = static_cast<double>(r) * static_cast<double>(n - k + i) / i;
        if (est > 2.0 * static_cast<double>(cap)) return cap + 1;
        r = r * static_cast<uint64_t>(n - k + i) / static_cast<uint64_t>(i);
        if (r > cap) return cap + 1;
    }
    return r;
}

int union_size(const CspInstance& inst, std::span<const long> subset, std::vector<int>& scratch,
               int stamp) {
    int count = 0;
    for (long ci : subset)
        for (int v : inst.constraints[static_cast<size_t>(ci)].vars)
            if (scratch[static_cast<size_t>(v)] != stamp) {
                scratch[static_cast<size_t>(v)] = stamp;
                ++count;
            }
    return count;
}

}  // namespace

ExpansionVerdict audit_expansion(const CspInstance& inst, int r, double delta, uint64_t budget,
                                 bool allow_sampling, long samples, uint64_t seed) {
    const long m = inst.num_constraints();
    const int k = inst.arity();
    // threshold: |union| > (K - delta) s, exact via 2|union| > (2K - 2delta) s
    const long two_delta = std::lround(2.0 * delta);
    if (std::abs(2.0 * delta - static_cast<double>(two_delta)) > 1e-9)
        throw std::invalid_argument("delta must be half-integral");

    uint64_t total = 0;
    for (int s = 2; s <= r; ++s) total += binomial_capped(m, s, budget);
    ExpansionVerdict verdict;
    verdict.exhaustive = total <= budget;
    if (!verdict.exhaustive && !allow_sampling)
        throw BudgetExceeded("exhaustive expansion audit needs the sampling flag", total, budget);

    verdict.pass = true;
    std::vector<int> scratch(static_cast<size_t>(inst.n), -1);
    int stamp = 0;
    auto consider = [&](std::span<const long> subset) {
        int s = static_cast<int>(subset.size());
        int u = union_size(inst, subset, scratch, ++stamp);
        ++verdict.sets_checked;
        auto& slot = verdict.min_union_by_s[static_cast<size_t>(s - 2)];
        if (slot.second < 0 || u < slot.second) {
            slot.second = u;
            // strict: pass iff 2u > (2K - 2delta) s
            if (2L * u <= (2L * k - two_delta) * s) {
                verdict.pass = false;
                verdict.witness.assign(subset.begin(), subset.end());
            }
        }
    };

    verdict.min_union_by_s.clear();
    for (int s = 2; s <= r; ++s) verdict.min_union_by_s.emplace_back(s, -1);

    if (verdict.exhaustive) {
        std::vector<long> subset;
        std::function<void(int, long)> rec = [&](int want, long from) {
            if (static_cast<int>(subset.size()) == want) {
                consider(subset);
                return;
            }
            for (long c = from; c <= m - (want - static_cast<long>(subset.size())); ++c) {
                subset.push_back(c);
                rec(want, c + 1);
                subset.pop_back();
            }
        };
        for (int s = 2; s <= r && s <= m; ++s) rec(s, 0);
    } else {
        Engine eng = make_engine(derive_seed(seed, 0x65787041ULL));
        std::vector<long> pool(static_cast<size_t>(m));
        std::iota(pool.begin(), pool.end(), 0);
        for (long rep = 0; rep < samples; ++rep) {
            int s = 2 + static_cast<int>(next_below(eng, static_cast<uint64_t>(r - 1)));
            if (s > m) continue;
            for (int i = 0; i < s; ++i) {
                auto j = static_cast<size_t>(i) + next_below(eng, static_cast<uint64_t>(m - i));
                std::swap(pool[static_cast<size_t>(i)], pool[j]);
            }
            std::vector<long> subset(pool.begin(), pool.begin() + s);
            std::sort(subset.begin(), subset.end());
            consider(subset);
        }
    }
    return verdict;
}

std::pair<Assignment, long> best_assignment_bruteforce(const CspInstance& inst, uint64_t budget) {
    const int q = inst.code.q();
    double total = std::pow(static_cast<double>(q), inst.n);
    if (total > static_cast<double>(budget))
        throw BudgetExceeded("assignment enumeration q^n exceeds budget",
                             total > 1e18 ? UINT64_MAX : static_cast<uint64_t>(total), budget);
    Assignment a;
    a.values.assign(static_cast<size_t>(inst.n), 0);
    Assignment best = a;
    long best_count = count_satisfied(inst, a);
    for (;;) {
        int pos = inst.n - 1;
        while (pos >= 0 && a.values[static_cast<size_t>(pos)] == static_cast<uint8_t>(q - 1)) {
            a.values[static_cast<size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
        ++a.values[static_cast<size_t>(pos)];
        long count = count_satisfied(inst, a);
        if (count > best_count) {
            best_count = count;
            best = a;
        }
    }
    return {best, best_count};
}

std::string csp_to_json(const CspInstance& inst) {
    using nlohmann::json;
    json constraints = json::array();
    for (const auto& c : inst.constraints) {
        json shift = json::array();
        for (uint8_t b : c.shift) shift.push_back(static_cast<int>(b));
        constraints.push_back({{"vars", c.vars}, {"shift", shift}});
    }
    json doc = {{"n", inst.n},
                {"q", inst.code.q()},
                {"seed", inst.seed},
                {"code", json::parse(code_to_json(inst.code))},
                {"constraints", constraints}};
    return doc.dump(1);
}

CspInstance csp_from_json(const std::string& text) {
    using nlohmann::json;
    json doc = json::parse(text);
    CspInstance inst;
    inst.n = doc.at("n").get<int>();
    inst.seed = doc.value("seed", 0ULL);
    inst.code = code_from_json(doc.at("code").dump());
    if (doc.at("q").get<int>() != inst.code.q())
        throw std::runtime_error("instance q does not match its code");
    for (const auto& c : doc.at("constraints")) {
        CspConstraint constraint;
        constraint.vars = c.at("vars").get<std::vector<int>>();
        for (int b : c.at("shift").get<std::vector<int>>())
            constraint.shift.push_back(static_cast<uint8_t>(b));
        if (static_cast<int>(constraint.vars.size()) != inst.code.length() ||
            constraint.shift.size() != constraint.vars.size())
            throw std::runtime_error("constraint arity mismatch");
        std::set<int> distinct(constraint.vars.begin(), constraint.vars.end());
        if (static_cast<int>(distinct.size()) != inst.code.length())
            throw std::runtime_error("constraint tuple has repeated variables");
        inst.constraints.push_back(std::move(constraint));
    }
    return inst;
}

void save_csp(const CspInstance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write instance file: " + path);
    out << csp_to_json(inst) << "\n";
}

CspInstance load_csp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return csp_from_json(text);
}

}  // namespace gaplab
