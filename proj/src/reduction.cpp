#include "gaplab/reduction.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "gaplab/graph.hpp"  // BudgetExceeded
#include "gaplab/rng.hpp"
#include "json.hpp"

namespace gaplab {

BipartiteInstance BipartiteInstance::build(const CspInstance& inst, int beta) {
    if (beta < 1) throw std::invalid_argument("replication factor beta must be >= 1");
    if (inst.num_constraints() != static_cast<long>(beta) * inst.n)
        throw std::invalid_argument(
            "reduction requires m = beta * n (k = 2m must match both sides' budgets); got m = " +
            std::to_string(inst.num_constraints()) + ", beta * n = " +
            std::to_string(static_cast<long>(beta) * inst.n));
    BipartiteInstance bi;
    bi.inst_ = inst;
    bi.beta_ = beta;
    bi.codewords_ = inst.code.all_codewords();
    const long m = inst.num_constraints();
    const int K = inst.arity();
    const int q = inst.code.q();
    bi.num_left_ = m * static_cast<long>(bi.codewords_.size());
    bi.num_right_base_ = static_cast<long>(inst.n) * q;
    bi.num_right_ = static_cast<long>(beta) * bi.num_right_base_;

    const FieldSpec& f = inst.code.field();
    bi.alphas_.resize(static_cast<size_t>(bi.num_left_) * static_cast<size_t>(K));
    bi.right_base_adj_.assign(static_cast<size_t>(bi.num_right_base_), {});
    for (long i = 0; i < m; ++i) {
        const auto& c = inst.constraints[static_cast<size_t>(i)];
        for (size_t w = 0; w < bi.codewords_.size(); ++w) {
            long left = i * static_cast<long>(bi.codewords_.size()) + static_cast<long>(w);
            for (int t = 0; t < K; ++t) {
                auto alpha = static_cast<uint8_t>(
                    f.sub(bi.codewords_[w][static_cast<size_t>(t)], c.shift[static_cast<size_t>(t)]));
                bi.alphas_[static_cast<size_t>(left) * static_cast<size_t>(K) + static_cast<size_t>(t)] = alpha;
                long rbase = static_cast<long>(c.vars[static_cast<size_t>(t)]) * q + alpha;
                bi.right_base_adj_[static_cast<size_t>(rbase)].push_back(left);
            }
        }
    }
    return bi;
}

long BipartiteInstance::num_edges() const {
    return static_cast<long>(beta_) * inst_.num_constraints() * codeword_count() *
           inst_.arity();
}

long BipartiteInstance::left_id(long constraint, long codeword) const {
    return constraint * codeword_count() + codeword;
}

std::pair<long, long> BipartiteInstance::left_label(long id) const {
    if (id < 0 || id >= num_left_) throw std::out_of_range("left id out of range");
    return {id / codeword_count(), id % codeword_count()};
}

uint8_t BipartiteInstance::left_alpha(long id, int position) const {
    return alphas_[static_cast<size_t>(id) * static_cast<size_t>(inst_.arity()) +
                   static_cast<size_t>(position)];
}

long BipartiteInstance::right_id(int var, int value, int copy) const {
    return num_left_ + static_cast<long>(copy) * num_right_base_ +
           static_cast<long>(var) * inst_.code.q() + value;
}

BipartiteInstance::RightLabel BipartiteInstance::right_label(long id) const {
    if (id < num_left_ || id >= num_vertices()) throw std::out_of_range("right id out of range");
    long off = id - num_left_;
    const int q = inst_.code.q();
    RightLabel label;
    label.copy = static_cast<int>(off / num_right_base_);
    long base = off % num_right_base_;
    label.var = static_cast<int>(base / q);
    label.value = static_cast<int>(base % q);
    return label;
}

void BipartiteInstance::for_each_left_neighbor(long left,
                                               const std::function<void(long)>& fn) const {
    auto [i, w] = left_label(left);
    const auto& vars = inst_.constraints[static_cast<size_t>(i)].vars;
    for (int copy = 0; copy < beta_; ++copy)
        for (int t = 0; t < inst_.arity(); ++t)
            fn(right_id(vars[static_cast<size_t>(t)], left_alpha(left, t), copy));
}

void BipartiteInstance::for_each_right_neighbor(long right,
                                                const std::function<void(long)>& fn) const {
    RightLabel label = right_label(right);
    long rbase = static_cast<long>(label.var) * inst_.code.q() + label.value;
    for (long left : right_base_adj_[static_cast<size_t>(rbase)]) fn(left);
}

std::vector<long> BipartiteInstance::neighbors(long id) const {
    std::vector<long> out;
    if (is_left(id))
        for_each_left_neighbor(id, [&](long r) { out.push_back(r); });
    else
        for_each_right_neighbor(id, [&](long l) { out.push_back(l); });
    return out;
}

long BipartiteInstance::count_edges(std::span<const long> left_set,
                                    std::span<const long> right_set) const {
    std::vector<char> in_right(static_cast<size_t>(num_vertices()), 0);
    for (long r : right_set) {
        if (is_left(r)) throw std::invalid_argument("right set contains a left id");
        in_right[static_cast<size_t>(r)] = 1;
    }
    long edges = 0;
    for (long l : left_set) {
        if (!is_left(l)) throw std::invalid_argument("left set contains a right id");
        for_each_left_neighbor(l, [&](long r) { edges += in_right[static_cast<size_t>(r)]; });
    }
    return edges;
}

PoorlySatisfiedReport classify_poorly_satisfied(const BipartiteInstance& bi,
                                                std::span<const char> right_base_in_set) {
    const auto& inst = bi.instance();
    if (static_cast<long>(right_base_in_set.size()) != bi.num_right_base())
        throw std::invalid_argument("right-set flag vector must have n*q entries");
    PoorlySatisfiedReport report;
    const long m = inst.num_constraints();
    const int K = inst.arity();
    const int q = inst.code.q();
    report.threshold_num = 8L * K;
    report.threshold_den = q;
    report.poorly_satisfied.resize(static_cast<size_t>(m));
    report.max_agreement.resize(static_cast<size_t>(m));
    for (long i = 0; i < m; ++i) {
        const auto& vars = inst.constraints[static_cast<size_t>(i)].vars;
        int best = 0;
        for (long w = 0; w < bi.codeword_count(); ++w) {
            long left = bi.left_id(i, w);
            int agr = 0;
            for (int t = 0; t < K; ++t) {
                long rbase = static_cast<long>(vars[static_cast<size_t>(t)]) * q +
                             bi.left_alpha(left, t);
                agr += right_base_in_set[static_cast<size_t>(rbase)];
            }
            best = std::max(best, agr);
        }
        report.max_agreement[static_cast<size_t>(i)] = best;
        // poorly satisfied iff best <= 8K/q, exactly: best * q <= 8K
        report.poorly_satisfied[static_cast<size_t>(i)] =
            static_cast<long>(best) * report.threshold_den <= report.threshold_num ? 1 : 0;
    }
    return report;
}

BalancedSubgraphResult best_for_left_set(const BipartiteInstance& bi,
                                         std::span<const long> left_set, long right_budget) {
    std::vector<long> degree(static_cast<size_t>(bi.num_right()), 0);
    for (long l : left_set)
        bi.for_each_left_neighbor(
            l, [&](long r) { ++degree[static_cast<size_t>(r - bi.num_left())]; });
    std::vector<long> order(static_cast<size_t>(bi.num_right()));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](long a, long b) {
        if (degree[static_cast<size_t>(a)] != degree[static_cast<size_t>(b)])
            return degree[static_cast<size_t>(a)] > degree[static_cast<size_t>(b)];
        return a < b;
    });
    BalancedSubgraphResult result;
    result.left.assign(left_set.begin(), left_set.end());
    std::sort(result.left.begin(), result.left.end());
    right_budget = std::min(right_budget, bi.num_right());
    for (long i = 0; i < right_budget; ++i) {
        result.right.push_back(bi.num_left() + order[static_cast<size_t>(i)]);
        result.edge_count += degree[static_cast<size_t>(order[static_cast<size_t>(i)])];
    }
    std::sort(result.right.begin(), result.right.end());
    result.mode = "greedy-right";
    return result;
}

namespace {

uint64_t binomial_capped(long n, long k, uint64_t cap) {
    if (k < 0 || k > n) return 0;
    uint64_t r = 1;
    for (long i = 1; i <= k; ++i) {
        double est = static_cast<double>(r) * static_cast<double>(n - k + i) / static_cast<double>(i);
        if (est > 2.0 * static_cast<double>(cap)) return cap + 1;
        r = r * static_cast<uint64_t>(n - k + i) / static_cast<uint64_t>(i);
        if (r > cap) return cap + 1;
    }
    return r;
}

}  // namespace

BalancedSubgraphResult densest_balanced_subgraph(const BipartiteInstance& bi, BalancedMode mode,
                                                 uint64_t budget, long samples, uint64_t seed) {
    const long k = bi.k();
    if (k > bi.num_left() || k > bi.num_right())
        throw std::invalid_argument("k exceeds a side of the bipartite instance");

    if (mode == BalancedMode::exhaustive_left) {
        if (bi.num_left() > 32)
            throw std::invalid_argument(
                "exhaustive left enumeration is limited to |L| <= 32 (got " +
                std::to_string(bi.num_left()) + ")");
        uint64_t subsets = binomial_capped(bi.num_left(), k, budget);
        if (subsets > budget)
            throw BudgetExceeded("exhaustive left enumeration exceeds budget", subsets, budget);
        BalancedSubgraphResult best;
        best.edge_count = -1;
        std::vector<long> left;
        std::function<void(long)> rec = [&](long from) {
            if (static_cast<long>(left.size()) == k) {
                BalancedSubgraphResult cand = best_for_left_set(bi, left, k);
                if (cand.edge_count > best.edge_count) best = std::move(cand);
                return;
            }
            for (long v = from; v <= bi.num_left() - (k - static_cast<long>(left.size())); ++v) {
                left.push_back(v);
                rec(v + 1);
                left.pop_back();
            }
        };
        rec(0);
        best.mode = "exhaustive-left";
        return best;
    }

    // sampled left sets + swap local search, greedy right evaluation
    BalancedSubgraphResult best;
    best.edge_count = -1;
    for (long rep = 0; rep < samples; ++rep) {
        Engine eng = make_engine(derive_seed(seed, 0x62616cULL, static_cast<uint64_t>(rep)));
        std::vector<long> pool(static_cast<size_t>(bi.num_left()));
        std::iota(pool.begin(), pool.end(), 0);
        for (long i = 0; i < k; ++i) {
            auto j = static_cast<size_t>(i) +
                     next_below(eng, static_cast<uint64_t>(bi.num_left() - i));
            std::swap(pool[static_cast<size_t>(i)], pool[j]);
        }
        std::vector<long> left(pool.begin(), pool.begin() + k);
        std::vector<char> in_left(static_cast<size_t>(bi.num_left()), 0);
        for (long l : left) in_left[static_cast<size_t>(l)] = 1;
        long current = best_for_left_set(bi, left, k).edge_count;
        bool improved = true;
        while (improved) {
            improved = false;
            long best_gain = 0, best_out = -1, best_in = -1;
            for (long out : left)
                for (long in = 0; in < bi.num_left(); ++in) {
                    if (in_left[static_cast<size_t>(in)]) continue;
                    std::vector<long> trial;
                    trial.reserve(static_cast<size_t>(k));
                    for (long l : left)
                        if (l != out) trial.push_back(l);
                    trial.push_back(in);
                    long value = best_for_left_set(bi, trial, k).edge_count;
                    if (value - current > best_gain) {
                        best_gain = value - current;
                        best_out = out;
                        best_in = in;
                    }
                }
            if (best_gain > 0) {
                improved = true;
                current += best_gain;
                in_left[static_cast<size_t>(best_out)] = 0;
                in_left[static_cast<size_t>(best_in)] = 1;
                std::replace(left.begin(), left.end(), best_out, best_in);
            }
        }
        if (current > best.edge_count) {
            best = best_for_left_set(bi, left, k);
        }
    }
    best.mode = "sampled-local-search";
    return best;
}

SoundnessReport soundness_report(const BipartiteInstance& bi, long best_edges) {
    const auto& inst = bi.instance();
    SoundnessReport report;
    const double beta = bi.beta();
    const double m = static_cast<double>(inst.num_constraints());
    const double K = inst.arity();
    const double q = inst.code.q();
    report.best_edges = best_edges;
    report.completeness = beta * m * K;
    report.bound_17 = 17.0 * beta * m * K / q;
    report.ratio = best_edges > 0 ? report.completeness / static_cast<double>(best_edges) : 0.0;
    report.ratio_annotation = q / 17.0;
    report.hypotheses_hold = q > 1000 && K > q * q / 2;
    report.status = report.hypotheses_hold ? "binding" : "informational";
    return report;
}

std::string SoundnessReport::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"best_edges\": " << best_edges << ", \"completeness\": " << completeness
       << ", \"bound_17\": " << bound_17 << ", \"ratio\": " << ratio
       << ", \"ratio_annotation\": " << ratio_annotation
       << ", \"status\": \"" << status << "\"}";
    return os.str();
}

std::string bipartite_to_json(const BipartiteInstance& bi) {
    using nlohmann::json;
    json left_labels = json::array();
    for (long l = 0; l < bi.num_left(); ++l) {
        auto [i, w] = bi.left_label(l);
        json alpha = json::array();
        for (int t = 0; t < bi.instance().arity(); ++t)
            alpha.push_back(static_cast<int>(bi.left_alpha(l, t)));
        left_labels.push_back({{"id", l}, {"constraint", i}, {"codeword", w}, {"alpha", alpha}});
    }
    json right_labels = json::array();
    for (long r = bi.num_left(); r < bi.num_vertices(); ++r) {
        auto label = bi.right_label(r);
        right_labels.push_back(
            {{"id", r}, {"var", label.var}, {"value", label.value}, {"copy", label.copy}});
    }
    json edges = json::array();
    for (long l = 0; l < bi.num_left(); ++l)
        bi.for_each_left_neighbor(l, [&](long r) { edges.push_back(json::array({l, r})); });
    json doc = {{"kind", "bipartite-reduction"},
                {"beta", bi.beta()},
                {"k", bi.k()},
                {"N", bi.num_vertices()},
                {"instance", json::parse(csp_to_json(bi.instance()))},
                {"left", left_labels},
                {"right", right_labels},
                {"edges", edges}};
    return doc.dump(1);
}

BipartiteInstance bipartite_from_json(const std::string& text) {
    using nlohmann::json;
    json doc = json::parse(text);
    if (doc.value("kind", "") != "bipartite-reduction")
        throw std::runtime_error("not a bipartite reduction file");
    CspInstance inst = csp_from_json(doc.at("instance").dump());
    BipartiteInstance bi = BipartiteInstance::build(inst, doc.at("beta").get<int>());
    if (doc.at("N").get<long>() != bi.num_vertices())
        throw std::runtime_error("vertex count mismatch in bipartite file");
    if (static_cast<long>(doc.at("edges").size()) != bi.num_edges())
        throw std::runtime_error("edge count mismatch in bipartite file");
    return bi;
}

void save_bipartite(const BipartiteInstance& bi, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write bipartite file: " + path);
    out << bipartite_to_json(bi) << "\n";
}

BipartiteInstance load_bipartite(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open bipartite file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return bipartite_from_json(text);
}

}  // namespace gaplab
