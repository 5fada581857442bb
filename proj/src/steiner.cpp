#include "gaplab/steiner.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <deque>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

namespace gaplab {

namespace {

constexpr int32_t kInf = std::numeric_limits<int32_t>::max() / 4;
constexpr int kMaxTerminals = 8;

std::string partition_to_string(const std::vector<std::vector<int>>& parts) {
    std::ostringstream os;
    os << "terminals are disconnected: ";
    for (size_t i = 0; i < parts.size(); ++i) {
        os << (i ? " | " : "") << "{";
        for (size_t j = 0; j < parts[i].size(); ++j) os << (j ? "," : "") << parts[i][j];
        os << "}";
    }
    return os.str();
}

// Connectivity of graphs on up to 6 labeled vertices, indexed by the 15-bit
// edge mask in pair order (0,1),(0,2),...,(4,5). Vertices 4 and 5 can be
// marked absent. Built lazily once.
struct TinyConnectivity {
    std::vector<uint8_t> connected6;  // full 6-vertex table

    TinyConnectivity() : connected6(1u << 15, 0) {
        for (uint32_t mask = 0; mask < (1u << 15); ++mask) {
            std::array<int, 6> parent;
            std::iota(parent.begin(), parent.end(), 0);
            auto find = [&](int x) {
                while (parent[static_cast<size_t>(x)] != x) x = parent[static_cast<size_t>(x)];
                return x;
            };
            int bit = 0;
            for (int i = 0; i < 6; ++i)
                for (int j = i + 1; j < 6; ++j, ++bit)
                    if (mask >> bit & 1u) parent[static_cast<size_t>(find(i))] = find(j);
            int root = find(0);
            bool conn = true;
            for (int i = 1; i < 6; ++i) conn = conn && find(i) == root;
            connected6[mask] = conn ? 1 : 0;
        }
    }

    static int edge_bit(int i, int j) {
        if (i > j) std::swap(i, j);
        static constexpr int base[6] = {0, 5, 9, 12, 14, 15};
        return base[i] + (j - i - 1);
    }
};

const TinyConnectivity& tiny_connectivity() {
    static TinyConnectivity t;
    return t;
}

}  // namespace

DisconnectedTerminals::DisconnectedTerminals(std::vector<std::vector<int>> parts)
    : std::runtime_error(partition_to_string(parts)), partition(std::move(parts)) {}

SteinerSolver::SteinerSolver(const Graph& g) : g_(g) {}

std::vector<int> SteinerSolver::canonical(std::span<const int> terminals) const {
    std::vector<int> s(terminals.begin(), terminals.end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (int v : s)
        if (v < 0 || v >= g_.n()) throw std::invalid_argument("terminal out of range");
    return s;
}

const std::vector<int>& SteinerSolver::component_ids() {
    if (components_.empty() && g_.n() > 0) {
        components_.assign(static_cast<size_t>(g_.n()), -1);
        int comp = 0;
        std::deque<int> queue;
        for (int s = 0; s < g_.n(); ++s) {
            if (components_[static_cast<size_t>(s)] != -1) continue;
            components_[static_cast<size_t>(s)] = comp;
            queue.push_back(s);
            while (!queue.empty()) {
                int v = queue.front();
                queue.pop_front();
                for (int u : g_.neighbors(v))
                    if (components_[static_cast<size_t>(u)] == -1) {
                        components_[static_cast<size_t>(u)] = comp;
                        queue.push_back(u);
                    }
            }
            ++comp;
        }
    }
    return components_;
}

void SteinerSolver::require_connected(std::span<const int> terminals) {
    const auto& comp = component_ids();
    int first = comp[static_cast<size_t>(terminals[0])];
    bool ok = true;
    for (int t : terminals) ok = ok && comp[static_cast<size_t>(t)] == first;
    if (ok) return;
    std::unordered_map<int, std::vector<int>> groups;
    for (int t : terminals) groups[comp[static_cast<size_t>(t)]].push_back(t);
    std::vector<std::vector<int>> parts;
    for (auto& [id, vs] : groups) parts.push_back(vs);
    std::sort(parts.begin(), parts.end());
    throw DisconnectedTerminals(std::move(parts));
}

const std::vector<int32_t>& SteinerSolver::dist_from(int source) {
    auto it = bfs_cache_.find(source);
    if (it != bfs_cache_.end()) return it->second;
    std::vector<int32_t> dist(static_cast<size_t>(g_.n()), kInf);
    dist[static_cast<size_t>(source)] = 0;
    std::deque<int> queue{source};
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int u : g_.neighbors(v))
            if (dist[static_cast<size_t>(u)] == kInf) {
                dist[static_cast<size_t>(u)] = dist[static_cast<size_t>(v)] + 1;
                queue.push_back(u);
            }
    }
    return bfs_cache_.emplace(source, std::move(dist)).first->second;
}

bool SteinerSolver::diameter2() {
    if (diam2_state_ == -1) diam2_state_ = has_diameter_le2(g_) ? 1 : 0;
    return diam2_state_ == 1;
}

SteinerResult SteinerSolver::run_dp(const std::vector<int>& terminals) {
    const int s = static_cast<int>(terminals.size());
    const int n = g_.n();
    const uint32_t full = (1u << s) - 1;

    // Depth cap 2|S|-2 edges is valid whenever every terminal pair is within
    // distance 2 (paste length-<=2 paths along a chain of terminals).
    bool cap_valid = true;
    for (int i = 0; i < s && cap_valid; ++i) {
        const auto& di = dist_from(terminals[static_cast<size_t>(i)]);
        for (int j = i + 1; j < s; ++j) cap_valid = cap_valid && di[static_cast<size_t>(terminals[static_cast<size_t>(j)])] <= 2;
    }
    const int32_t cap = cap_valid ? std::max(2 * s - 2, 1) : static_cast<int32_t>(n);

    std::vector<std::vector<int32_t>> dp(full + 1);
    for (int i = 0; i < s; ++i) dp[1u << i] = dist_from(terminals[static_cast<size_t>(i)]);

    std::vector<std::vector<int>> buckets(static_cast<size_t>(cap) + 1);
    for (uint32_t mask = 1; mask <= full; ++mask) {
        if (std::popcount(mask) < 2) continue;
        uint32_t low = mask & (~mask + 1);
        std::vector<int32_t> label(static_cast<size_t>(n), kInf);
        for (uint32_t a = (mask - 1) & mask; a; a = (a - 1) & mask) {
            if (!(a & low)) continue;
            uint32_t b = mask ^ a;
            const auto& da = dp[a];
            const auto& db = dp[b];
            for (int v = 0; v < n; ++v) {
                int32_t cand = da[static_cast<size_t>(v)] + db[static_cast<size_t>(v)];
                if (cand < label[static_cast<size_t>(v)]) label[static_cast<size_t>(v)] = cand;
            }
        }
        // Dial relaxation over unit edges, labels bounded by the cap.
        for (auto& bucket : buckets) bucket.clear();
        for (int v = 0; v < n; ++v)
            if (label[static_cast<size_t>(v)] <= cap) buckets[static_cast<size_t>(label[static_cast<size_t>(v)])].push_back(v);
        for (int32_t d = 0; d <= cap; ++d) {
            for (size_t qi = 0; qi < buckets[static_cast<size_t>(d)].size(); ++qi) {
                int v = buckets[static_cast<size_t>(d)][qi];
                if (label[static_cast<size_t>(v)] != d) continue;
                if (d + 1 > cap) continue;
                for (int u : g_.neighbors(v))
                    if (label[static_cast<size_t>(u)] > d + 1) {
                        label[static_cast<size_t>(u)] = d + 1;
                        buckets[static_cast<size_t>(d) + 1].push_back(u);
                    }
            }
        }
        dp[mask] = std::move(label);
    }

    int32_t best = kInf;
    int root = -1;
    for (int v = 0; v < n; ++v)
        if (dp[full][static_cast<size_t>(v)] < best) {
            best = dp[full][static_cast<size_t>(v)];
            root = v;
        }
    if (best >= kInf) throw std::logic_error("steiner DP found no tree for connected terminals");

    // Reconstruction by value descent; deterministic (smallest vertex /
    // first submask split at every choice point).
    std::set<std::pair<int, int>> tree_edges;
    std::vector<std::pair<uint32_t, int>> stack{{full, root}};
    while (!stack.empty()) {
        auto [mask, v] = stack.back();
        stack.pop_back();
        int32_t val = dp[mask][static_cast<size_t>(v)];
        if (std::popcount(mask) == 1) {
            while (val > 0) {
                int next = -1;
                for (int u : g_.neighbors(v))
                    if (dp[mask][static_cast<size_t>(u)] == val - 1) {
                        next = u;
                        break;
                    }
                if (next < 0) throw std::logic_error("steiner witness walk failed");
                tree_edges.emplace(std::min(v, next), std::max(v, next));
                v = next;
                --val;
            }
            continue;
        }
        uint32_t low = mask & (~mask + 1);
        uint32_t split = 0;
        for (uint32_t a = (mask - 1) & mask; a; a = (a - 1) & mask) {
            if (!(a & low)) continue;
            if (dp[a][static_cast<size_t>(v)] + dp[mask ^ a][static_cast<size_t>(v)] == val) {
                split = a;
                break;
            }
        }
        if (split) {
            stack.emplace_back(split, v);
            stack.emplace_back(mask ^ split, v);
            continue;
        }
        int next = -1;
        for (int u : g_.neighbors(v))
            if (dp[mask][static_cast<size_t>(u)] == val - 1) {
                next = u;
                break;
            }
        if (next < 0) throw std::logic_error("steiner witness walk failed");
        tree_edges.emplace(std::min(v, next), std::max(v, next));
        stack.emplace_back(mask, next);
    }

    SteinerResult result;
    result.size = best + 1;
    result.witness.assign(tree_edges.begin(), tree_edges.end());

    // Witness validation: edges exist, it is a tree, spans the terminals,
    // and its vertex count matches the claimed size.
    std::set<int> verts(terminals.begin(), terminals.end());
    for (auto [a, b] : result.witness) {
        if (!g_.adjacent(a, b)) throw std::logic_error("steiner witness uses a non-edge");
        verts.insert(a);
        verts.insert(b);
    }
    if (s == 1) {
        if (!result.witness.empty() || result.size != 1)
            throw std::logic_error("steiner witness invalid for a single terminal");
        return result;
    }
    if (static_cast<int>(verts.size()) != result.size ||
        result.witness.size() + 1 != verts.size())
        throw std::logic_error("steiner witness is not a tree of the claimed size");
    std::unordered_map<int, int> parent;
    for (int v : verts) parent[v] = v;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto [a, b] : result.witness) parent[find(a)] = find(b);
    for (int t : terminals)
        if (find(t) != find(terminals[0])) throw std::logic_error("steiner witness does not span terminals");
    return result;
}

SteinerResult SteinerSolver::solve(std::span<const int> terminals) {
    auto s = canonical(terminals);
    if (s.empty()) throw std::invalid_argument("steiner: at least one terminal required");
    if (static_cast<int>(s.size()) > kMaxTerminals)
        throw std::invalid_argument("steiner: terminal sets larger than 8 are rejected");
    require_connected(s);
    if (s.size() == 1) return {1, {}};
    return run_dp(s);
}

int SteinerSolver::pair_extension_size(int a, int b, int i) {
    const uint64_t* ra = g_.row(a);
    const uint64_t* rb = g_.row(b);
    bool ia = (ra[static_cast<size_t>(i) >> 6] >> (i & 63)) & 1u;
    bool ib = (rb[static_cast<size_t>(i) >> 6] >> (i & 63)) & 1u;
    if (g_.adjacent(a, b)) return (ia || ib) ? 3 : 4;
    if (ia && ib) return 3;
    if (ia || ib) return 4;
    const uint64_t* ri = g_.row(i);
    for (size_t w = 0; w < g_.row_words(); ++w)
        if (ra[w] & rb[w] & ri[w]) return 4;
    return 5;
}

int SteinerSolver::st3_diam2(int a, int b, int c) {
    auto d2 = [&](int u, int v) { return g_.adjacent(u, v) ? 1 : 2; };
    int anchored = std::min({d2(a, b) + d2(a, c), d2(b, a) + d2(b, c), d2(c, a) + d2(c, b)});
    // Best external center: 6 - (#terminals adjacent to it).
    const uint64_t* ra = g_.row(a);
    const uint64_t* rb = g_.row(b);
    const uint64_t* rc = g_.row(c);
    int maxhits = 0;
    const size_t words = g_.row_words();
    for (size_t w = 0; w < words && maxhits < 3; ++w)
        if (ra[w] & rb[w] & rc[w]) maxhits = 3;
    if (maxhits < 3) {
        for (size_t w = 0; w < words && maxhits < 2; ++w)
            if ((ra[w] & rb[w]) | (ra[w] & rc[w]) | (rb[w] & rc[w])) maxhits = 2;
    }
    if (maxhits == 0) maxhits = 1;  // any neighbor of any terminal
    int edges = std::min(anchored, 6 - maxhits);
    return edges + 1;
}

int SteinerSolver::st4_diam2(const std::vector<int>& s) {
    const size_t words = g_.row_words();
    // Components of the induced subgraph on the four terminals.
    std::array<int, 4> comp{0, 1, 2, 3};
    auto find = [&](int x) {
        while (comp[static_cast<size_t>(x)] != x) x = comp[static_cast<size_t>(x)];
        return x;
    };
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (g_.adjacent(s[static_cast<size_t>(i)], s[static_cast<size_t>(j)])) comp[static_cast<size_t>(find(i))] = find(j);
    std::vector<std::vector<int>> groups;
    for (int root = 0; root < 4; ++root) {
        if (find(root) != root) continue;
        groups.emplace_back();
        for (int i = 0; i < 4; ++i)
            if (find(i) == root) groups.back().push_back(s[static_cast<size_t>(i)]);
    }
    if (groups.size() == 1) return 4;

    // One extra vertex: must neighbor every component.
    std::vector<uint64_t> cand(words, ~0ULL);
    std::vector<uint64_t> group_or(words);
    for (const auto& grp : groups) {
        std::fill(group_or.begin(), group_or.end(), 0ULL);
        for (int t : grp) {
            const uint64_t* rt = g_.row(t);
            for (size_t w = 0; w < words; ++w) group_or[w] |= rt[w];
        }
        for (size_t w = 0; w < words; ++w) cand[w] &= group_or[w];
    }
    for (int t : s) cand[static_cast<size_t>(t) >> 6] &= ~(1ULL << (t & 63));
    for (size_t w = 0; w < words; ++w)
        if (cand[w]) return 5;

    // Two extra vertices: both must neighbor some terminal. Exhaustive over
    // pairs from the terminal neighborhood with a 6-vertex connectivity table.
    std::vector<uint64_t> nbhd(words, 0ULL);
    for (int t : s) {
        const uint64_t* rt = g_.row(t);
        for (size_t w = 0; w < words; ++w) nbhd[w] |= rt[w];
    }
    for (int t : s) nbhd[static_cast<size_t>(t) >> 6] &= ~(1ULL << (t & 63));
    std::vector<int> candidates;
    for (size_t w = 0; w < words; ++w) {
        uint64_t bitsw = nbhd[w];
        while (bitsw) {
            candidates.push_back(static_cast<int>(w * 64 + static_cast<size_t>(std::countr_zero(bitsw))));
            bitsw &= bitsw - 1;
        }
    }
    const auto& tiny = tiny_connectivity();
    uint32_t base_mask = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (g_.adjacent(s[static_cast<size_t>(i)], s[static_cast<size_t>(j)]))
                base_mask |= 1u << TinyConnectivity::edge_bit(i, j);
    std::vector<uint32_t> vmask(candidates.size(), 0);
    for (size_t ci = 0; ci < candidates.size(); ++ci) {
        for (int i = 0; i < 4; ++i)
            if (g_.adjacent(candidates[ci], s[static_cast<size_t>(i)]))
                vmask[ci] |= 1u << TinyConnectivity::edge_bit(i, 4);
    }
    std::vector<uint32_t> wmask(candidates.size(), 0);  // same adjacencies in slot 5
    for (size_t ci = 0; ci < candidates.size(); ++ci)
        for (int i = 0; i < 4; ++i)
            if (vmask[ci] & (1u << TinyConnectivity::edge_bit(i, 4)))
                wmask[ci] |= 1u << TinyConnectivity::edge_bit(i, 5);
    for (size_t ci = 0; ci < candidates.size(); ++ci) {
        for (size_t cj = ci + 1; cj < candidates.size(); ++cj) {
            uint32_t mask = base_mask | vmask[ci] | wmask[cj];
            if (g_.adjacent(candidates[ci], candidates[cj]))
                mask |= 1u << TinyConnectivity::edge_bit(4, 5);
            if (tiny.connected6[mask]) return 6;
        }
    }
    return 7;  // chain through pairwise common neighbors always realizes 2|S|-1
}

int SteinerSolver::size_closed_form(const std::vector<int>& s) {
    switch (s.size()) {
        case 1:
            return 1;
        case 2:
            return g_.adjacent(s[0], s[1]) ? 2 : 3;
        case 3:
            return st3_diam2(s[0], s[1], s[2]);
        case 4:
            return st4_diam2(s);
        default:
            return -1;
    }
}

int SteinerSolver::size(std::span<const int> terminals) {
    auto s = canonical(terminals);
    if (s.empty()) throw std::invalid_argument("steiner: at least one terminal required");
    if (static_cast<int>(s.size()) > kMaxTerminals)
        throw std::invalid_argument("steiner: terminal sets larger than 8 are rejected");
    if (s.size() == 1) return 1;
    if (s.size() <= 4 && diameter2()) {
        int r = size_closed_form(s);
        if (r > 0) return r;
    }
    std::string key;
    for (int v : s) key += std::to_string(v) + ",";
    if (auto it = size_memo_.find(key); it != size_memo_.end()) return it->second;
    require_connected(s);
    int r = run_dp(s).size;
    size_memo_.emplace(std::move(key), r);
    return r;
}

void SteinerSolver::for_each_extension(std::span<const int> terminals,
                                       const std::function<void(int, int)>& visit) {
    auto s = canonical(terminals);
    if (s.empty()) throw std::invalid_argument("count_extensions: nonempty S required");
    require_connected(s);

    if (s.size() == 1 && diameter2()) {
        int a = s[0];
        for (int i = 0; i < g_.n(); ++i) {
            if (i == a) continue;
            visit(i, g_.adjacent(a, i) ? 2 : 3);
        }
        return;
    }
    if (s.size() == 2 && diameter2()) {
        for (int i = 0; i < g_.n(); ++i) {
            if (i == s[0] || i == s[1]) continue;
            visit(i, pair_extension_size(s[0], s[1], i));
        }
        return;
    }

    // Generic path: one Steiner computation per candidate vertex.
    std::vector<int> ext(s.size() + 1);
    std::copy(s.begin(), s.end(), ext.begin());
    for (int i = 0; i < g_.n(); ++i) {
        if (std::binary_search(s.begin(), s.end(), i)) continue;
        ext.back() = i;
        visit(i, size(ext));
    }
}

SteinerSolver::ExtensionCounts SteinerSolver::count_extensions(std::span<const int> terminals) {
    ExtensionCounts counts;
    counts.base = size(terminals);
    for_each_extension(terminals, [&](int, int st_ext) {
        if (st_ext == counts.base)
            ++counts.same;
        else if (st_ext == counts.base + 1)
            ++counts.plus_one;
        else
            ++counts.plus_two_or_more;
    });
    return counts;
}

SteinerResult steiner_size(const Graph& g, std::span<const int> terminals) {
    SteinerSolver solver(g);
    return solver.solve(terminals);
}

}  // namespace gaplab
