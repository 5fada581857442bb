#include "gaplab/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "gaplab/rng.hpp"

namespace gaplab {

BudgetExceeded::BudgetExceeded(const std::string& what, uint64_t need, uint64_t bgt)
    : std::runtime_error(what + " (needs " + std::to_string(need) + ", budget " +
                         std::to_string(bgt) + ")"),
      needed(need),
      budget(bgt) {}

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edges) {
    if (n < 0) throw std::invalid_argument("negative vertex count");
    Graph g;
    g.n_ = n;
    g.words_ = (static_cast<size_t>(n) + 63) / 64;
    for (auto& [u, v] : edges) {
        if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
        if (u > v) std::swap(u, v);
        if (u < 0 || v >= n) throw std::invalid_argument("edge endpoint out of range");
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw std::invalid_argument("duplicate edge");
    g.edges_ = std::move(edges);
    g.adj_.assign(static_cast<size_t>(n), {});
    g.bits_.assign(static_cast<size_t>(n) * g.words_, 0);
    for (auto [u, v] : g.edges_) {
        g.adj_[static_cast<size_t>(u)].push_back(v);
        g.adj_[static_cast<size_t>(v)].push_back(u);
        g.bits_[static_cast<size_t>(u) * g.words_ + (static_cast<size_t>(v) >> 6)] |= 1ULL << (v & 63);
        g.bits_[static_cast<size_t>(v) * g.words_ + (static_cast<size_t>(u) >> 6)] |= 1ULL << (u & 63);
    }
    for (auto& nb : g.adj_) std::sort(nb.begin(), nb.end());
    return g;
}

double gnp_default_p(int n) { return std::log(static_cast<double>(n)) / std::sqrt(static_cast<double>(n)); }

Graph gen_gnp(const GnpParams& params) {
    if (params.n < 1) throw std::invalid_argument("gen_gnp: n must be >= 1");
    if (!(params.p >= 0.0 && params.p <= 1.0))
        throw std::invalid_argument("gen_gnp: p must be in [0,1]");
    Engine eng = make_engine(params.seed);
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<size_t>(0.5 * params.p * params.n * (params.n - 1) * 1.05) + 16);
    for (int u = 0; u + 1 < params.n; ++u)
        for (int v = u + 1; v < params.n; ++v)
            if (next_unit(eng) < params.p) edges.emplace_back(u, v);
    return Graph::from_edges(params.n, std::move(edges));
}

namespace {

long common_neighbors(const Graph& g, int u, int v) {
    const uint64_t* ru = g.row(u);
    const uint64_t* rv = g.row(v);
    long c = 0;
    for (size_t w = 0; w < g.row_words(); ++w) c += std::popcount(ru[w] & rv[w]);
    return c;
}

}  // namespace

PropertyReport audit_random_graph_properties(const Graph& g) {
    PropertyReport rep;
    const int n = g.n();
    const double ln_n = std::log(static_cast<double>(std::max(n, 2)));
    rep.degree_lo = std::sqrt(static_cast<double>(n)) * ln_n / 2.0;
    rep.degree_hi = 2.0 * std::sqrt(static_cast<double>(n)) * ln_n;
    rep.common_hi = 2.0 * ln_n * ln_n;

    rep.min_degree = n > 0 ? g.degree(0) : 0;
    rep.max_degree = rep.min_degree;
    for (int v = 1; v < n; ++v) {
        rep.min_degree = std::min(rep.min_degree, g.degree(v));
        rep.max_degree = std::max(rep.max_degree, g.degree(v));
    }
    rep.min_common = n >= 2 ? common_neighbors(g, 0, 1) : 0;
    rep.max_common = rep.min_common;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            long c = common_neighbors(g, u, v);
            rep.min_common = std::min(rep.min_common, c);
            rep.max_common = std::max(rep.max_common, c);
        }
    rep.pass_degree = rep.min_degree >= rep.degree_lo && rep.max_degree <= rep.degree_hi;
    rep.pass_common_lower = rep.min_common >= 1;
    rep.pass_common_upper = rep.max_common <= rep.common_hi;
    return rep;
}

std::string PropertyReport::to_json() const {
    std::ostringstream os;
    os << "{\"min_degree\": " << min_degree << ", \"max_degree\": " << max_degree
       << ", \"min_common\": " << min_common << ", \"max_common\": " << max_common
       << ", \"pass_degree\": " << (pass_degree ? "true" : "false")
       << ", \"pass_common_lower\": " << (pass_common_lower ? "true" : "false")
       << ", \"pass_common_upper\": " << (pass_common_upper ? "true" : "false") << "}";
    return os.str();
}

bool has_diameter_le2(const Graph& g) {
    const int n = g.n();
    const size_t words = g.row_words();
    for (int u = 0; u < n; ++u) {
        const uint64_t* ru = g.row(u);
        for (int v = u + 1; v < n; ++v) {
            if (g.adjacent(u, v)) continue;
            const uint64_t* rv = g.row(v);
            bool found = false;
            for (size_t w = 0; w < words && !found; ++w) found = (ru[w] & rv[w]) != 0;
            if (!found) return false;
        }
    }
    return true;
}

long count_induced_edges(const Graph& g, std::span<const int> vertices) {
    long e = 0;
    for (size_t i = 0; i < vertices.size(); ++i)
        for (size_t j = i + 1; j < vertices.size(); ++j)
            if (g.adjacent(vertices[i], vertices[j])) ++e;
    return e;
}

namespace {

uint64_t binomial_capped(int n, int k, uint64_t cap) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        double est = static_cast<double>(r) * (n - k + i) / i;
        if (est > 2.0 * static_cast<double>(cap)) return cap + 1;
        r = r * static_cast<uint64_t>(n - k + i) / static_cast<uint64_t>(i);
        if (r > cap) return cap + 1;
    }
    return r;
}

void bruteforce_rec(const Graph& g, const std::vector<int>& order, size_t next, int remaining,
                    std::vector<int>& current, long edges, DensestResult& best) {
    if (remaining == 0) {
        if (edges > best.edge_count) {
            best.edge_count = edges;
            best.vertices = current;
        }
        return;
    }
    for (size_t i = next; i + static_cast<size_t>(remaining) <= order.size(); ++i) {
        int v = order[i];
        long gained = 0;
        for (int u : current)
            if (g.adjacent(u, v)) ++gained;
        current.push_back(v);
        bruteforce_rec(g, order, i + 1, remaining - 1, current, edges + gained, best);
        current.pop_back();
    }
}

}  // namespace

DensestResult densest_k_bruteforce(const Graph& g, int k, uint64_t budget, bool reverse_order) {
    if (k < 0 || k > g.n()) throw std::invalid_argument("densest_k_bruteforce: bad k");
    uint64_t subsets = binomial_capped(g.n(), k, budget);
    if (subsets > budget)
        throw BudgetExceeded("densest_k_bruteforce: C(n,k) exceeds enumeration budget", subsets,
                             budget);
    std::vector<int> order(static_cast<size_t>(g.n()));
    std::iota(order.begin(), order.end(), 0);
    if (reverse_order) std::reverse(order.begin(), order.end());
    DensestResult best;
    best.edge_count = -1;
    std::vector<int> current;
    current.reserve(static_cast<size_t>(k));
    bruteforce_rec(g, order, 0, k, current, 0, best);
    if (best.edge_count < 0) best.edge_count = 0;  // k == 0
    std::sort(best.vertices.begin(), best.vertices.end());
    return best;
}

DensestResult densest_k_localsearch(const Graph& g, int k, int restarts, uint64_t seed) {
    const int n = g.n();
    if (k < 1 || k > n) throw std::invalid_argument("densest_k_localsearch: k out of range");
    DensestResult best;
    best.edge_count = -1;

    for (int r = 0; r < restarts; ++r) {
        Engine eng = make_engine(derive_seed(seed, /*stream=*/0x6c73ULL, static_cast<uint64_t>(r)));
        // Seeded partial Fisher-Yates start.
        std::vector<int> pool(static_cast<size_t>(n));
        std::iota(pool.begin(), pool.end(), 0);
        for (int i = 0; i < k; ++i) {
            auto j = static_cast<size_t>(i) + next_below(eng, static_cast<uint64_t>(n - i));
            std::swap(pool[static_cast<size_t>(i)], pool[j]);
        }
        std::vector<char> in_set(static_cast<size_t>(n), 0);
        for (int i = 0; i < k; ++i) in_set[static_cast<size_t>(pool[static_cast<size_t>(i)])] = 1;

        std::vector<int> deg_in(static_cast<size_t>(n), 0);
        long edges = 0;
        for (int v = 0; v < n; ++v)
            for (int u : g.neighbors(v))
                if (in_set[static_cast<size_t>(u)]) {
                    ++deg_in[static_cast<size_t>(v)];
                    if (in_set[static_cast<size_t>(v)] && u < v) ++edges;
                }

        // Steepest swap descent with lexicographic tie-break.
        for (;;) {
            int best_gain = 0, best_out = -1, best_in = -1;
            for (int out = 0; out < n; ++out) {
                if (!in_set[static_cast<size_t>(out)]) continue;
                for (int in = 0; in < n; ++in) {
                    if (in_set[static_cast<size_t>(in)]) continue;
                    int gain = deg_in[static_cast<size_t>(in)] - deg_in[static_cast<size_t>(out)] -
                               (g.adjacent(in, out) ? 1 : 0);
                    if (gain > best_gain) {
                        best_gain = gain;
                        best_out = out;
                        best_in = in;
                    }
                }
            }
            if (best_gain <= 0) break;
            in_set[static_cast<size_t>(best_out)] = 0;
            in_set[static_cast<size_t>(best_in)] = 1;
            edges += best_gain;
            for (int u : g.neighbors(best_out)) --deg_in[static_cast<size_t>(u)];
            for (int u : g.neighbors(best_in)) ++deg_in[static_cast<size_t>(u)];
        }

        if (edges > best.edge_count) {
            best.edge_count = edges;
            best.vertices.clear();
            for (int v = 0; v < n; ++v)
                if (in_set[static_cast<size_t>(v)]) best.vertices.push_back(v);
        }
    }
    if (best.edge_count < 0) throw std::invalid_argument("densest_k_localsearch: restarts must be >= 1");
    return best;
}

Graph read_graph(std::istream& in) {
    int n = 0;
    long m = 0;
    if (!(in >> n >> m)) throw std::runtime_error("graph file: bad header");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<size_t>(m));
    for (long i = 0; i < m; ++i) {
        int u, v;
        if (!(in >> u >> v)) throw std::runtime_error("graph file: truncated edge list");
        if (u >= v) throw std::runtime_error("graph file: edges must satisfy u < v");
        edges.emplace_back(u, v);
    }
    return Graph::from_edges(n, std::move(edges));
}

Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    return read_graph(in);
}

void write_graph(const Graph& g, std::ostream& out) {
    out << g.n() << " " << g.m() << "\n";
    for (auto [u, v] : g.edges()) out << u << " " << v << "\n";
}

void save_graph(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    write_graph(g, out);
}

}  // namespace gaplab
