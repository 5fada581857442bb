#include <cmath>
#include <numeric>
#include <span>
#include <set>
#include <sstream>

#include "doctest.h"
#include "gaplab/graph.hpp"
#include "gaplab/rng.hpp"

using namespace gaplab;

namespace {

Graph complete_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return Graph::from_edges(n, std::move(edges));
}

Graph cycle_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v < n; ++v) edges.emplace_back(std::min(v, (v + 1) % n), std::max(v, (v + 1) % n));
    return Graph::from_edges(n, std::move(edges));
}

}  // namespace

TEST_CASE("gen_gnp degenerate probabilities") {
    CHECK(gen_gnp({4, 0.0, 123}).m() == 0);
    CHECK(gen_gnp({4, 1.0, 123}).m() == 6);
    CHECK_THROWS_AS(gen_gnp({4, 1.5, 1}), std::invalid_argument);
    CHECK_THROWS_AS(gen_gnp({0, 0.5, 1}), std::invalid_argument);
}

TEST_CASE("gen_gnp is deterministic per seed and edge count is near the mean") {
    const int n = 1000;
    const double p = std::log(1000.0) / std::sqrt(1000.0);
    Graph a = gen_gnp({n, p, 7});
    Graph b = gen_gnp({n, p, 7});
    CHECK(a.edges() == b.edges());
    Graph c = gen_gnp({n, p, 8});
    CHECK(a.edges() != c.edges());

    // Binomial(C(n,2), p): mean and five standard deviations.
    double pairs = 0.5 * n * (n - 1);
    double mean = pairs * p;
    double sd = std::sqrt(pairs * p * (1 - p));
    CHECK(std::abs(static_cast<double>(a.m()) - mean) <= 5 * sd);
}

TEST_CASE("graph construction rejects malformed input") {
    CHECK_THROWS(Graph::from_edges(3, {{0, 0}}));
    CHECK_THROWS(Graph::from_edges(3, {{0, 1}, {1, 0}}));
    CHECK_THROWS(Graph::from_edges(3, {{0, 3}}));
}

TEST_CASE("adjacency structures agree") {
    Graph g = gen_gnp({80, 0.2, 42});
    for (int u = 0; u < g.n(); ++u) {
        std::set<int> nb(g.neighbors(u).begin(), g.neighbors(u).end());
        for (int v = 0; v < g.n(); ++v) CHECK(g.adjacent(u, v) == (nb.count(v) > 0));
    }
}

TEST_CASE("audit on complete and empty graphs") {
    PropertyReport full = audit_random_graph_properties(complete_graph(10));
    CHECK(full.min_common == 8);
    CHECK(full.pass_common_lower);

    Graph empty = Graph::from_edges(10, {});
    PropertyReport rep = audit_random_graph_properties(empty);
    CHECK_FALSE(rep.pass_degree);
    CHECK(rep.min_degree == 0);
}

TEST_CASE("audit report JSON carries the fixed keys") {
    PropertyReport rep = audit_random_graph_properties(complete_graph(5));
    std::string json = rep.to_json();
    for (const char* key :
         {"min_degree", "max_degree", "min_common", "max_common", "pass_degree",
          "pass_common_lower", "pass_common_upper"})
        CHECK(json.find(key) != std::string::npos);
}

TEST_CASE("audit is pure and idempotent") {
    Graph g = gen_gnp({128, 0.3, 5});
    auto edges_before = g.edges();
    PropertyReport r1 = audit_random_graph_properties(g);
    PropertyReport r2 = audit_random_graph_properties(g);
    CHECK(g.edges() == edges_before);
    CHECK(r1.min_common == r2.min_common);
    CHECK(r1.max_degree == r2.max_degree);
}

TEST_CASE("densest k brute force on structured graphs") {
    CHECK(densest_k_bruteforce(complete_graph(5), 3).edge_count == 3);
    CHECK(densest_k_bruteforce(cycle_graph(5), 3).edge_count == 2);
}

TEST_CASE("densest k brute force double enumeration") {
    Graph g = gen_gnp({24, 0.3, 3});
    DensestResult fwd = densest_k_bruteforce(g, 5);
    DensestResult rev = densest_k_bruteforce(g, 5, 50'000'000, /*reverse_order=*/true);
    CHECK(fwd.edge_count == rev.edge_count);
    CHECK(count_induced_edges(g, fwd.vertices) == fwd.edge_count);
}

TEST_CASE("densest k brute force budget error names the bound") {
    Graph g = gen_gnp({64, 0.2, 1});
    CHECK_THROWS_AS(densest_k_bruteforce(g, 20, 1000), BudgetExceeded);
    try {
        densest_k_bruteforce(g, 20, 1000);
    } catch (const BudgetExceeded& e) {
        CHECK(e.budget == 1000);
        CHECK(std::string(e.what()).find("1000") != std::string::npos);
    }
}

TEST_CASE("local search on clique and star") {
    CHECK(densest_k_localsearch(complete_graph(8), 4, 3, 1).edge_count == 6);

    // star K_{1,9}: center 0
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v <= 9; ++v) edges.emplace_back(0, v);
    Graph star = Graph::from_edges(10, std::move(edges));
    CHECK(densest_k_localsearch(star, 3, 5, 1).edge_count == 2);
}

TEST_CASE("local search never beats brute force and usually matches") {
    Graph g = gen_gnp({24, 0.3, 3});
    long opt = densest_k_bruteforce(g, 5).edge_count;
    int matches = 0;
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        long ls = densest_k_localsearch(g, 5, 12, seed).edge_count;
        CHECK(ls <= opt);
        if (ls == opt) ++matches;
    }
    CHECK(matches >= 8);
}

TEST_CASE("local search is deterministic per seed") {
    Graph g = gen_gnp({60, 0.25, 9});
    DensestResult a = densest_k_localsearch(g, 8, 3, 77);
    DensestResult b = densest_k_localsearch(g, 8, 3, 77);
    CHECK(a.vertices == b.vertices);
    CHECK(a.edge_count == b.edge_count);
}

TEST_CASE("graph file round trip") {
    Graph g = gen_gnp({30, 0.2, 11});
    std::stringstream ss;
    write_graph(g, ss);
    Graph h = read_graph(ss);
    CHECK(g.n() == h.n());
    CHECK(g.edges() == h.edges());
}

TEST_CASE("diameter-2 detection") {
    CHECK(has_diameter_le2(complete_graph(6)));
    CHECK_FALSE(has_diameter_le2(cycle_graph(6)));
    CHECK(has_diameter_le2(cycle_graph(5)));
}

TEST_CASE("sampled k-subset density stays below 5 ln n") {
    for (int n : {1024, 2048}) {
        Graph g = gen_gnp({n, gnp_default_p(n), 6});
        int k = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
        double bound = 5.0 * std::log(static_cast<double>(n));
        Engine eng = make_engine(derive_seed(6, 0x646e73ULL));
        double max_density = 0;
        std::vector<int> witness;
        std::vector<int> pool(static_cast<size_t>(n));
        for (int rep = 0; rep < 10000; ++rep) {
            std::iota(pool.begin(), pool.end(), 0);
            for (int i = 0; i < k; ++i) {
                auto j = static_cast<size_t>(i) + next_below(eng, static_cast<uint64_t>(n - i));
                std::swap(pool[static_cast<size_t>(i)], pool[j]);
            }
            std::span<const int> subset(pool.data(), static_cast<size_t>(k));
            double density = 2.0 * static_cast<double>(count_induced_edges(g, subset)) / k;
            if (density > max_density) {
                max_density = density;
                witness.assign(subset.begin(), subset.end());
            }
        }
        DensestResult ls = densest_k_localsearch(g, k, 6, 7);
        double ls_density = 2.0 * static_cast<double>(ls.edge_count) / k;
        if (ls_density > max_density) {
            max_density = ls_density;
            witness = ls.vertices;
        }
        INFO("n=", n, " max density ", max_density, " bound ", bound);
        CHECK(max_density <= bound);
        CHECK_FALSE(witness.empty());
    }
}
