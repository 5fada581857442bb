#include <cmath>

#include <Eigen/Dense>

#include "doctest.h"
#include "gaplab/sa.hpp"
#include "gaplab/sdp.hpp"

using namespace gaplab;

namespace {

Graph complete_graph(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return Graph::from_edges(n, std::move(edges));
}

}  // namespace

TEST_CASE("min_eigenvalue on known spectra") {
    SymmetricMatrix id(5);
    for (int i = 0; i < 5; ++i) id.set(i, i, 1.0);
    CHECK(min_eigenvalue(id) == doctest::Approx(1.0));

    SymmetricMatrix ones(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j <= i; ++j) ones.set(i, j, 1.0);
    CHECK(min_eigenvalue(ones) == doctest::Approx(0.0).epsilon(1e-12));

    SymmetricMatrix swap2(2);
    swap2.set(0, 1, 1.0);
    CHECK(min_eigenvalue(swap2) == doctest::Approx(-1.0));

    SymmetricMatrix bad(2);
    bad.set(0, 0, std::nan(""));
    CHECK_THROWS_AS(min_eigenvalue(bad), std::invalid_argument);
}

TEST_CASE("eigendecomposition reconstructs the input") {
    Graph g = gen_gnp({60, 0.3, 21});
    SymmetricMatrix z = build_Z(g, 3);
    Eigen::MatrixXd m(60, 60);
    for (int i = 0; i < 60; ++i)
        for (int j = 0; j < 60; ++j) m(i, j) = z(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    Eigen::MatrixXd rec = solver.eigenvectors() * solver.eigenvalues().asDiagonal() *
                          solver.eigenvectors().transpose();
    CHECK((rec - m).norm() / m.norm() <= 1e-8);
}

TEST_CASE("build_Z entry formula") {
    // empty graph, n=2, L=1: [[n^-1/2, n^-1],[n^-1, n^-1/2]]
    Graph empty = Graph::from_edges(2, {});
    SymmetricMatrix z = build_Z(empty, 1);
    CHECK(z(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(z(0, 1) == doctest::Approx(0.5));

    // diagonal entry for n = 10^4, L = 10 equals x_i = 10^-3
    Graph tiny = Graph::from_edges(10000, {{0, 1}});
    CHECK(build_Z(tiny, 10)(0, 0) == doctest::Approx(1e-3));
}

TEST_CASE("Z agrees with the SA pair table exactly (as rationals)") {
    Graph g = gen_gnp({500, gnp_default_p(500), 4});
    REQUIRE(has_diameter_le2(g));
    SaAssignment a(g, 3);
    const int64_t n = 500;
    const Rational l2(9);
    // Z entries as exact quartics: diag theta^-2/L, edge theta^-3/L^2,
    // non-edge theta^-4/L^2. Compare against x_{i}, x_{ij} on a sample and
    // on every pair of the first 40 vertices.
    for (int i = 0; i < 40; ++i) {
        std::vector<int> si{i};
        CHECK(a.value(si) == Quartic::theta_pow(-2, n) / Rational(3));
        for (int j = i + 1; j < 40; ++j) {
            std::vector<int> sij{i, j};
            Quartic expect = g.adjacent(i, j) ? Quartic::theta_pow(-3, n) / l2
                                              : Quartic::theta_pow(-4, n) / l2;
            CHECK(a.value(sij) == expect);
        }
    }
}

TEST_CASE("check_mixed_psd on structured graphs") {
    // K_n: Z is a positive combination of J, I, J-I
    PsdVerdict kn = check_mixed_psd(complete_graph(40), 2, 1e-8);
    CHECK(kn.pass_Z);

    // perfect matching on n=500: adjacency spectrum is +-1
    std::vector<std::pair<int, int>> match;
    for (int i = 0; i < 500; i += 2) match.emplace_back(i, i + 1);
    Graph matching = Graph::from_edges(500, std::move(match));
    PsdVerdict pm = check_mixed_psd(matching, 3, 1e-8);
    CHECK(pm.lambda_min_A == doctest::Approx(-1.0));
    CHECK(pm.pass_A);
    CHECK(pm.pass_Z);
}

TEST_CASE("decomposition lower bound for lambda_min(Z)") {
    Graph g = gen_gnp({300, gnp_default_p(300), 2});
    const int level = 6;
    PsdVerdict v = check_mixed_psd(g, level, 1e-8);
    double nd = 300.0, l = level;
    double bound = (1.0 / l) * (1.0 / std::sqrt(nd) + v.lambda_min_A / (std::pow(nd, 0.75) * l));
    CHECK(v.lambda_min_Z >= bound - 1e-9);
}

TEST_CASE("psd verdict JSON fields") {
    PsdVerdict v = check_mixed_psd(complete_graph(10), 2, 1e-8);
    std::string json = v.to_json();
    for (const char* key : {"lambda_min_Z", "lambda_min_A", "bound_A", "pass_Z", "pass_A"})
        CHECK(json.find(key) != std::string::npos);
}
