#include "gaplab/sdp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gaplab {

SymmetricMatrix::SymmetricMatrix(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("matrix dimension must be >= 1");
    tri_.assign(static_cast<size_t>(dim) * (static_cast<size_t>(dim) + 1) / 2, 0.0);
}

SymmetricMatrix build_Z(const Graph& g, int level) {
    if (level < 1) throw std::invalid_argument("level must be >= 1");
    const int n = g.n();
    const double nd = static_cast<double>(n);
    const double l = static_cast<double>(level);
    const double diag = 1.0 / std::sqrt(nd) / l;
    const double edge = 1.0 / std::pow(nd, 0.75) / (l * l);
    const double non_edge = 1.0 / nd / (l * l);
    SymmetricMatrix z(n);
    for (int i = 0; i < n; ++i) {
        z.set(i, i, diag);
        for (int j = 0; j < i; ++j) z.set(i, j, g.adjacent(i, j) ? edge : non_edge);
    }
    return z;
}

SymmetricMatrix adjacency_matrix(const Graph& g) {
    SymmetricMatrix a(g.n());
    for (auto [u, v] : g.edges()) a.set(u, v, 1.0);
    return a;
}

namespace {

Eigen::MatrixXd to_eigen(const SymmetricMatrix& m) {
    Eigen::MatrixXd out(m.dim(), m.dim());
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j <= i; ++j) {
            double v = m(i, j);
            if (!std::isfinite(v)) throw std::invalid_argument("matrix has non-finite entries");
            out(i, j) = v;
            out(j, i) = v;
        }
    return out;
}

}  // namespace

double min_eigenvalue(const SymmetricMatrix& m) {
    Eigen::MatrixXd mat = to_eigen(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(mat, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    return solver.eigenvalues()(0);
}

PsdVerdict check_mixed_psd(const Graph& g, int level, double tol) {
    PsdVerdict verdict;
    const double nd = static_cast<double>(g.n());
    verdict.lambda_min_Z = min_eigenvalue(build_Z(g, level));
    verdict.lambda_min_A = g.m() > 0 ? min_eigenvalue(adjacency_matrix(g)) : 0.0;
    verdict.bound_A = -4.0 * std::pow(nd, 0.25) * std::sqrt(std::log(nd));
    verdict.pass_Z = verdict.lambda_min_Z >= -tol;
    verdict.pass_A = verdict.lambda_min_A >= verdict.bound_A;
    return verdict;
}

std::string PsdVerdict::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"lambda_min_Z\": " << lambda_min_Z << ", \"lambda_min_A\": " << lambda_min_A
       << ", \"bound_A\": " << bound_A << ", \"pass_Z\": " << (pass_Z ? "true" : "false")
       << ", \"pass_A\": " << (pass_A ? "true" : "false") << "}";
    return os.str();
}

}  // namespace gaplab
