#pragma once

#include <string>
#include <vector>

#include "gaplab/graph.hpp"

namespace gaplab {

// Dense symmetric matrix, lower triangle stored row-major.
class SymmetricMatrix {
public:
    explicit SymmetricMatrix(int dim);
    int dim() const { return dim_; }
    double operator()(int i, int j) const { return tri_[index(i, j)]; }
    void set(int i, int j, double value) { tri_[index(i, j)] = value; }

private:
    size_t index(int i, int j) const {
        if (i < j) std::swap(i, j);
        return static_cast<size_t>(i) * (static_cast<size_t>(i) + 1) / 2 + static_cast<size_t>(j);
    }
    int dim_;
    std::vector<double> tri_;
};

// The first-level pairwise-value matrix of the explicit solution:
// diagonal n^{-1/2}/L, edges n^{-3/4}/L^2, non-edges n^{-1}/L^2, i.e.
// (1/L) [ J/(nL) + I/sqrt(n) + A/(n^{3/4} L) ].
SymmetricMatrix build_Z(const Graph& g, int level);

SymmetricMatrix adjacency_matrix(const Graph& g);

// Smallest eigenvalue via a dense self-adjoint eigendecomposition.
// Rejects non-finite entries.
double min_eigenvalue(const SymmetricMatrix& m);

struct PsdVerdict {
    double lambda_min_Z = 0;
    double lambda_min_A = 0;
    double bound_A = 0;  // -4 n^{1/4} sqrt(ln n)
    bool pass_Z = false;  // lambda_min_Z >= -tol
    bool pass_A = false;  // lambda_min_A >= bound_A
    std::string to_json() const;
};

PsdVerdict check_mixed_psd(const Graph& g, int level, double tol);

}  // namespace gaplab
