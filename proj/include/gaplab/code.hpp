#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gaplab/gf.hpp"

namespace gaplab {

// Row-major matrix over F_q with one byte per entry.
struct FqMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<uint8_t> data;

    FqMatrix() = default;
    FqMatrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * static_cast<size_t>(c), 0) {}
    uint8_t& at(int r, int c) { return data[static_cast<size_t>(r) * static_cast<size_t>(cols) + static_cast<size_t>(c)]; }
    uint8_t at(int r, int c) const { return data[static_cast<size_t>(r) * static_cast<size_t>(cols) + static_cast<size_t>(c)]; }
    friend bool operator==(const FqMatrix&, const FqMatrix&) = default;
};

// In-place reduced row echelon form; returns the rank.
int rref(FqMatrix& m, const FieldSpec& field);
// Canonical basis of {x : m x^T = 0}, one row per basis vector.
FqMatrix nullspace_basis(const FqMatrix& m, const FieldSpec& field);
// Row space equality (via RREF comparison).
bool same_row_space(const FqMatrix& a, const FqMatrix& b, const FieldSpec& field);

// q-ary linear code as generator + parity-check pair with the invariants
// G H^T = 0, rank(G) = dim, rank(H) = K - dim enforced at construction.
class LinearCode {
public:
    LinearCode() = default;  // empty placeholder; build via the factories
    static LinearCode from_generator(int q, const FqMatrix& gen);
    static LinearCode from_parity(int q, const FqMatrix& parity);

    int q() const { return q_; }
    const FieldSpec& field() const { return FieldSpec::get(q_); }
    int length() const { return length_; }
    int dim() const { return dim_; }
    const FqMatrix& generator() const { return gen_; }
    const FqMatrix& parity() const { return parity_; }
    // number of codewords as a double (exact below 2^53)
    double size() const;

    bool contains(std::span<const uint8_t> word) const;  // parity-check test
    // Visit every codeword (budget-guarded); deterministic message order.
    void for_each_codeword(const std::function<void(std::span<const uint8_t>)>& fn,
                           uint64_t budget = 10'000'000) const;
    std::vector<std::vector<uint8_t>> all_codewords(uint64_t budget = 10'000'000) const;

private:
    int q_ = 2;
    int length_ = 0;
    int dim_ = 0;
    FqMatrix gen_, parity_;
};

// The length q^2-1 code cut out by c(1) = c(gamma) = ... = c(gamma^{D-2}) = 0
// with c(X) = c_1 X + ... + c_K X^K over F_{q^2}, each extension-field
// constraint realized as two F_q rows; if the raw dimension exceeds
// K - 2D + 3 the generator is cut to exactly that dimension (trailing rows
// of the reduced generator dropped).
LinearCode build_generalized_bch(int q, int distance);

LinearCode dual_code(const LinearCode& code);

struct MinDistanceResult {
    int distance = 0;
    bool degenerate = false;  // zero code: no nonzero codeword, distance = length + 1
};

// Exact minimum Hamming weight over nonzero codewords, by exhaustive
// codeword enumeration when q^dim fits the budget, else by exhaustive
// enumeration of candidate words in increasing weight (parity-check
// membership). Throws BudgetExceeded when neither route fits.
MinDistanceResult min_distance_bruteforce(const LinearCode& code, uint64_t budget = 10'000'000);

// JSON IO: {"q", "p", "e", "modulus", "K", "dim", "generator", "parity"}
// with matrices as row-major digit arrays.
std::string code_to_json(const LinearCode& code);
LinearCode code_from_json(const std::string& text);
void save_code(const LinearCode& code, const std::string& path);
LinearCode load_code(const std::string& path);

}  // namespace gaplab
