#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace gaplab {

// Element of F_{q^2} represented over F_q as lo + hi * y.
struct Ext2 {
    int lo = 0;
    int hi = 0;
    friend bool operator==(const Ext2&, const Ext2&) = default;
};

// Arithmetic for F_q (q = p^e) and its quadratic extension F_{q^2}.
//
// Elements of F_{p^e} are encoded as integers in [0, q): the digits of the
// integer in base p are the coefficients of the residue polynomial. Prime
// fields use residue arithmetic; extension fields reduce by a fixed modulus
// from a table of Conway polynomials (verified irreducible at load), so the
// encoding is reproducible across runs and platforms. The F_{q^2} modulus
// y^2 + a y + b is the lexicographically first irreducible monic quadratic
// over F_q, and gamma is the first primitive element in index order.
class FieldSpec {
public:
    // Cached registry; q must be a prime power.
    static const FieldSpec& get(int q);

    int q() const { return q_; }
    int characteristic() const { return p_; }
    int degree() const { return e_; }
    const std::vector<int>& modulus() const { return modulus_; }
    std::pair<int, int> ext_modulus() const { return {ext_a_, ext_b_}; }  // y^2 + a y + b
    Ext2 gamma() const { return gamma_; }

    int add(int a, int b) const { return add_[static_cast<size_t>(a) * static_cast<size_t>(q_) + static_cast<size_t>(b)]; }
    int sub(int a, int b) const { return add(a, neg(b)); }
    int mul(int a, int b) const { return mul_[static_cast<size_t>(a) * static_cast<size_t>(q_) + static_cast<size_t>(b)]; }
    int neg(int a) const { return neg_[static_cast<size_t>(a)]; }
    int inv(int a) const;  // throws on zero
    int pow(int a, long e) const;

    Ext2 eadd(Ext2 a, Ext2 b) const { return {add(a.lo, b.lo), add(a.hi, b.hi)}; }
    Ext2 emul(Ext2 a, Ext2 b) const;
    Ext2 eneg(Ext2 a) const { return {neg(a.lo), neg(a.hi)}; }
    Ext2 epow(Ext2 a, long e) const;
    bool is_ext_zero(Ext2 a) const { return a.lo == 0 && a.hi == 0; }
    Ext2 einv(Ext2 a) const;

    // index encoding of F_{q^2} elements: hi*q + lo
    int ext_index(Ext2 a) const { return a.hi * q_ + a.lo; }
    Ext2 ext_from_index(int idx) const { return {idx % q_, idx / q_}; }

private:
    explicit FieldSpec(int q);
    void build_tables();
    void pick_ext_modulus();
    void pick_gamma();

    int q_, p_, e_;
    std::vector<int> modulus_;  // ascending coeffs, length e+1, monic (empty for e == 1)
    std::vector<uint8_t> add_, mul_, neg_;
    std::vector<int> inv_;
    int ext_a_ = 0, ext_b_ = 0;
    Ext2 gamma_;
};

bool is_prime_power(int q, int* p_out = nullptr, int* e_out = nullptr);

}  // namespace gaplab
