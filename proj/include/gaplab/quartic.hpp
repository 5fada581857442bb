#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "gaplab/rational.hpp"

namespace gaplab {

// Exact element of Q(theta) where theta = n^{1/4} for a fixed positive
// integer n (the "radicand"). Values are stored as polynomials
// c0 + c1*theta + c2*theta^2 + c3*theta^3 with rational coefficients,
// reduced by theta^4 = n and normalized so that representations are unique:
//  - if n = r^4 the whole value folds to a rational (c1 = c2 = c3 = 0),
//  - if n = m^2 (m not a square) then theta^2 = m folds into c0, c1.
// Comparisons are exact, via nested quadratic-surd sign computation; no
// floating point is involved.
class Quartic {
public:
    Quartic() : rad_(1) {}  // zero over the trivial radicand

    explicit Quartic(Rational r, int64_t radicand = 1) : rad_(radicand) {
        c_[0] = std::move(r);
        normalize();
    }

    Quartic(std::array<Rational, 4> coeffs, int64_t radicand)
        : c_(std::move(coeffs)), rad_(radicand) {
        normalize();
    }

    static Quartic zero(int64_t radicand) { return Quartic(Rational(0), radicand); }
    static Quartic one(int64_t radicand) { return Quartic(Rational(1), radicand); }

    // theta^e for any integer e (negative exponents use theta^-1 = theta^3/n).
    static Quartic theta_pow(int64_t e, int64_t radicand);

    int64_t radicand() const { return rad_; }
    const std::array<Rational, 4>& coeffs() const { return c_; }

    bool is_zero() const {
        return c_[0] == 0 && c_[1] == 0 && c_[2] == 0 && c_[3] == 0;
    }
    bool is_rational() const { return c_[1] == 0 && c_[2] == 0 && c_[3] == 0; }
    const Rational& as_rational() const;

    Quartic& operator+=(const Quartic& o);
    Quartic& operator-=(const Quartic& o);
    Quartic& operator*=(const Quartic& o);
    Quartic& operator*=(const Rational& r);
    Quartic& operator/=(const Rational& r);

    friend Quartic operator+(Quartic a, const Quartic& b) { return a += b; }
    friend Quartic operator-(Quartic a, const Quartic& b) { return a -= b; }
    friend Quartic operator*(Quartic a, const Quartic& b) { return a *= b; }
    friend Quartic operator*(Quartic a, const Rational& r) { return a *= r; }
    friend Quartic operator/(Quartic a, const Rational& r) { return a /= r; }
    Quartic operator-() const;

    // Exact sign: -1, 0, +1.
    int sign() const;

    friend bool operator==(const Quartic& a, const Quartic& b) { return (a - b).is_zero(); }
    friend bool operator!=(const Quartic& a, const Quartic& b) { return !(a == b); }
    friend bool operator<(const Quartic& a, const Quartic& b) { return (a - b).sign() < 0; }
    friend bool operator<=(const Quartic& a, const Quartic& b) { return (a - b).sign() <= 0; }
    friend bool operator>(const Quartic& a, const Quartic& b) { return (a - b).sign() > 0; }
    friend bool operator>=(const Quartic& a, const Quartic& b) { return (a - b).sign() >= 0; }

    double approx() const;

    // "num/den" when rational, otherwise "c0 + c1 t + c2 t^2 + c3 t^3 [t^4=n]".
    std::string str() const;

private:
    void normalize();
    void check_compatible(const Quartic& o) const;

    std::array<Rational, 4> c_{};
    int64_t rad_;
};

// Exact sign of a + b*sqrt(R) for rational a, b and a positive non-square
// integer R. Exposed for testing.
int surd_sign(const Rational& a, const Rational& b, int64_t R);

}  // namespace gaplab
