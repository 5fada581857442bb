#include "gaplab/quartic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gaplab {

namespace {

// Integer floor square root (values here are small, but stay exact anyway).
int64_t isqrt64(int64_t v) {
    if (v < 0) return -1;
    auto r = static_cast<int64_t>(std::sqrt(static_cast<double>(v)));
    while (r > 0 && r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

int64_t fourth_root_or_zero(int64_t v) {
    int64_t s = isqrt64(v);
    if (s * s != v) return 0;
    int64_t r = isqrt64(s);
    return (r * r == s) ? r : 0;
}

int64_t sqrt_or_zero(int64_t v) {
    int64_t s = isqrt64(v);
    return (s * s == v) ? s : 0;
}

}  // namespace

int surd_sign(const Rational& a, const Rational& b, int64_t R) {
    if (b == 0) return a.sign();
    if (a == 0) return b.sign();
    int sa = a.sign(), sb = b.sign();
    if (sa == sb) return sa;
    // Mixed signs: compare a^2 against b^2 * R.
    Rational t = a * a - b * b * R;
    int st = t.sign();
    return sa > 0 ? st : -st;
}

void Quartic::normalize() {
    if (rad_ <= 0) throw std::invalid_argument("Quartic radicand must be positive");
    if (int64_t r = fourth_root_or_zero(rad_); r != 0) {
        // theta is rational; fold everything into c0.
        Rational t(r);
        c_[0] += c_[1] * t + c_[2] * t * t + c_[3] * t * t * t;
        c_[1] = c_[2] = c_[3] = 0;
        return;
    }
    if (int64_t m = sqrt_or_zero(rad_); m != 0) {
        // theta^2 = m is rational; value lives in Q(sqrt(m)).
        c_[0] += c_[2] * m;
        c_[1] += c_[3] * m;
        c_[2] = c_[3] = 0;
    }
}

void Quartic::check_compatible(const Quartic& o) const {
    if (rad_ != o.rad_ && !is_rational() && !o.is_rational())
        throw std::invalid_argument("Quartic radicand mismatch");
}

// Rational values are radicand-agnostic; adopt the non-trivial radicand.
static int64_t merge_radicand(const Quartic& a, const Quartic& b) {
    if (a.radicand() == b.radicand()) return a.radicand();
    return a.is_rational() ? b.radicand() : a.radicand();
}

Quartic Quartic::theta_pow(int64_t e, int64_t radicand) {
    int64_t div = e >= 0 ? e / 4 : -((-e + 3) / 4);
    int64_t rem = e - 4 * div;  // in [0, 3]
    std::array<Rational, 4> c{};
    Rational scale = div >= 0 ? Rational(int_pow(BigInt(radicand), static_cast<unsigned>(div)))
                              : Rational(1, int_pow(BigInt(radicand), static_cast<unsigned>(-div)));
    c[static_cast<size_t>(rem)] = scale;
    return Quartic(std::move(c), radicand);
}

const Rational& Quartic::as_rational() const {
    if (!is_rational()) throw std::logic_error("Quartic value is irrational: " + str());
    return c_[0];
}

Quartic& Quartic::operator+=(const Quartic& o) {
    check_compatible(o);
    rad_ = merge_radicand(*this, o);
    for (int i = 0; i < 4; ++i) c_[i] += o.c_[i];
    return *this;
}

Quartic& Quartic::operator-=(const Quartic& o) {
    check_compatible(o);
    rad_ = merge_radicand(*this, o);
    for (int i = 0; i < 4; ++i) c_[i] -= o.c_[i];
    return *this;
}

Quartic& Quartic::operator*=(const Quartic& o) {
    check_compatible(o);
    int64_t rad = merge_radicand(*this, o);
    std::array<Rational, 7> conv{};
    for (int i = 0; i < 4; ++i) {
        if (c_[i] == 0) continue;
        for (int j = 0; j < 4; ++j) {
            if (o.c_[j] == 0) continue;
            conv[static_cast<size_t>(i + j)] += c_[i] * o.c_[j];
        }
    }
    for (int i = 6; i >= 4; --i) conv[static_cast<size_t>(i - 4)] += conv[static_cast<size_t>(i)] * rad;
    for (int i = 0; i < 4; ++i) c_[i] = conv[static_cast<size_t>(i)];
    rad_ = rad;
    normalize();
    return *this;
}

Quartic& Quartic::operator*=(const Rational& r) {
    for (auto& ci : c_) ci *= r;
    return *this;
}

Quartic& Quartic::operator/=(const Rational& r) {
    if (r == 0) throw std::invalid_argument("Quartic division by zero");
    for (auto& ci : c_) ci /= r;
    return *this;
}

Quartic Quartic::operator-() const {
    Quartic r = *this;
    for (auto& ci : r.c_) ci = -ci;
    return r;
}

int Quartic::sign() const {
    if (is_rational()) return c_[0].sign();
    if (sqrt_or_zero(rad_) != 0) {
        // normalized to c0 + c1 * sqrt(m), m = sqrt(rad) non-square
        return surd_sign(c_[0], c_[1], sqrt_or_zero(rad_));
    }
    // value = P + theta * Q with P = c0 + c2 s, Q = c1 + c3 s, s = sqrt(rad)
    // irrational, theta = sqrt(s) > 0.
    int sP = surd_sign(c_[0], c_[2], rad_);
    int sQ = surd_sign(c_[1], c_[3], rad_);
    if (sQ == 0) return sP;
    if (sP == 0) return sQ;
    if (sP == sQ) return sP;
    // Opposite signs: compare P^2 against Q^2 * s, both in Q(s).
    // P^2       = (c0^2 + c2^2 n) + (2 c0 c2) s
    // Q^2 * s   = (2 c1 c3 n)     + (c1^2 + c3^2 n) s
    Rational du = c_[0] * c_[0] + c_[2] * c_[2] * rad_ - 2 * c_[1] * c_[3] * rad_;
    Rational dv = 2 * c_[0] * c_[2] - c_[1] * c_[1] - c_[3] * c_[3] * rad_;
    int sD = surd_sign(du, dv, rad_);
    return sP > 0 ? sD : -sD;
}

double Quartic::approx() const {
    double t = std::pow(static_cast<double>(rad_), 0.25);
    return to_double(c_[0]) + to_double(c_[1]) * t + to_double(c_[2]) * t * t +
           to_double(c_[3]) * t * t * t;
}

std::string Quartic::str() const {
    if (is_rational()) return rational_str(c_[0]);
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < 4; ++i) {
        if (c_[i] == 0) continue;
        if (!first) os << " + ";
        os << "(" << rational_str(c_[i]) << ")";
        if (i > 0) os << "*t^" << i;
        first = false;
    }
    os << " [t^4=" << rad_ << "]";
    return os.str();
}

}  // namespace gaplab
