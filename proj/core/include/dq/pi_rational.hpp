#pragma once

#include <numeric>

#include "dq/common.hpp"

namespace dq {

// Angle num/den * pi, reduced, normalized into [0, 2pi) unless marked as the
// right endpoint 2pi. Jump locations of step functions are these, so "rational
// multiple of pi" is decidable and evaluation goes to floating point last.
struct PiRational {
    long long num = 0;  // angle = num*pi/den
    long long den = 1;

    PiRational() = default;
    PiRational(long long n, long long d) : num(n), den(d) {
        if (den == 0) throw SpecError("PiRational: zero denominator");
        if (den < 0) { den = -den; num = -num; }
        reduce();
    }

    void reduce() {
        const long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    // value mod 2pi, kept exact: num/den mod 2
    PiRational normalized() const {
        long long r = num % (2 * den);
        if (r < 0) r += 2 * den;
        return PiRational(r, den);
    }

    double radians() const { return pi * static_cast<double>(num) / static_cast<double>(den); }
    bool is_zero() const { return num == 0; }

    friend PiRational operator+(const PiRational& a, const PiRational& b) {
        const long long l = std::lcm(a.den, b.den);
        return PiRational(a.num * (l / a.den) + b.num * (l / b.den), l);
    }
    friend PiRational operator-(const PiRational& a, const PiRational& b) {
        const long long l = std::lcm(a.den, b.den);
        return PiRational(a.num * (l / a.den) - b.num * (l / b.den), l);
    }
    friend bool operator==(const PiRational& a, const PiRational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator<(const PiRational& a, const PiRational& b) {
        // cross-multiplication; denominators stay modest (lcm of data and shift)
        return a.num * b.den < b.num * a.den;
    }
    friend bool operator<=(const PiRational& a, const PiRational& b) { return !(b < a); }
    friend bool operator>(const PiRational& a, const PiRational& b) { return b < a; }
    friend bool operator>=(const PiRational& a, const PiRational& b) { return !(a < b); }
};

inline PiRational pr_two_pi() { return PiRational(2, 1); }

// midpoint of [a,b], exact
inline PiRational pr_midpoint(const PiRational& a, const PiRational& b) {
    const long long l = std::lcm(a.den, b.den);
    return PiRational(a.num * (l / a.den) + b.num * (l / b.den), 2 * l);
}

}  // namespace dq
