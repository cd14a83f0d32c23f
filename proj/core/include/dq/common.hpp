#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dq {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Malformed input, bad parameters, violated preconditions. CLI exit code 1.
struct SpecError : std::runtime_error {
    explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

// A runtime conservation law or structural invariant broke. CLI exit code 2.
struct InvariantViolation : std::runtime_error {
    explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_pow2(long long m) { return m > 0 && (m & (m - 1)) == 0; }

inline int log2_exact(long long m) {
    if (!is_pow2(m)) throw SpecError("size must be a power of two, got " + std::to_string(m));
    int j = 0;
    while ((1LL << j) < m) ++j;
    return j;
}

inline size_t next_pow2(size_t m) {
    size_t p = 1;
    while (p < m) p <<= 1;
    return p;
}

// wrap into [0, 2pi)
inline double wrap_2pi(double x) {
    double y = x - two_pi * std::floor(x / two_pi);
    if (y >= two_pi) y -= two_pi;
    if (y < 0) y = 0;
    return y;
}

// wrap into (-pi, pi]
inline double wrap_pm_pi(double x) {
    double y = wrap_2pi(x);
    return y > pi ? y - two_pi : y;
}

}  // namespace dq
