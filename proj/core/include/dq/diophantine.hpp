#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dq/common.hpp"

namespace dq {

struct Convergent {
    long long p = 0, q = 1;
};

// Euclidean expansion of x in (0,1): x ~ [0; a_1, a_2, ...] with convergents
// p_k/q_k. The input double is the only inexact quantity; the recurrence is
// integer-exact. Expansion stops at `depth`, at a terminating remainder
// (< 1e-12: the double is rational at working precision), or at the
// double-precision horizon q > 9e15, whichever first.
struct ContinuedFractionExpansion {
    double value = 0;
    std::vector<long long> quotients;
    std::vector<Convergent> convergents;
    bool terminated = false;   // remainder vanished: value is rational at this precision
    bool exhausted = false;    // stopped by depth/precision with remainder left
};

ContinuedFractionExpansion continued_fraction(double x, int depth = 40);

// Smallest convergent denominator q >= N plus whether q <= N^{1+eps}.
// Throws SpecError when the expansion ends before reaching N (rational input
// or precision exhausted).
struct DirichletResult {
    long long q = 1;
    bool within_window = false;
};
DirichletResult dirichlet_q(double x, long long N, double eps);

// N/sqrt(q) + sqrt(N log q) + sqrt(q log q)
double weyl_bound(double N, double q);

// q_k^{1/k}, k = 1..; stabilizes near Levy's constant for typical x
std::vector<double> khinchin_levy_diagnostic(double x, int depth = 30);

// exact check |x - p/q| <= 1/q^2 via the binary representation of x;
// requires x >= 2^-70 or so (all sampled times are), else falls back to
// long-double arithmetic
bool convergent_inequality_holds(double x, long long p, long long q);

// --- seeded sampling + the irrational-type screen -------------------------

// mt19937 with a 53-bit uniform assembled explicitly from two draws, so the
// stream is reproducible from the documented algorithm alone.
class UniformSource {
  public:
    explicit UniformSource(std::uint32_t seed) : gen_(seed) {}
    double unit() {
        const std::uint64_t hi = gen_();
        const std::uint64_t lo = gen_();
        return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1p-53;
    }
    std::uint32_t u32() { return static_cast<std::uint32_t>(gen_()); }

  private:
    std::mt19937 gen_;
};

// Screen for "irrational-type" v in (0,1): the continued fraction must leave
// every denominator <= q_max behind (not effectively rational), and while the
// denominators are still <= q_max no partial quotient may exceed a_max, i.e.
// no convergent with small q approximates v abnormally well over the depth
// the experiments can resolve.
struct ScreenPolicy {
    long long q_max = 1LL << 17;
    long long a_max = 16;
    double lo = 1e-3;
    double hi = 1.0 - 1e-3;
};

bool is_screened_unit(double v, const ScreenPolicy& policy);
std::vector<double> screened_units(int count, UniformSource& src, const ScreenPolicy& policy);

}  // namespace dq
