#include "dq/diophantine.hpp"

#include <cmath>
#include <cstdlib>

namespace dq {

namespace {
using i128 = __int128;

constexpr long long kHorizon = 9'000'000'000'000'000LL;  // ~2^53, double resolution limit
}  // namespace

ContinuedFractionExpansion continued_fraction(double x, int depth) {
    if (!(x > 0.0 && x < 1.0)) throw SpecError("continued_fraction: x must lie in (0,1)");
    if (depth < 1 || depth > 64) throw SpecError("continued_fraction: depth must be in [1,64]");
    ContinuedFractionExpansion out;
    out.value = x;
    double y = x;
    i128 h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    for (int i = 0; i < depth; ++i) {
        if (y <= 0.0) {
            out.terminated = true;
            return out;
        }
        const double inv = 1.0 / y;
        const long long a = static_cast<long long>(std::floor(inv));
        if (a < 1) {
            out.terminated = true;
            return out;
        }
        const i128 h = static_cast<i128>(a) * h0 + h1;
        const i128 k = static_cast<i128>(a) * k0 + k1;
        if (k > static_cast<i128>(kHorizon)) {
            out.exhausted = true;
            return out;
        }
        h1 = h0; h0 = h;
        k1 = k0; k0 = k;
        out.quotients.push_back(a);
        out.convergents.push_back({static_cast<long long>(h0), static_cast<long long>(k0)});
        y = inv - static_cast<double>(a);
        if (y < 1e-12) {
            out.terminated = true;
            return out;
        }
    }
    out.exhausted = true;
    return out;
}

DirichletResult dirichlet_q(double x, long long N, double eps) {
    if (N < 1) throw SpecError("dirichlet_q: N must be >= 1");
    if (eps < 0) throw SpecError("dirichlet_q: eps must be >= 0");
    const auto cf = continued_fraction(x, 40);
    for (const auto& c : cf.convergents) {
        if (c.q >= N) {
            DirichletResult r;
            r.q = c.q;
            r.within_window =
                static_cast<double>(c.q) <= std::pow(static_cast<double>(N), 1.0 + eps);
            return r;
        }
    }
    throw SpecError("dirichlet_q: expansion ends before reaching N (rational input or precision exhausted)");
}

double weyl_bound(double N, double q) {
    if (!(N >= 1.0) || !(q >= 1.0)) throw SpecError("weyl_bound: N and q must be >= 1");
    const double lq = std::log(q);
    return N / std::sqrt(q) + std::sqrt(N * lq) + std::sqrt(q * lq);
}

std::vector<double> khinchin_levy_diagnostic(double x, int depth) {
    const auto cf = continued_fraction(x, depth);
    std::vector<double> out;
    out.reserve(cf.convergents.size());
    for (size_t k = 0; k < cf.convergents.size(); ++k) {
        out.push_back(std::pow(static_cast<double>(cf.convergents[k].q),
                               1.0 / static_cast<double>(k + 1)));
    }
    return out;
}

bool convergent_inequality_holds(double x, long long p, long long q) {
    if (q < 1) throw SpecError("convergent_inequality_holds: q must be >= 1");
    if (!(x > 0.0 && x < 1.0)) throw SpecError("convergent_inequality_holds: x must lie in (0,1)");
    int e = 0;
    const double f = std::frexp(x, &e);  // x = f * 2^e, f in [0.5, 1)
    const int s = 53 - e;                // x = m * 2^-s with integer m
    if (s <= 73 && q <= kHorizon) {
        const auto m = static_cast<i128>(std::ldexp(f, 53));
        const i128 lhs_a = m * q;
        const i128 lhs_b = static_cast<i128>(p) << s;
        i128 d = lhs_a - lhs_b;
        if (d < 0) d = -d;
        const i128 pow_s = static_cast<i128>(1) << s;
        if (d > pow_s) return false;  // already exceeds 2^s >= 2^s/q
        return d * q <= pow_s;        // |x - p/q| <= 1/q^2 scaled by q*2^s
    }
    const long double lv = std::fabs(static_cast<long double>(x) -
                                     static_cast<long double>(p) / static_cast<long double>(q));
    return lv <= 1.0L / (static_cast<long double>(q) * static_cast<long double>(q));
}

bool is_screened_unit(double v, const ScreenPolicy& policy) {
    if (!(v > policy.lo && v < policy.hi)) return false;
    // int64 expansion; a <= 1/y <= 1e12 and q <= q_max at loop entry keep all
    // products well inside the signed-64 range for q_max <= 2^20.
    if (policy.q_max > (1LL << 20)) throw SpecError("is_screened_unit: q_max too large");
    double y = v;
    std::vector<long long> quots;
    std::vector<long long> qs;
    long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    for (int i = 0; i < 48; ++i) {
        if (y <= 0.0) break;
        const double inv = 1.0 / y;
        const long long a = static_cast<long long>(std::floor(inv));
        if (a < 1) break;
        const long long h = a * h0 + h1;
        const long long k = a * k0 + k1;
        h1 = h0; h0 = h;
        k1 = k0; k0 = k;
        quots.push_back(a);
        qs.push_back(k0);
        y = inv - static_cast<double>(a);
        if (y < 1e-12) break;
        if (k0 > policy.q_max) break;
    }
    // must blast past q_max (not resolvable as a small rational) ...
    if (qs.empty() || qs.back() <= policy.q_max) return false;
    // ... without any huge quotient while the previous denominator was small
    for (size_t i = 0; i < quots.size(); ++i) {
        const long long q_prev = (i > 0) ? qs[i - 1] : 1;
        if (q_prev <= policy.q_max && quots[i] > policy.a_max) return false;
    }
    return true;
}

std::vector<double> screened_units(int count, UniformSource& src, const ScreenPolicy& policy) {
    if (count < 0) throw SpecError("screened_units: count must be >= 0");
    std::vector<double> out;
    out.reserve(static_cast<size_t>(count));
    long long attempts = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++attempts > 1'000'000LL + 10'000LL * static_cast<long long>(count))
            throw InvariantViolation("screened_units: acceptance rate collapsed");
        const double v = src.unit();
        if (is_screened_unit(v, policy)) out.push_back(v);
    }
    return out;
}

}  // namespace dq
