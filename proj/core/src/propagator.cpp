#include "dq/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dq/fft.hpp"

namespace dq {

namespace {
using u128 = unsigned __int128;

cplx unit_phase(double frac) { return std::polar(1.0, two_pi * frac); }

long long mulmod_ll(long long a, long long b, long long q) {
    return static_cast<long long>((static_cast<u128>(a) * static_cast<u128>(b)) %
                                  static_cast<u128>(q));
}

long long powmod_ll(long long base, int k, long long q) {
    long long r = 1 % q;
    long long b = ((base % q) + q) % q;
    for (int i = 0; i < k; ++i) r = mulmod_ll(r, b, q);
    return r;
}
}  // namespace

RationalTime::RationalTime(long long a_, long long q_) : a(a_), q(q_) {
    if (q < 1) throw SpecError("RationalTime: q must be >= 1");
    const long long g = std::gcd(a < 0 ? -a : a, q);
    if ((a == 0 && q != 1) || (a != 0 && g != 1))
        throw SpecError("RationalTime: fraction must be reduced");
}

ExactPhase::ExactPhase(double v) {
    if (!std::isfinite(v)) throw SpecError("ExactPhase: time must be finite");
    double vf = v - std::floor(v);
    if (vf >= 1.0) vf = 0.0;  // floor rounding at the wrap seam
    vfrac_ = vf;
    if (vf == 0.0) {
        mant_ = 0;
        return;
    }
    int e = 0;
    const double f = std::frexp(vf, &e);  // vf = f*2^e, f in [0.5,1), e <= 0
    const int s = 53 - e;
    if (s > 127) {
        tiny_ = true;
        return;
    }
    mant_ = static_cast<u128>(static_cast<unsigned long long>(std::ldexp(f, 53)));
    s_ = s;
}

double ExactPhase::frac_times(u128 m) const {
    if (tiny_) {
        const double p = vfrac_ * static_cast<double>(m);
        return p - std::floor(p);
    }
    if (mant_ == 0) return 0.0;
    u128 p = mant_ * m;  // wraps mod 2^128; low s_ bits are exact
    p &= (static_cast<u128>(1) << s_) - 1;
    double r = std::ldexp(static_cast<double>(p), -s_);
    if (r >= 1.0) r = 0.0;  // conversion rounded up to 2^s_: phase wraps
    return r;
}

u128 pow_wrap_u128(u128 base, int k) {
    u128 r = 1;
    for (int i = 0; i < k; ++i) r *= base;
    return r;
}

SpectralField evolve_linear(const SpectralField& f, DispersionLaw law, double t) {
    const int N = f.N();
    SpectralField out = f;
    const ExactPhase ph(t / two_pi);
    for (int n = 1; n <= N; ++n) {
        const double fr = ph.frac_times(pow_wrap_u128(static_cast<u128>(n), law.k));
        if (law.k == 2) {
            const cplx w = std::conj(unit_phase(fr));  // e^{-itn^2}
            out.at(n) *= w;
            out.at(-n) *= w;
        } else if (law.k % 2 == 0) {
            const cplx w = unit_phase(fr);  // e^{+itn^k}, even in n
            out.at(n) *= w;
            out.at(-n) *= w;
        } else {
            const cplx w = unit_phase(fr);  // e^{+itn^k}; odd power flips sign at -n
            out.at(n) *= w;
            out.at(-n) *= std::conj(w);
        }
    }
    return out;
}

SpectralField evolve_linear(const SpectralField& f, DispersionLaw law, RationalTime rt) {
    const int N = f.N();
    SpectralField out = f;
    const long long q = rt.q;
    const long long am = ((rt.a % q) + q) % q;
    for (int n = 1; n <= N; ++n) {
        const long long res = mulmod_ll(am, powmod_ll(n, law.k, q), q);
        const double fr = static_cast<double>(res) / static_cast<double>(q);
        if (law.k == 2) {
            const cplx w = std::conj(unit_phase(fr));
            out.at(n) *= w;
            out.at(-n) *= w;
        } else if (law.k % 2 == 0) {
            const cplx w = unit_phase(fr);
            out.at(n) *= w;
            out.at(-n) *= w;
        } else {
            const cplx w = unit_phase(fr);
            out.at(n) *= w;
            out.at(-n) *= std::conj(w);
        }
    }
    return out;
}

std::pair<TalbotDecomposition, StepFunction> talbot_rational(const StepFunction& g,
                                                             RationalTime rt) {
    const long long q = rt.q;
    if (q > 1'000'000) throw SpecError("talbot_rational: q too large for dense weights");
    const long long am = ((rt.a % q) + q) % q;
    TalbotDecomposition dec;
    dec.a = rt.a;
    dec.q = q;
    dec.shift_step = two_pi / static_cast<double>(q);
    dec.w.resize(static_cast<size_t>(q));
    for (long long r = 0; r < q; ++r) {
        cplx acc = 0;
        for (long long m = 0; m < q; ++m) {
            long long e = ((q - am) % q) * ((m * m) % q) % q;  // -a m^2 mod q
            e = (e + m * r % q) % q;
            acc += unit_phase(static_cast<double>(e) / static_cast<double>(q));
        }
        dec.w[static_cast<size_t>(r)] = acc / static_cast<double>(q);
    }
    std::vector<PiRational> shifts;
    shifts.reserve(static_cast<size_t>(q));
    for (long long r = 0; r < q; ++r) shifts.emplace_back(2 * r, q);
    StepFunction out = combine_translates(g, dec.w, shifts, 1e-13);
    return {dec, out};
}

cplx kernel_H_at(double t, double x, int N) {
    if (N < 1) throw SpecError("kernel_H_at: N must be >= 1");
    const ExactPhase ph(t / two_pi);
    cplx acc = 0;
    for (int n = 1; n <= N; ++n) {
        const cplx en = std::conj(unit_phase(ph.frac_times(static_cast<u128>(n) * n)));
        acc += en * cplx(0.0, 2.0 * std::sin(n * x) / n);
    }
    return acc;
}

cplx kernel_partial_T_at(double t, double x, int n) {
    if (n < 1) throw SpecError("kernel_partial_T_at: n must be >= 1");
    const ExactPhase ph(t / two_pi);
    cplx acc = 0;
    for (int m = 1; m <= n; ++m) {
        const cplx em = std::conj(unit_phase(ph.frac_times(static_cast<u128>(m) * m)));
        acc += em * cplx(0.0, 2.0 * std::sin(m * x));
    }
    return acc / static_cast<double>(n);
}

cplx kernel_H_sbp_at(double t, double x, int N) {
    if (N < 1) throw SpecError("kernel_H_sbp_at: N must be >= 1");
    const ExactPhase ph(t / two_pi);
    cplx S = 0;    // S_n = n*T_n
    cplx acc = 0;  // sum_{n<N} T_n/(n+1), then + T_N
    for (int n = 1; n <= N; ++n) {
        const cplx en = std::conj(unit_phase(ph.frac_times(static_cast<u128>(n) * n)));
        S += en * cplx(0.0, 2.0 * std::sin(n * x));
        if (n < N)
            acc += S / static_cast<double>(n) / static_cast<double>(n + 1);
        else
            acc += S / static_cast<double>(N);
    }
    return acc;
}

GridField kernel_H(double t, size_t M, int N) {
    if (N < 1) throw SpecError("kernel_H: N must be >= 1");
    if (!is_pow2(static_cast<long long>(M)) || M < 2 * static_cast<size_t>(N) + 2)
        throw SpecError("kernel_H: M must be a power of two >= 2N+2");
    const ExactPhase ph(t / two_pi);
    SpectralField h(N);
    for (int n = 1; n <= N; ++n) {
        const cplx en = std::conj(unit_phase(ph.frac_times(static_cast<u128>(n) * n)));
        h.at(n) = en / static_cast<double>(n);
        h.at(-n) = -en / static_cast<double>(n);
    }
    return from_spectral(h, M);
}

GridField kernel_superposition(const std::vector<JumpDatum>& jumps, cplx mean, double t,
                               int N, size_t M) {
    if (N < 1) throw SpecError("kernel_superposition: N must be >= 1");
    if (!is_pow2(static_cast<long long>(M)) || M < 2 * static_cast<size_t>(N) + 2)
        throw SpecError("kernel_superposition: M must be a power of two >= 2N+2");
    const ExactPhase ph(t / two_pi);
    SpectralField f(N);
    f.at(0) = mean;
    for (int n = 1; n <= N; ++n) {
        // sum_j delta_j e^{-i n y_j} with exact rational phases
        cplx sp = 0, sm = 0;
        for (const auto& j : jumps) {
            sp += j.delta * unit_phase_neg(n, j.y);
            sm += j.delta * unit_phase_neg(-n, j.y);
        }
        const cplx en = std::conj(unit_phase(ph.frac_times(static_cast<u128>(n) * n)));
        const cplx inv2pii = cplx(0.0, -1.0 / two_pi);  // 1/(2 pi i)
        f.at(n) = inv2pii * en * sp / static_cast<double>(n);
        f.at(-n) = inv2pii * en * sm / static_cast<double>(-n);
    }
    return from_spectral(f, M);
}

GridField evolve_via_kernel(const StepFunction& g, double t, int N, size_t M) {
    const auto js = g.jumps();
    std::vector<JumpDatum> jumps;
    jumps.reserve(js.size());
    for (const auto& j : js) jumps.push_back({j.y, j.delta});
    return kernel_superposition(jumps, g.mean(), t, N, M);
}

double weyl_sum_sup(double t, int N) {
    if (N < 1) throw SpecError("weyl_sum_sup: N must be >= 1");
    size_t M = 64;
    while (M < 8 * static_cast<size_t>(N)) M <<= 1;
    std::vector<cplx> c(M, cplx(0.0, 0.0));
    const ExactPhase ph(t / two_pi);
    for (int n = 1; n <= N; ++n)
        c[static_cast<size_t>(n)] = std::conj(unit_phase(ph.frac_times(static_cast<u128>(n) * n)));
    ifft_unscaled(c);  // synthesis: value at x_j = 2 pi j / M
    double sup = 0;
    for (const cplx& v : c) sup = std::max(sup, std::abs(v));
    return sup;
}

namespace {
// gap-filled cyclic pieces in double radians, values included
struct DensityGeometry {
    std::vector<double> a, b;
    std::vector<cplx> c;
    long long K = 1;
    double eps = 0;
};

DensityGeometry density_geometry(const StepFunction& g) {
    if (g.empty()) throw SpecError("density: empty step function");
    const StepFunction filled = g.with_gaps_filled();
    DensityGeometry geo;
    geo.K = filled.revival_index();
    double min_len = two_pi;
    for (const auto& p : filled.pieces()) {
        const double a = p.a.radians();
        const double b = p.b.radians();
        geo.a.push_back(a);
        geo.b.push_back(b);
        geo.c.push_back(p.c);
        min_len = std::min(min_len, b - a);
    }
    geo.eps = 0.9 * min_len;
    return geo;
}

bool chi(double a, double b, double z) { return a <= z && z < b; }
}  // namespace

DensityPrediction density_fourier_asymptotic(const StepFunction& g, double t, long long k) {
    if (k < 1) throw SpecError("density_fourier_asymptotic: k must be >= 1");
    const DensityGeometry geo = density_geometry(g);
    const ExactPhase ph(t / two_pi);

    DensityPrediction out;
    out.K = geo.K;
    out.eps = geo.eps;
    const double f2 = ph.frac_times(static_cast<u128>(2) * static_cast<u128>(k));
    out.y = (f2 == 0.0) ? 0.0 : two_pi * (1.0 - f2);  // wrap(-2kt)
    const double fk2 = ph.frac_times(static_cast<u128>(k) * static_cast<u128>(k));
    out.valid = (k % geo.K == 0) && out.y > 0.0 && out.y < geo.eps;

    cplx bracket = 0;
    const size_t L = geo.c.size();
    for (size_t l = 0; l < L; ++l) {
        for (size_t m = 0; m < L; ++m) {
            const double zb = wrap_2pi(out.y + geo.b[m]);
            const double za = wrap_2pi(out.y + geo.a[m]);
            double ind = 0;
            if (chi(geo.a[l], geo.b[l], zb)) ind += 1.0;
            if (chi(geo.a[l], geo.b[l], za)) ind -= 1.0;
            if (ind != 0.0) bracket += geo.c[l] * std::conj(geo.c[m]) * ind;
        }
    }
    const double sin_k2t = std::sin(two_pi * fk2);
    out.predicted = -(sin_k2t / (pi * static_cast<double>(k))) * bracket;
    return out;
}

double set_S_density(const StepFunction& g, double t, long long k_max, double eps) {
    if (k_max < 1) throw SpecError("set_S_density: k_max must be >= 1");
    const DensityGeometry geo = density_geometry(g);
    const double e = (eps > 0.0) ? eps : geo.eps;
    const ExactPhase ph(t / two_pi);
    long long count = 0;
    for (long long k = geo.K; k <= k_max; k += geo.K) {
        const double f2 = ph.frac_times(static_cast<u128>(2) * static_cast<u128>(k));
        const double y = (f2 == 0.0) ? 0.0 : two_pi * (1.0 - f2);
        if (!(y > 0.0 && y < e)) continue;
        const double fk2 = ph.frac_times(static_cast<u128>(k) * static_cast<u128>(k));
        if (fk2 >= 0.125 && fk2 <= 0.375) ++count;  // wrap(k^2 t) in [pi/4, 3pi/4]
    }
    return static_cast<double>(count) /
           (static_cast<double>(k_max) / static_cast<double>(geo.K));
}

}  // namespace dq
