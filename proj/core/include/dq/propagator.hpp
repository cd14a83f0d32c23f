#pragma once

#include <utility>
#include <vector>

#include "dq/common.hpp"
#include "dq/spectral.hpp"
#include "dq/step_function.hpp"

namespace dq {

struct DispersionLaw {
    int k = 2;
    explicit DispersionLaw(int order) : k(order) {
        if (order < 2) throw SpecError("DispersionLaw: order must be >= 2");
    }
};

// t = 2*pi*a/q with gcd(a,q) = 1, q >= 1
struct RationalTime {
    long long a = 0;
    long long q = 1;
    RationalTime(long long a_, long long q_);
    double radians() const { return two_pi * static_cast<double>(a) / static_cast<double>(q); }
};

// Exact unit phases e^{2 pi i frac(v*m)} for the double v and huge integers m.
// v's fractional part is mant*2^-s exactly (s = 53 - exponent), so
// frac(v*m) = ((mant*m) mod 2^s) * 2^-s; the product wraps mod 2^128, which
// preserves the low s bits for s <= 127. No phase drift however large m is.
class ExactPhase {
  public:
    explicit ExactPhase(double v);
    // frac(v*m) in [0,1)
    double frac_times(unsigned __int128 m) const;

  private:
    unsigned __int128 mant_ = 0;
    int s_ = 53;
    double vfrac_ = 0.0;
    bool tiny_ = false;  // |frac(v)| < 2^-74: fall back to fmod (documented loss)
};

// n^k in wrapping 128-bit arithmetic (exact mod 2^s for any s <= 128)
unsigned __int128 pow_wrap_u128(unsigned __int128 base, int k);

// coeff(n) *= e^{-itn^2} for k=2, e^{+itn^k} for k >= 3
SpectralField evolve_linear(const SpectralField& f, DispersionLaw law, double t);
SpectralField evolve_linear(const SpectralField& f, DispersionLaw law, RationalTime rt);

struct TalbotDecomposition {
    std::vector<cplx> w;  // r = 0..q-1
    long long a = 0, q = 1;
    double shift_step = 0;  // 2*pi/q
};

// Quadratic evolution at t = 2*pi*a/q as a finite superposition of translates:
// w_r = (1/q) sum_m e^{-2 pi i a m^2/q + 2 pi i m r/q}, all phases from exact
// integer residues mod q. Returns the weights and sum_r w_r g(x - 2 pi r/q)
// in canonical simplified piece form.
std::pair<TalbotDecomposition, StepFunction> talbot_rational(const StepFunction& g,
                                                             RationalTime rt);

// H_{N,t}(x) = sum_{0<|n|<=N} e^{-itn^2+inx}/n, as a direct sum, in
// summation-by-parts form H = T_N + sum_{n=1}^{N-1} T_n/(n+1) with
// T_n = (1/n) sum_{m=1}^{n} (e^{-itm^2+imx} - e^{-itm^2-imx}), and on a grid.
cplx kernel_H_at(double t, double x, int N);
cplx kernel_H_sbp_at(double t, double x, int N);
cplx kernel_partial_T_at(double t, double x, int n);
GridField kernel_H(double t, size_t M, int N);

struct JumpDatum {
    PiRational y;
    cplx delta;
};

// mean + (1/(2 pi i)) sum_j delta_j H_{N,t}(x - y_j) on an M-point grid
GridField kernel_superposition(const std::vector<JumpDatum>& jumps, cplx mean, double t,
                               int N, size_t M);
GridField evolve_via_kernel(const StepFunction& g, double t, int N, size_t M);

// sup over >= 8N grid points of |sum_{n=1}^N e^{-itn^2+inx}|
double weyl_sum_sup(double t, int N);

struct DensityPrediction {
    cplx predicted;   // main term of the k-th coefficient of |solution|^2
    bool valid = false;  // K | k and wrap(-2kt) inside (0, eps)
    double eps = 0;   // admissible window: 0.9 * (min piece length)
    double y = 0;     // wrap(-2kt) in [0, 2pi)
    long long K = 1;  // least K with K*a_l = K*b_l = 0 (mod 2pi)
};

// Main term -sin(k^2 t)/(pi k) * sum_{l,m} c_l conj(c_m)
// (chi_l(wrap(y+b_m)) - chi_l(wrap(y+a_m))), y = wrap(-2kt), over the
// gap-filled cyclic piece list. Exact for step data when valid.
DensityPrediction density_fourier_asymptotic(const StepFunction& g, double t, long long k);

// |{k <= k_max : K|k, wrap(-2kt) in (0,eps), wrap(k^2 t) in [pi/4, 3pi/4]}|
// normalized by k_max/K; eps = 0 picks the same default as the density op
double set_S_density(const StepFunction& g, double t, long long k_max, double eps = 0.0);

}  // namespace dq
