#pragma once

#include <vector>

#include "dq/common.hpp"

namespace dq {

// Fourier data of a 2pi-periodic function under the normalization
//   u(x) = sum_{|n|<=N} c_n e^{inx},   c_n = (1/2pi) \int_0^{2pi} u e^{-inx} dx.
// Full-spectrum layout: index n+N, length 2N+1. coeff(n) for |n|>N is 0.
class SpectralField {
  public:
    explicit SpectralField(int N) : N_(N), c_(2 * static_cast<size_t>(N) + 1) {
        if (N < 0) throw SpecError("SpectralField: negative cutoff");
    }

    int N() const { return N_; }
    cplx coeff(int n) const {
        return (n < -N_ || n > N_) ? cplx(0.0) : c_[static_cast<size_t>(n + N_)];
    }
    cplx& at(int n) {
        if (n < -N_ || n > N_) throw SpecError("SpectralField: mode out of range");
        return c_[static_cast<size_t>(n + N_)];
    }
    const std::vector<cplx>& data() const { return c_; }
    std::vector<cplx>& data() { return c_; }

  private:
    int N_;
    std::vector<cplx> c_;  // index n + N_
};

// Samples at x_j = 2pi j/M, M a power of two.
struct GridField {
    std::vector<cplx> v;
    GridField() = default;
    explicit GridField(size_t M) : v(M) {}
    size_t M() const { return v.size(); }
};

// DFT pair. to_spectral keeps |n| <= M/2 - 1 (the Nyquist bin is dropped so a
// real-valued grid keeps conjugate symmetry); exact inverse of from_spectral
// on band-limited fields with M >= 2N+2.
SpectralField to_spectral(const GridField& g);
GridField from_spectral(const SpectralField& f, size_t M);

// sum of |c_n|^2
double l2_sq(const SpectralField& f);

// (sum <n>^{2s} |c_n|^2)^{1/2} with <n> = 1+|n|; homogeneous variant uses |n|
// and skips n=0.
double sobolev_norm(const SpectralField& f, double s);
double homogeneous_sobolev_norm(const SpectralField& f, double s);

SpectralField mean_zero(SpectralField f);
SpectralField truncate(const SpectralField& f, int N_new);

// spectrum of conj(u): coeff(n) -> conj(coeff(-n))
SpectralField conjugated(const SpectralField& f);

// re-banded copy (truncates or zero-extends)
SpectralField resized(const SpectralField& f, int N_new);

// conjugate-symmetry check: max_n |c_{-n} - conj(c_n)|
double conjugate_symmetry_defect(const SpectralField& f);
bool is_real_valued(const SpectralField& f, double tol = 1e-10);

// L2(dx) function norm of the represented function: sqrt(2pi * l2_sq)
double l2_function_norm(const SpectralField& f);

}  // namespace dq
