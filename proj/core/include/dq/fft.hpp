#pragma once

#include <vector>

#include "dq/common.hpp"

namespace dq {

// In-place radix-2 FFT, engineering sign convention:
//   forward:  X_k = sum_m x_m e^{-2pi i km/M}
//   inverse:  x_m = (1/M) sum_k X_k e^{+2pi i km/M}
// M must be a power of two. Twiddle tables are cached per size and shared
// across threads; all call paths are deterministic.
void fft(std::vector<cplx>& a);
void ifft(std::vector<cplx>& a);           // includes the 1/M scale
void ifft_unscaled(std::vector<cplx>& a);  // sum with e^{+2pi i km/M}, no scale

// O(M^2) reference transform for oracle tests.
std::vector<cplx> dft_direct(const std::vector<cplx>& a, int sign_exponent);

}  // namespace dq
