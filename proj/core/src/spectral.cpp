#include "dq/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "dq/fft.hpp"

namespace dq {

SpectralField to_spectral(const GridField& g) {
    const size_t M = g.M();
    if (M < 2) throw SpecError("to_spectral: need M >= 2");
    if (!is_pow2(static_cast<long long>(M))) throw SpecError("to_spectral: M must be a power of two");
    std::vector<cplx> a = g.v;
    fft(a);
    const int N = static_cast<int>(M / 2) - 1;
    SpectralField f(N);
    const double s = 1.0 / static_cast<double>(M);
    for (int n = -N; n <= N; ++n) {
        const size_t k = static_cast<size_t>((n + static_cast<int>(M)) % static_cast<int>(M));
        f.at(n) = a[k] * s;
    }
    return f;
}

GridField from_spectral(const SpectralField& f, size_t M) {
    if (!is_pow2(static_cast<long long>(M))) throw SpecError("from_spectral: M must be a power of two");
    if (M < 2 * static_cast<size_t>(f.N()) + 2)
        throw SpecError("from_spectral: grid too small for cutoff");
    std::vector<cplx> a(M, cplx(0.0));
    for (int n = -f.N(); n <= f.N(); ++n)
        a[static_cast<size_t>((n + static_cast<int>(M)) % static_cast<int>(M))] = f.coeff(n);
    ifft_unscaled(a);  // sum c_n e^{+inx_j}
    GridField g;
    g.v = std::move(a);
    return g;
}

double l2_sq(const SpectralField& f) {
    double s = 0;
    for (const cplx& z : f.data()) s += std::norm(z);
    return s;
}

double sobolev_norm(const SpectralField& f, double s) {
    double acc = 0;
    for (int n = -f.N(); n <= f.N(); ++n)
        acc += std::pow(1.0 + std::abs(n), 2 * s) * std::norm(f.coeff(n));
    return std::sqrt(acc);
}

double homogeneous_sobolev_norm(const SpectralField& f, double s) {
    double acc = 0;
    for (int n = -f.N(); n <= f.N(); ++n) {
        if (n == 0) continue;
        acc += std::pow(static_cast<double>(std::abs(n)), 2 * s) * std::norm(f.coeff(n));
    }
    return std::sqrt(acc);
}

SpectralField mean_zero(SpectralField f) {
    f.at(0) = 0;
    return f;
}

SpectralField truncate(const SpectralField& f, int N_new) {
    SpectralField out(N_new);
    const int K = std::min(N_new, f.N());
    for (int n = -K; n <= K; ++n) out.at(n) = f.coeff(n);
    return out;
}

SpectralField conjugated(const SpectralField& f) {
    SpectralField out(f.N());
    for (int n = -f.N(); n <= f.N(); ++n) out.at(n) = std::conj(f.coeff(-n));
    return out;
}

SpectralField resized(const SpectralField& f, int N_new) { return truncate(f, N_new); }

double conjugate_symmetry_defect(const SpectralField& f) {
    double worst = 0;
    for (int n = 0; n <= f.N(); ++n)
        worst = std::max(worst, std::abs(f.coeff(-n) - std::conj(f.coeff(n))));
    return worst;
}

bool is_real_valued(const SpectralField& f, double tol) {
    return conjugate_symmetry_defect(f) <= tol;
}

double l2_function_norm(const SpectralField& f) { return std::sqrt(two_pi * l2_sq(f)); }

}  // namespace dq
