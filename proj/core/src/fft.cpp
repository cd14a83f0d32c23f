#include "dq/fft.hpp"

#include <memory>
#include <mutex>
#include <unordered_map>

namespace dq {
namespace {

// roots[k] = e^{-2pi i k/M} for k < M/2
std::shared_ptr<const std::vector<cplx>> twiddles(size_t M) {
    static std::mutex mu;
    static std::unordered_map<size_t, std::shared_ptr<const std::vector<cplx>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(M);
    if (it != cache.end()) return it->second;
    auto tab = std::make_shared<std::vector<cplx>>(M / 2);
    for (size_t k = 0; k < M / 2; ++k)
        (*tab)[k] = std::polar(1.0, -two_pi * static_cast<double>(k) / static_cast<double>(M));
    cache.emplace(M, tab);
    return tab;
}

void transform(std::vector<cplx>& a, bool forward) {
    const size_t M = a.size();
    if (M <= 1) return;
    if (!is_pow2(static_cast<long long>(M))) throw SpecError("fft: size must be a power of two");

    for (size_t i = 1, j = 0; i < M; ++i) {
        size_t bit = M >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    auto roots = twiddles(M);
    const std::vector<cplx>& w = *roots;
    for (size_t len = 2; len <= M; len <<= 1) {
        const size_t half = len >> 1;
        const size_t stride = M / len;
        for (size_t i = 0; i < M; i += len) {
            for (size_t k = 0; k < half; ++k) {
                cplx tw = w[k * stride];
                if (!forward) tw = std::conj(tw);
                const cplx u = a[i + k];
                const cplx v = a[i + k + half] * tw;
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
        }
    }
}

}  // namespace

void fft(std::vector<cplx>& a) { transform(a, true); }

void ifft_unscaled(std::vector<cplx>& a) { transform(a, false); }

void ifft(std::vector<cplx>& a) {
    transform(a, false);
    const double s = 1.0 / static_cast<double>(a.size());
    for (cplx& z : a) z *= s;
}

std::vector<cplx> dft_direct(const std::vector<cplx>& a, int sign_exponent) {
    const size_t M = a.size();
    std::vector<cplx> out(M);
    for (size_t k = 0; k < M; ++k) {
        cplx acc = 0;
        for (size_t m = 0; m < M; ++m) {
            const double ang = sign_exponent * two_pi * static_cast<double>(k * m % M) /
                               static_cast<double>(M);
            acc += a[m] * std::polar(1.0, ang);
        }
        out[k] = acc;
    }
    return out;
}

}  // namespace dq
