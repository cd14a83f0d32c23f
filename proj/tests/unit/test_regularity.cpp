#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dq/regularity.hpp"
#include "dq/spectral.hpp"

using namespace dq;

namespace {

std::vector<double> sample_function(double (*f)(double), int m) {
    const size_t M = size_t{1} << m;
    std::vector<double> out(M);
    for (size_t j = 0; j < M; ++j) out[j] = f(two_pi * double(j) / double(M));
    return out;
}

double weierstrass_half(double x) {
    // sum 2^{-j/2} cos(2^j x): Holder 1/2, graph dimension 3/2
    double v = 0;
    for (int j = 0; j <= 22; ++j) v += std::pow(2.0, -0.5 * j) * std::cos(std::ldexp(1.0, j) * x);
    return v;
}

double identity_map(double x) { return x; }
double sign_of_sine(double x) { return std::sin(x) >= 0 ? 1.0 : -1.0; }

}  // namespace

TEST_CASE("lp_blocks: a single mode lands in one block with known norms") {
    SpectralField f(16);
    f.at(5) = 1.0;  // 4 <= 5 < 8: block j = 3
    auto b = lp_blocks(f);
    REQUIRE(b.j_top >= 3);
    CHECK(b.l2[3] == doctest::Approx(std::sqrt(two_pi)).epsilon(1e-12));
    CHECK(b.linf[3] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(b.l1[3] == doctest::Approx(two_pi).epsilon(1e-6));  // |e^{i5x}| = 1 everywhere
    for (int j = 0; j <= b.j_top; ++j) {
        if (j == 3) continue;
        CHECK(b.l2[j] == 0.0);
    }
}

TEST_CASE("lp_blocks: blocks partition the L2 energy") {
    std::mt19937 gen(314);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    SpectralField f(200);
    for (int n = -200; n <= 200; ++n) f.at(n) = cplx(d(gen), d(gen));
    auto b = lp_blocks(f);
    double total = 0;
    for (double v : b.l2) total += v * v;
    CHECK(total == doctest::Approx(two_pi * l2_sq(f)).epsilon(1e-10));
}

TEST_CASE("besov_exponent: synthetic exact dyadic decay") {
    // ||P_j f||_2 = 2^{-j/2} exactly: put all block energy at n = 2^{j-1}
    SpectralField f(1 << 10);
    for (int j = 1; j <= 10; ++j)
        f.at(1 << (j - 1)) = std::pow(2.0, -0.5 * j) / std::sqrt(two_pi);
    auto b = lp_blocks(f);
    CHECK(besov_exponent(b, LpKind::L2) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("besov_exponent: white coefficients have s2 = -1/2") {
    // |f_n| = 1 for all n: block energy 2^{j-1} modes -> l2 ~ 2^{+j/2}
    SpectralField f(1 << 10);
    for (int n = 1; n <= (1 << 10); ++n) f.at(n) = 1.0 / std::sqrt(two_pi);
    auto b = lp_blocks(f);
    CHECK(besov_exponent(b, LpKind::L2) == doctest::Approx(-0.5).epsilon(1e-10));
}

TEST_CASE("besov_exponent: sawtooth has s_inf = 1 up to constants") {
    // f_n = 1/n: each block sup is comparable to a constant independent of j
    SpectralField f(1 << 9);
    for (int n = 1; n <= (1 << 9); ++n) f.at(n) = cplx(0, -1.0 / double(n));
    for (int n = 1; n <= (1 << 9); ++n) f.at(-n) = std::conj(f.coeff(n));
    auto b = lp_blocks(f);
    double lo = 1e300, hi = 0;
    for (int j = 2; j <= std::min(8, b.j_top); ++j) {
        lo = std::min(lo, b.linf[j]);
        hi = std::max(hi, b.linf[j]);
    }
    CHECK(hi / lo <= 3.0);
    // and the fitted exponent reflects |P_j f|_inf ~ const: s_inf ~ 0
    CHECK(std::fabs(besov_exponent(b, LpKind::Linf)) < 0.15);
}

TEST_CASE("besov_exponent: Weierstrass-type series has s_inf = 1/2") {
    SpectralField f(1 << 12);
    for (int j = 0; j <= 11; ++j) {
        const int n = 1 << j;
        f.at(n) = 0.5 * std::pow(2.0, -0.5 * j);
        f.at(-n) = 0.5 * std::pow(2.0, -0.5 * j);
    }
    auto b = lp_blocks(f);
    CHECK(besov_exponent(b, LpKind::Linf, 3, 9) == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("box_dimension: smooth graphs have dimension 1") {
    auto est = box_dimension(sample_function(identity_map, 16));
    CHECK(est.slope == doctest::Approx(1.0).epsilon(0.02));
    CHECK(est.residual < 0.1);
}

TEST_CASE("box_dimension: constant input short-circuits to (1, 0)") {
    std::vector<double> flat(size_t{1} << 12, 3.25);
    auto est = box_dimension(flat);
    CHECK(est.slope == 1.0);
    CHECK(est.residual == 0.0);
}

TEST_CASE("box_dimension: Weierstrass graph has dimension 3/2") {
    auto est = box_dimension(sample_function(weierstrass_half, 18));
    CHECK(est.slope == doctest::Approx(1.5).epsilon(0.04));
}

TEST_CASE("box_dimension: step functions have dimension 1") {
    auto est = box_dimension(sample_function(sign_of_sine, 16));
    CHECK(est.slope == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("box_dimension: invariant under translation and bi-Lipschitz scaling") {
    auto base = sample_function(weierstrass_half, 16);
    auto est0 = box_dimension(base);
    auto shifted = base;
    for (auto& v : shifted) v += 17.5;
    auto est1 = box_dimension(shifted);
    CHECK(std::fabs(est1.slope - est0.slope) < 1e-12);  // counts depend on oscillation only
    auto scaled = base;
    for (auto& v : scaled) v *= 1.7;
    auto est2 = box_dimension(scaled);
    CHECK(std::fabs(est2.slope - est0.slope) < 0.05);
}

TEST_CASE("box_dimension: rejects undersized input, honors window options") {
    CHECK_THROWS_AS((void)box_dimension(std::vector<double>(1024, 0.0)), SpecError);
    auto samples = sample_function(weierstrass_half, 14);
    DimensionOptions opt;
    opt.j_min = 4;
    opt.j_max = 8;
    auto est = box_dimension(samples, opt);
    CHECK(est.j_min == 4);
    CHECK(est.j_max == 8);
    CHECK(!est.counts.empty());
}

TEST_CASE("dimension_sandwich arithmetic and clamping") {
    auto [lo, hi] = dimension_sandwich(0.5, 0.75);
    CHECK(lo == doctest::Approx(1.25));
    CHECK(hi == doctest::Approx(1.5));
    auto [lo2, hi2] = dimension_sandwich(1.5, 1.75);
    CHECK(lo2 == 1.0);  // clamped from 0.25
    CHECK(hi2 == 1.0);  // clamped from 0.5
    auto [lo3, hi3] = dimension_sandwich(-0.5, -0.25);
    CHECK(hi3 == 2.0);  // clamped from 2.5
    CHECK(lo3 == 2.0);
}

TEST_CASE("sobolev_divergence: band-limited data has bounded partial sums") {
    SpectralField f(64);
    std::mt19937 gen(2718);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int n = -64; n <= 64; ++n) f.at(n) = cplx(d(gen), d(gen));
    auto rep = sobolev_divergence(resized(f, 1 << 12), 0.6, RealPart::Re);
    CHECK_FALSE(rep.diverging);
    // partial sums are flat once the band is exhausted
    CHECK(rep.partial_sums.back() == doctest::Approx(rep.partial_sums[rep.partial_sums.size() - 2]).epsilon(1e-12));
}

TEST_CASE("sobolev_divergence: coefficients 1/k diverge for r = 0.6, not r = 0.3") {
    // |h_k| = 1/k: sum k^{2r} |h_k|^2 = sum k^{2r-2} diverges iff r >= 1/2
    SpectralField f(1 << 13);
    for (int k = 1; k <= (1 << 13); ++k) {
        f.at(k) = cplx(1.0 / double(k), 0);
        f.at(-k) = cplx(1.0 / double(k), 0);
    }
    auto hot = sobolev_divergence(f, 0.6, RealPart::Re);
    CHECK(hot.diverging);
    CHECK(hot.slope == doctest::Approx(0.2).epsilon(0.2));  // S_K ~ K^{2r-1}
    auto cold = sobolev_divergence(f, 0.3, RealPart::Re);
    CHECK_FALSE(cold.diverging);
}

TEST_CASE("sobolev_divergence: Re/Im split sees only its own part") {
    // purely imaginary-odd data: f_k = i/k, f_{-k} = conj(f_k) makes Re(f) = 0... use
    // f_k = 1/k, f_{-k} = -1/k so h^re_k = 0 and h^im_k = -i/k is nonzero
    SpectralField f(1 << 12);
    for (int k = 1; k <= (1 << 12); ++k) {
        f.at(k) = cplx(1.0 / double(k), 0);
        f.at(-k) = cplx(-1.0 / double(k), 0);
    }
    auto re = sobolev_divergence(f, 0.9, RealPart::Re);
    CHECK(re.partial_sums.back() < 1e-20);
    auto im = sobolev_divergence(f, 0.9, RealPart::Im);
    CHECK(im.diverging);
}

TEST_CASE("bilinear_check: products of random band-limited fields stay bounded") {
    auto rep = bilinear_check(200, 0.0, 0.05);
    CHECK(rep.trials_used == 200);
    CHECK(rep.max_ratio > 0.1);
    CHECK(rep.max_ratio <= 3.0);
}

TEST_CASE("bilinear_check: multiplying by a constant is the identity bound") {
    // alpha and delta at the endpoints still give a finite uniform constant
    for (double alpha : {-0.5, 0.5}) {
        auto rep = bilinear_check(50, alpha, 0.1);
        CHECK(rep.max_ratio <= 10.0);
    }
}
