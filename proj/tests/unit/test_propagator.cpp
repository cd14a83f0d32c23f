#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "dq/diophantine.hpp"
#include "dq/propagator.hpp"
#include "dq/spectral.hpp"
#include "dq/step_function.hpp"

using namespace dq;

namespace {

SpectralField random_field(int N, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    SpectralField f(N);
    for (int n = -N; n <= N; ++n) f.at(n) = cplx(d(gen), d(gen));
    return f;
}

double max_coeff_diff(const SpectralField& a, const SpectralField& b) {
    const int N = std::max(a.N(), b.N());
    double m = 0;
    for (int n = -N; n <= N; ++n) m = std::max(m, std::abs(a.coeff(n) - b.coeff(n)));
    return m;
}

}  // namespace

TEST_CASE("evolve_linear: identity at t = 0 and full revival at t = 2 pi (order 2)") {
    auto f = random_field(64, 42);
    CHECK(max_coeff_diff(evolve_linear(f, DispersionLaw(2), 0.0), f) == 0.0);
    // e^{-i 2 pi n^2} = 1 exactly; the rational-time path uses integer residues
    CHECK(max_coeff_diff(evolve_linear(f, DispersionLaw(2), RationalTime(1, 1)), f) < 1e-15);
    // the double-t path must also land back within roundoff of the phases
    CHECK(max_coeff_diff(evolve_linear(f, DispersionLaw(2), two_pi), f) < 1e-9);
}

TEST_CASE("evolve_linear: half revival at t = pi translates by pi with sign flip structure") {
    // e^{-i pi n^2} = (-1)^n = e^{-i pi n}: evolution at pi equals translation by pi
    auto f = random_field(32, 7);
    auto ev = evolve_linear(f, DispersionLaw(2), RationalTime(1, 2));
    for (int n = -32; n <= 32; ++n) {
        const cplx expect = f.coeff(n) * ((n % 2 == 0) ? 1.0 : -1.0);
        CHECK(std::abs(ev.coeff(n) - expect) < 1e-15);
    }
}

TEST_CASE("evolve_linear: phase convention per order") {
    SpectralField f(3);
    f.at(2) = 1.0;
    const double t = 0.37;
    // order 2: e^{-i t n^2}
    auto e2 = evolve_linear(f, DispersionLaw(2), t);
    CHECK(std::abs(e2.coeff(2) - std::exp(cplx(0, -t * 4.0))) < 1e-15);
    // order 3: e^{+i t n^3}, odd symbol so negative modes conjugate
    auto e3 = evolve_linear(f, DispersionLaw(3), t);
    CHECK(std::abs(e3.coeff(2) - std::exp(cplx(0, t * 8.0))) < 1e-15);
    SpectralField g(3);
    g.at(-2) = 1.0;
    auto e3m = evolve_linear(g, DispersionLaw(3), t);
    CHECK(std::abs(e3m.coeff(-2) - std::exp(cplx(0, -t * 8.0))) < 1e-15);
    // order 4: e^{+i t n^4}, even symbol
    auto e4 = evolve_linear(g, DispersionLaw(4), t);
    CHECK(std::abs(e4.coeff(-2) - std::exp(cplx(0, t * 16.0))) < 1e-15);
}

TEST_CASE("evolve_linear: unitary on a large field") {
    auto f = random_field(1 << 13, 99);
    const double before = std::sqrt(l2_sq(f));
    for (int k : {2, 3, 4}) {
        auto ev = evolve_linear(f, DispersionLaw(k), 0.618);
        CHECK(std::fabs(std::sqrt(l2_sq(ev)) - before) < 1e-12 * before);
    }
}

TEST_CASE("evolve_linear: semigroup property") {
    auto f = random_field(64, 5);
    for (int k : {2, 3}) {
        auto one = evolve_linear(evolve_linear(f, DispersionLaw(k), 0.3), DispersionLaw(k), 0.4);
        auto two = evolve_linear(f, DispersionLaw(k), 0.7);
        CHECK(max_coeff_diff(one, two) < 1e-12);
    }
}

TEST_CASE("evolve_linear: rational and double paths agree at moderate n") {
    auto f = random_field(256, 11);
    RationalTime rt(3, 8);
    auto a = evolve_linear(f, DispersionLaw(2), rt);
    auto b = evolve_linear(f, DispersionLaw(2), rt.radians());
    CHECK(max_coeff_diff(a, b) < 1e-9);
}

TEST_CASE("ExactPhase: exact wraparound for dyadic v and huge m") {
    // v = 3/16: frac(v*m) must be exact for any m, however large
    ExactPhase ph(3.0 / 16.0);
    using u128 = unsigned __int128;
    CHECK(ph.frac_times(u128(16)) == 0.0);
    CHECK(ph.frac_times(u128(5)) == doctest::Approx(15.0 / 16.0).epsilon(1e-16));
    // m = 2^100 + 3: frac(3*(2^100+3)/16) = frac(3*2^100/16 + 9/16) = 9/16
    const u128 m = (u128(1) << 100) + 3;
    CHECK(ph.frac_times(m) == doctest::Approx(9.0 / 16.0).epsilon(1e-16));
}

TEST_CASE("pow_wrap_u128 matches repeated multiplication") {
    using u128 = unsigned __int128;
    u128 b = 123456789;
    u128 ref = 1;
    for (int k = 1; k <= 6; ++k) {
        ref *= b;  // wraps mod 2^128 identically
        CHECK(pow_wrap_u128(b, k) == ref);
    }
    CHECK(pow_wrap_u128(b, 0) == u128(1));
}

TEST_CASE("talbot weights: hand values at q = 1, 2, 4") {
    auto g = step_indicator_half();
    auto [d1, s1] = talbot_rational(g, RationalTime(0, 1));
    REQUIRE(d1.w.size() == 1);
    CHECK(std::abs(d1.w[0] - cplx(1, 0)) == 0.0);

    // t = pi: w = (0, 1) -- pure translation by pi
    auto [d2, s2] = talbot_rational(g, RationalTime(1, 2));
    REQUIRE(d2.w.size() == 2);
    CHECK(std::abs(d2.w[0]) < 1e-15);
    CHECK(std::abs(d2.w[1] - cplx(1, 0)) < 1e-15);

    // t = pi/2: w = ((1-i)/2, 0, (1+i)/2, 0)
    auto [d4, s4] = talbot_rational(g, RationalTime(1, 4));
    REQUIRE(d4.w.size() == 4);
    CHECK(std::abs(d4.w[0] - cplx(0.5, -0.5)) < 1e-15);
    CHECK(std::abs(d4.w[1]) < 1e-15);
    CHECK(std::abs(d4.w[2] - cplx(0.5, 0.5)) < 1e-15);
    CHECK(std::abs(d4.w[3]) < 1e-15);
    CHECK(d4.shift_step == doctest::Approx(two_pi / 4.0).epsilon(1e-16));
}

TEST_CASE("talbot weights: unreduced fractions are rejected") {
    auto g = step_indicator_half();
    CHECK_THROWS_AS((void)talbot_rational(g, RationalTime(2, 4)), SpecError);
    CHECK_THROWS_AS((void)RationalTime(1, 0), SpecError);
}

TEST_CASE("talbot weights: unitarity row sum for q <= 32") {
    auto g = step_indicator_half();
    for (long long q = 1; q <= 32; ++q) {
        for (long long a = 0; a < q; ++a) {
            if (std::gcd(a, q) != 1 && !(a == 0 && q == 1)) continue;
            auto [d, s] = talbot_rational(g, RationalTime(a, q));
            double sum = 0;
            for (auto w : d.w) sum += std::norm(w);
            CHECK(std::fabs(sum - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("talbot weights: odd q gives flat magnitude 1/sqrt(q)") {
    auto g = step_indicator_half();
    for (long long q : {3, 5, 7, 9, 15, 21, 31}) {
        auto [d, s] = talbot_rational(g, RationalTime(1, q));
        for (auto w : d.w) CHECK(std::fabs(std::abs(w) - 1.0 / std::sqrt(double(q))) < 1e-10);
    }
}

TEST_CASE("talbot decomposition reproduces the linear evolution of step data") {
    auto g = step_indicator_half();
    const int N = 1 << 10;
    for (auto [a, q] : {std::pair<long long, long long>{1, 3}, {2, 5}, {3, 8}, {5, 12}}) {
        RationalTime rt(a, q);
        auto [d, evolved_step] = talbot_rational(g, rt);
        auto via_step = step_fourier(evolved_step, N);
        auto via_phase = evolve_linear(step_fourier(g, N), DispersionLaw(2), rt);
        CHECK(max_coeff_diff(via_step, via_phase) < 1e-14);
    }
}

TEST_CASE("talbot output is a canonical step function") {
    auto g = step_indicator_half();
    auto [d, s] = talbot_rational(g, RationalTime(1, 4));
    CHECK(s.has_distinct_adjacent_levels());
    // quantized on the 2 pi/(4*2) grid: four translates of a half-indicator
    for (const auto& piece : s.jumps()) (void)piece;
    CHECK(s.total_variation() > 0.0);
}

TEST_CASE("kernel H: t = 0 recovers the sawtooth i(pi - x)") {
    // sum_{0<|n|<=N} e^{inx}/n = 2i sum sin(nx)/n -> i(pi - x) on (0, 2pi)
    const int N = 4096;
    for (double x : {0.7, 1.9, 3.3, 5.1}) {
        const cplx expect(0.0, pi - x);
        CHECK(std::abs(kernel_H_at(0.0, x, N) - expect) < 1e-3);
    }
    CHECK(std::abs(kernel_H_at(0.0, 0.0, N)) < 1e-12);  // odd series vanishes at 0
}

TEST_CASE("kernel H: summation-by-parts form equals the direct sum") {
    for (double t : {0.0, 0.5, two_pi * 0.41421356}) {
        for (double x : {0.3, 2.2, 4.8}) {
            const auto direct = kernel_H_at(t, x, 512);
            const auto sbp = kernel_H_sbp_at(t, x, 512);
            CHECK(std::abs(direct - sbp) < 1e-10);
        }
    }
}

TEST_CASE("kernel H: grid version matches pointwise evaluation") {
    const double t = 0.9;
    const size_t M = 1024;
    auto grid = kernel_H(t, M, 256);
    for (size_t j = 0; j < M; j += 97) {
        const double x = two_pi * double(j) / double(M);
        CHECK(std::abs(grid.v[j] - kernel_H_at(t, x, 256)) < 1e-10);
    }
}

TEST_CASE("evolve_via_kernel agrees with the spectral evolution") {
    auto g = step_indicator_half();
    const double t = two_pi * (std::sqrt(2.0) - 1.0);
    const int N = 1 << 12;
    const size_t M = 1 << 14;
    auto via_kernel = evolve_via_kernel(g, t, N, M);
    auto via_phase = from_spectral(evolve_linear(step_fourier(g, N), DispersionLaw(2), t), M);
    double sup = 0;
    for (size_t j = 0; j < M; ++j) sup = std::max(sup, std::abs(via_kernel.v[j] - via_phase.v[j]));
    CHECK(sup < 1e-3);
}

TEST_CASE("kernel superposition is linear in the jump data") {
    const double t = 0.37;
    const int N = 512;
    const size_t M = 2048;
    std::vector<JumpDatum> both = {{PiRational(0, 1), cplx(1, 0)}, {PiRational(1, 1), cplx(-1, 0)}};
    std::vector<JumpDatum> first = {{PiRational(0, 1), cplx(1, 0)}};
    std::vector<JumpDatum> second = {{PiRational(1, 1), cplx(-1, 0)}};
    auto all = kernel_superposition(both, cplx(0.25, 0), t, N, M);
    auto f1 = kernel_superposition(first, cplx(0.25, 0), t, N, M);
    auto f2 = kernel_superposition(second, cplx(0, 0), t, N, M);
    for (size_t j = 0; j < M; j += 131)
        CHECK(std::abs(all.v[j] - (f1.v[j] + f2.v[j])) < 1e-12);
}

TEST_CASE("weyl_sum_sup: exact linear growth at rational reference points") {
    CHECK(weyl_sum_sup(0.0, 128) == doctest::Approx(128.0).epsilon(1e-12));
    // golden-type times grow like N^{1/2+} instead
    const double t = two_pi * (std::sqrt(5.0) - 1.0) / 2.0;
    const int N = 1 << 10;
    CHECK(weyl_sum_sup(t, N) < 10.0 * std::pow(double(N), 0.6));
}

TEST_CASE("density prediction: valid only on the admissible arithmetic set") {
    auto g = step_indicator_half();
    // K = 2 for the half indicator (pieces on the pi grid)
    const double t = 0.1;
    auto odd = density_fourier_asymptotic(g, t, 3);
    CHECK_FALSE(odd.valid);
    auto even = density_fourier_asymptotic(g, t, 2);
    CHECK(even.K == 2);
    CHECK(even.eps == doctest::Approx(0.9 * pi).epsilon(1e-12));
}

TEST_CASE("density prediction matches the truncated convolution at high k") {
    // two-level step: chi_[0,pi) - chi_[pi,2pi); mean zero
    StepFunction g({{PiRational(0, 1), PiRational(1, 1), cplx(1, 0)},
                    {PiRational(1, 1), PiRational(2, 1), cplx(-1, 0)}});
    const double t = two_pi * (std::sqrt(2.0) - 1.0);
    const int N = 1 << 13;
    auto f = evolve_linear(step_fourier(g, N), DispersionLaw(2), t);
    int checked = 0;
    for (long long k = 2; k <= 400 && checked < 24; k += 2) {
        auto pr = density_fourier_asymptotic(g, t, k);
        if (!pr.valid) continue;
        // k-th coefficient of |f|^2 by direct convolution over the band
        cplx conv = 0;
        for (int n = -N; n <= N; ++n) {
            const long long m = n - k;
            if (m < -N || m > N) continue;
            conv += f.coeff(n) * std::conj(f.coeff(int(m)));
        }
        const double resid = std::abs(conv - pr.predicted);
        CHECK(resid * double(k) * double(k) <= 10.0);
        ++checked;
    }
    CHECK(checked >= 12);
}

TEST_CASE("set_S density: positive frequency of admissible k for generic times") {
    auto g = step_indicator_half();
    const double t = two_pi * (std::sqrt(2.0) - 1.0);
    const double d = set_S_density(g, t, 100000);
    // wrap(-2kt) lands in (0, 0.9 pi) with frequency 0.9 pi/2 pi = 0.45, and the
    // quadratic phase window [pi/4, 3pi/4] keeps half of those: ~0.225
    CHECK(d > 0.10);
    CHECK(d < 0.40);
    // doubling k_max moves the estimate by little
    const double d2 = set_S_density(g, t, 200000);
    CHECK(std::fabs(d - d2) < 0.1 * std::max(d, d2));
    // k_max below the first admissible k gives zero
    CHECK(set_S_density(g, t, 1) == 0.0);
}
