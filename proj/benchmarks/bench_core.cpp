#include <benchmark/benchmark.h>

#include <cmath>

#include "dq/propagator.hpp"
#include "dq/regularity.hpp"
#include "dq/solvers.hpp"
#include "dq/spectral.hpp"
#include "dq/step_function.hpp"

using namespace dq;

namespace {

SpectralField smooth_field(int N) {
    SpectralField f(N);
    for (int n = -N; n <= N; ++n)
        f.at(n) = cplx(std::cos(0.7 * n), std::sin(1.3 * n)) * std::exp(-1e-5 * double(n) * n);
    return f;
}

void BM_synthesis(benchmark::State& state) {
    const int N = int(state.range(0)) / 2 - 1;
    const auto f = smooth_field(N);
    for (auto _ : state) benchmark::DoNotOptimize(from_spectral(f, size_t(state.range(0))));
    state.SetComplexityN(state.range(0));
}

void BM_analysis(benchmark::State& state) {
    const auto g = from_spectral(smooth_field(int(state.range(0)) / 2 - 1), size_t(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(to_spectral(g));
    state.SetComplexityN(state.range(0));
}

void BM_step_fourier(benchmark::State& state) {
    const auto g = square_wave_profile(0.3);
    for (auto _ : state) benchmark::DoNotOptimize(step_fourier(g, int(state.range(0))));
}

void BM_evolve_linear_double(benchmark::State& state) {
    const auto f = step_fourier(step_indicator_half(), int(state.range(0)));
    const double t = two_pi * (std::sqrt(2.0) - 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(evolve_linear(f, DispersionLaw(2), t));
}

void BM_evolve_linear_rational(benchmark::State& state) {
    const auto f = step_fourier(step_indicator_half(), int(state.range(0)));
    const RationalTime rt(3, 8);
    for (auto _ : state) benchmark::DoNotOptimize(evolve_linear(f, DispersionLaw(2), rt));
}

void BM_talbot_weights(benchmark::State& state) {
    const auto g = step_indicator_half();
    const RationalTime rt(2, state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(talbot_rational(g, rt));
}

void BM_weyl_sum_sup(benchmark::State& state) {
    const double t = two_pi * (std::sqrt(5.0) - 2.0);
    for (auto _ : state) benchmark::DoNotOptimize(weyl_sum_sup(t, int(state.range(0))));
}

void BM_nls_step(benchmark::State& state) {
    NlsParams p;
    p.N = int(state.range(0));
    p.dt = 1e-4;
    const auto q0 = step_fourier(step_indicator_half(), p.N);
    for (auto _ : state) benchmark::DoNotOptimize(nls_evolve(q0, p, p.dt));
}

void BM_box_dimension(benchmark::State& state) {
    const size_t M = size_t(state.range(0));
    const auto grid = from_spectral(
        evolve_linear(step_fourier(step_indicator_half(), int(M) / 2 - 1), DispersionLaw(2), 1.0),
        M);
    std::vector<double> re(M);
    for (size_t j = 0; j < M; ++j) re[j] = std::real(grid.v[j]);
    for (auto _ : state) benchmark::DoNotOptimize(box_dimension(re));
}

BENCHMARK(BM_synthesis)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();
BENCHMARK(BM_analysis)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();
BENCHMARK(BM_step_fourier)->Arg(1 << 10)->Arg(1 << 13);
BENCHMARK(BM_evolve_linear_double)->Arg(1 << 13)->Arg(1 << 15);
BENCHMARK(BM_evolve_linear_rational)->Arg(1 << 13)->Arg(1 << 15);
BENCHMARK(BM_talbot_weights)->Arg(31)->Arg(101)->Arg(1021);
BENCHMARK(BM_weyl_sum_sup)->Arg(1 << 10)->Arg(1 << 13);
BENCHMARK(BM_nls_step)->Arg(1 << 10)->Arg(1 << 12);
BENCHMARK(BM_box_dimension)->Arg(1 << 14)->Arg(1 << 16);

}  // namespace

BENCHMARK_MAIN();
