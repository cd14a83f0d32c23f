#pragma once

#include <vector>

#include "dq/common.hpp"
#include "dq/regularity.hpp"
#include "dq/spectral.hpp"
#include "dq/step_function.hpp"

namespace dq {

struct NlsParams {
    double lambda = 1.0;  // i q_t + q_xx + lambda |q|^2 q = 0
    int N = 1 << 12;      // retained band, power of two
    double dt = 1e-4;
    bool dealias = true;  // 2/3-rule mask on the state each step
};

struct ConservationReport {
    double mass_initial = 0, mass_final = 0, mass_drift_per_time = 0;
    double energy_initial = 0, energy_final = 0, energy_drift_per_time = 0;
    double sup_abs = 0;  // largest grid amplitude seen (blow-up monitor)
    long long steps = 0;
    double dt_effective = 0;
};

// Strang split-step: half linear phase e^{-i n^2 dt/2}, full nonlinear phase
// u <- u e^{i lambda |u|^2 dt} on a 4N-size grid, half linear phase.
// lambda = 0 runs the exact linear path; negative t via q -> conj(q).
SpectralField nls_evolve(const SpectralField& q0, const NlsParams& p, double t,
                         ConservationReport* report = nullptr);

struct KdvReport {
    double mean_initial = 0, mean_final = 0;  // integral of u (exact invariant)
    double momentum_initial = 0, momentum_final = 0, momentum_drift_per_time = 0;
    long long steps = 0;
    double dt_effective = 0;
};

// u_t + u_xxx + u u_x = 0 by integrating factor (linear phase e^{i n^3 t})
// with classical RK4 on the nonlinear term; quadratic products on a 4N grid.
SpectralField kdv_evolve(const SpectralField& u0, int N, double dt, double t,
                         KdvReport* report = nullptr);

struct SmoothingOptions {
    int N = 1 << 13;
    double dt = 5e-5;
    int j_lo = 4;
    int j_hi = -1;  // default: min(j_top-2, split-step resonance cap)
    bool dealias = true;
};

struct SmoothingReport {
    double mu = 0;  // gauge rate 2*lambda*sum|g_hat|^2 removed from the difference
    double beta_linear = 0, beta_duhamel = 0, gap = 0;
    int j_lo = 0, j_hi = 0;
    std::vector<double> s_probe, hs_linear, hs_duhamel;
    DyadicBlockNorms blocks_linear, blocks_duhamel;
};

// D(t) = e^{-i mu t} nls_evolve(g,t) - evolve_linear(g,t); dyadic L2 tail
// exponents of D and of the linear part over a shared window, plus H^s norms
// for each s in s_probe.
SmoothingReport smoothing_probe(const StepFunction& g, double lambda, double t,
                                const std::vector<double>& s_probe = {0.6, 0.9},
                                const SmoothingOptions& opts = {});

}  // namespace dq
