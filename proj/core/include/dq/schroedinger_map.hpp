#pragma once

#include <vector>

#include "dq/geometry.hpp"
#include "dq/spectral.hpp"
#include "dq/step_function.hpp"

namespace dq {

// closed curve on the unit sphere sampled at x_j = 2 pi j / M, M a power of two
struct SphereCurve {
    std::vector<Vec3> u;
    size_t M() const { return u.size(); }
};

SphereCurve equator(size_t M);                       // (cos x, sin x, 0)
SphereCurve latitude_circle(size_t M, double alpha);  // polar angle alpha from +z
SphereCurve reversed(const SphereCurve& c);

struct FrameTransport {
    std::vector<Vec3> e;  // e(x_j), e(0) = seed
    Vec3 e_end;           // transport across the full period, back at x = 0
};

// RK4 in x of the transport law dx e = -(u_x . e) u with spectral u_x and
// half-grid stage values from 2M-point spectral refinement; projection +
// normalization after every step. Seed must be unit and perpendicular to u(0).
FrameTransport parallel_frame(const SphereCurve& u0, const Vec3& e_seed);

// net frame rotation around one period, in (-pi, pi], measured in the basis
// {e(0), u(0) x e(0)}; equals minus the enclosed spherical area mod 2 pi
double holonomy(const SphereCurve& u0);

// q = (u_x . e) + i (u_x . (u x e)) as a band-limited field with N = M/2 - 1
SpectralField hasimoto_extract(const SphereCurve& u0, const std::vector<Vec3>& e);

struct SphereFrameState {
    SphereCurve u;
    std::vector<Vec3> e;
    SpectralField q{0};
    double t = 0;
};

// parallel frame + extraction in one step, t = 0
SphereFrameState hasimoto_state(const SphereCurve& u0, const Vec3& e_seed);

struct SmInvariantReport {
    double unit_u_defect = 0;    // max_j | |u_j| - 1 | over monitored times
    double unit_e_defect = 0;
    double orth_defect = 0;      // max |u . e|
    double mean_defect = 0;      // max |sum_j u_j| / M
    double h1_initial = 0, h1_final = 0, h1_drift_per_time = 0;  // int |u_x|^2
    double mass_initial = 0, mass_final = 0, mass_drift_per_time = 0;  // q L2 mass
    double curvature_defect = 0;      // max sup_x | |u_x| - |q| |
    double frame_residual_f = 0;      // max sup |u_x - q1 e - q2 (u x e)|
    double frame_residual_g = 0;      // max sup |e_x + q1 u|
    long long steps = 0;
    double dt_effective = 0;
};

// u_t = p1 e + p2 (u x e), e_t = -p1 u - (1/2)|q|^2 (u x e) with p = i dx q;
// q advanced by the cubic flow (lambda = 1/2) in two half steps per frame
// step so RK4 stage times have exact q snapshots; orthonormalization after
// every step. Invariants are monitored and a breach of 10x tolerance aborts.
SphereFrameState sm_evolve(const SphereFrameState& s0, double dt, double t_end,
                           SmInvariantReport* report = nullptr);

// planar unit-speed curve u0 = (cos theta, sin theta, 0), theta = int_0^x kappa,
// for real step curvature with mean exactly 1 and 2 pi/3-periodic profile (the
// symmetry closes the curve). mollify_width > 0 applies a Fejer taper of that
// width to kappa's spectrum before integrating; 0 keeps the exact corners.
SphereCurve planar_curve_from_curvature(const StepFunction& kappa, int mollify_width,
                                        size_t M = size_t{1} << 11);

struct Filament {
    std::vector<Vec3> gamma;  // gamma(x_j, t)
    Vec3 basepoint;           // gamma(0, t)
    double t = 0;
    double unit_speed_defect = 0;  // max_j | |gamma_x(x_j)| - 1 |
    double closure_defect = 0;     // |gamma(2 pi) - gamma(0)| = 2 pi |mean u|
};

// gamma(x,t) = gamma(0,t) + int_0^x u(y,t) dy by spectral antiderivative;
// the basepoint follows d/dt gamma(0,t) = (u x u_x)(0,t) integrated by
// 4th-order quadrature over the uniformly spaced history samples.
std::vector<Filament> vfe_reconstruct(const std::vector<SphereFrameState>& history,
                                      const Vec3& gamma0);

}  // namespace dq
