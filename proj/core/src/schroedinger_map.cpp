#include "dq/schroedinger_map.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "dq/fft.hpp"

namespace dq {

namespace {

void check_curve(const SphereCurve& c) {
    const size_t M = c.M();
    if (M < 8 || !is_pow2(M)) throw SpecError("SphereCurve: M must be a power of two >= 8");
    for (const Vec3& v : c.u)
        if (std::abs(norm(v) - 1.0) > 1e-10)
            throw SpecError("SphereCurve: samples must lie on the unit sphere (1e-10)");
}

std::array<SpectralField, 3> curve_spectrum(const std::vector<Vec3>& u) {
    const size_t M = u.size();
    GridField gx(M), gy(M), gz(M);
    for (size_t j = 0; j < M; ++j) {
        gx.v[j] = u[j].x;
        gy.v[j] = u[j].y;
        gz.v[j] = u[j].z;
    }
    return {to_spectral(gx), to_spectral(gy), to_spectral(gz)};
}

SpectralField x_derivative(const SpectralField& f) {
    SpectralField d(f.N());
    for (int n = -f.N(); n <= f.N(); ++n) d.at(n) = cplx(0.0, static_cast<double>(n)) * f.coeff(n);
    return d;
}

std::vector<Vec3> synthesize(const std::array<SpectralField, 3>& s, size_t M) {
    const GridField a = from_spectral(s[0], M);
    const GridField b = from_spectral(s[1], M);
    const GridField c = from_spectral(s[2], M);
    std::vector<Vec3> out(M);
    for (size_t j = 0; j < M; ++j)
        out[j] = {std::real(a.v[j]), std::real(b.v[j]), std::real(c.v[j])};
    return out;
}

Vec3 grid_mean(const std::vector<Vec3>& u) {
    Vec3 s;
    for (const Vec3& v : u) s += v;
    return (1.0 / static_cast<double>(u.size())) * s;
}

void check_seed(const Vec3& e_seed, const Vec3& u00) {
    if (std::abs(norm(e_seed) - 1.0) > 1e-10)
        throw SpecError("parallel_frame: seed must be a unit vector");
    if (std::abs(dot(e_seed, u00)) > 1e-10)
        throw SpecError("parallel_frame: seed must be perpendicular to u(0)");
}

}  // namespace

SphereCurve equator(size_t M) {
    SphereCurve c;
    c.u.resize(M);
    for (size_t j = 0; j < M; ++j) {
        const double x = two_pi * static_cast<double>(j) / static_cast<double>(M);
        c.u[j] = {std::cos(x), std::sin(x), 0.0};
    }
    return c;
}

SphereCurve latitude_circle(size_t M, double alpha) {
    const double sa = std::sin(alpha), ca = std::cos(alpha);
    SphereCurve c;
    c.u.resize(M);
    for (size_t j = 0; j < M; ++j) {
        const double x = two_pi * static_cast<double>(j) / static_cast<double>(M);
        c.u[j] = {sa * std::cos(x), sa * std::sin(x), ca};
    }
    return c;
}

SphereCurve reversed(const SphereCurve& c) {
    const size_t M = c.M();
    SphereCurve r;
    r.u.resize(M);
    for (size_t j = 0; j < M; ++j) r.u[j] = c.u[(M - j) % M];
    return r;
}

FrameTransport parallel_frame(const SphereCurve& u0, const Vec3& e_seed) {
    check_curve(u0);
    check_seed(e_seed, u0.u[0]);
    const size_t M = u0.M();
    const auto s = curve_spectrum(u0.u);
    const std::array<SpectralField, 3> ds = {x_derivative(s[0]), x_derivative(s[1]),
                                             x_derivative(s[2])};
    // stage values at half-grid points from 2M-point spectral refinement
    const std::vector<Vec3> ur = synthesize(s, 2 * M);
    const std::vector<Vec3> uxr = synthesize(ds, 2 * M);
    const double h = two_pi / static_cast<double>(M);

    FrameTransport out;
    out.e.resize(M);
    Vec3 e = e_seed;
    const auto slope = [&](size_t idx, const Vec3& ev) {
        return -dot(uxr[idx], ev) * ur[idx];
    };
    for (size_t j = 0; j < M; ++j) {
        out.e[j] = e;
        const size_t i0 = 2 * j, i1 = 2 * j + 1, i2 = (2 * j + 2) % (2 * M);
        const Vec3 k1 = slope(i0, e);
        const Vec3 k2 = slope(i1, e + (0.5 * h) * k1);
        const Vec3 k3 = slope(i1, e + (0.5 * h) * k2);
        const Vec3 k4 = slope(i2, e + h * k3);
        e += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const Vec3& un = u0.u[(j + 1) % M];
        e -= dot(e, un) * un;
        e = normalized(e);
    }
    out.e_end = e;
    return out;
}

double holonomy(const SphereCurve& u0) {
    check_curve(u0);
    const Vec3 u00 = u0.u[0];
    const Vec3 v = (std::abs(u00.z) < 0.9) ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
    const Vec3 e0 = normalized(v - dot(v, u00) * u00);
    const FrameTransport ft = parallel_frame(u0, e0);
    const Vec3 f0 = cross(u00, e0);
    return std::atan2(dot(ft.e_end, f0), dot(ft.e_end, e0));
}

SpectralField hasimoto_extract(const SphereCurve& u0, const std::vector<Vec3>& e) {
    check_curve(u0);
    const size_t M = u0.M();
    if (e.size() != M) throw SpecError("hasimoto_extract: frame size mismatch");
    const auto s = curve_spectrum(u0.u);
    const std::vector<Vec3> ux =
        synthesize({x_derivative(s[0]), x_derivative(s[1]), x_derivative(s[2])}, M);
    GridField q(M);
    for (size_t j = 0; j < M; ++j)
        q.v[j] = cplx(dot(ux[j], e[j]), dot(ux[j], cross(u0.u[j], e[j])));
    return to_spectral(q);
}

SphereFrameState hasimoto_state(const SphereCurve& u0, const Vec3& e_seed) {
    SphereFrameState st;
    st.u = u0;
    st.e = parallel_frame(u0, e_seed).e;
    st.q = hasimoto_extract(u0, st.e);
    st.t = 0;
    return st;
}

namespace {

// one Strang step of i q_t + q_xx + (1/2)|q|^2 q = 0 over dtq, with the
// half-phase array and grid buffer cached by the caller
void strang_substep(SpectralField& q, double dtq, const std::vector<cplx>& half,
                    std::vector<cplx>& buf, int cut) {
    const int N = q.N();
    const size_t Mnl = buf.size();
    for (size_t i = 0; i < q.data().size(); ++i) q.data()[i] *= half[i];
    std::fill(buf.begin(), buf.end(), cplx(0.0, 0.0));
    for (int n = -N; n <= N; ++n)
        buf[static_cast<size_t>((n + static_cast<int>(Mnl)) % static_cast<int>(Mnl))] = q.coeff(n);
    ifft_unscaled(buf);
    for (cplx& v : buf) {
        const double a2 = std::norm(v);
        if (a2 > 1e12) throw InvariantViolation("sm_evolve: frame flow amplitude blow-up");
        v *= std::polar(1.0, 0.5 * a2 * dtq);
    }
    fft(buf);
    const double inv = 1.0 / static_cast<double>(Mnl);
    for (int n = -N; n <= N; ++n) {
        const size_t idx = static_cast<size_t>((n + static_cast<int>(Mnl)) % static_cast<int>(Mnl));
        q.at(n) = std::abs(n) > cut ? cplx(0.0, 0.0) : buf[idx] * inv;
    }
    for (size_t i = 0; i < q.data().size(); ++i) q.data()[i] *= half[i];
}

struct StageData {
    std::vector<cplx> p;       // (i dx q) on the grid
    std::vector<double> q2;    // |q|^2 on the grid
};

StageData stage_data(const SpectralField& q, size_t M) {
    StageData sd;
    SpectralField ph(q.N());
    for (int n = -q.N(); n <= q.N(); ++n) ph.at(n) = -static_cast<double>(n) * q.coeff(n);
    sd.p = from_spectral(ph, M).v;
    const GridField qa = from_spectral(q, M);
    sd.q2.resize(M);
    for (size_t j = 0; j < M; ++j) sd.q2[j] = std::norm(qa.v[j]);
    return sd;
}

double h1_energy(const std::array<SpectralField, 3>& s) {
    double acc = 0;
    for (const SpectralField& f : s)
        for (int n = -f.N(); n <= f.N(); ++n)
            acc += static_cast<double>(n) * n * std::norm(f.coeff(n));
    return two_pi * acc;
}

}  // namespace

SphereFrameState sm_evolve(const SphereFrameState& s0, double dt, double t_end,
                           SmInvariantReport* report) {
    if (!(dt > 0)) throw SpecError("sm_evolve: dt must be positive");
    if (t_end < s0.t) throw SpecError("sm_evolve: t_end precedes the state time");
    check_curve(s0.u);
    const size_t M = s0.u.M();
    if (s0.e.size() != M) throw SpecError("sm_evolve: frame size mismatch");
    for (size_t j = 0; j < M; ++j) {
        if (std::abs(norm(s0.e[j]) - 1.0) > 1e-8)
            throw SpecError("sm_evolve: frame must be unit length (1e-8)");
        if (std::abs(dot(s0.e[j], s0.u.u[j])) > 1e-8)
            throw SpecError("sm_evolve: frame must be tangent (u.e = 0 to 1e-8)");
    }
    const double mean0 = norm(grid_mean(s0.u.u));
    if (mean0 > 1e-6) throw SpecError("sm_evolve: initial curve must be mean-zero (1e-6)");
    if (std::abs(holonomy(s0.u)) > 1e-6)
        throw SpecError("sm_evolve: initial curve must have identity holonomy (1e-6)");
    const int Nq = static_cast<int>(M) / 2 - 1;
    SpectralField q = resized(s0.q, Nq);
    {
        const SpectralField qx = hasimoto_extract(s0.u, s0.e);
        double d2 = 0;
        for (int n = -Nq; n <= Nq; ++n) d2 += std::norm(q.coeff(n) - qx.coeff(n));
        if (std::sqrt(two_pi * d2) > 1e-6 * (1.0 + l2_function_norm(q)))
            throw SpecError("sm_evolve: q inconsistent with the frame coordinates of u_x");
    }

    SphereFrameState st;
    st.u = s0.u;
    st.e = s0.e;
    st.t = s0.t;

    const double span = t_end - s0.t;
    const auto steps =
        (span == 0.0) ? 0LL : static_cast<long long>(std::max(1.0, std::ceil(span / dt)));
    const double dte = (steps > 0) ? span / static_cast<double>(steps) : 0.0;
    const double dtq = 0.5 * dte;

    const int cut = (2 * Nq) / 3;
    for (int n = -Nq; n <= Nq; ++n)
        if (std::abs(n) > cut) q.at(n) = 0;

    std::vector<cplx> half(2 * static_cast<size_t>(Nq) + 1);
    for (int n = -Nq; n <= Nq; ++n)
        half[static_cast<size_t>(n + Nq)] =
            std::polar(1.0, -0.5 * dtq * static_cast<double>(n) * static_cast<double>(n));
    std::vector<cplx> buf(next_pow2(4 * static_cast<size_t>(Nq) + 4));

    SmInvariantReport rep;
    rep.steps = steps;
    rep.dt_effective = dte;
    rep.mean_defect = mean0;
    const double mean_abort = std::max(1e-7, 10.0 * mean0);
    // Frame residuals and the curvature correspondence carry an O(dt^2)
    // discretization allowance on top of 10x their initial size.
    double resid0 = 0;
    const auto resid_abort = [&] { return 10.0 * resid0 + 1e4 * dte * dte; };

    const auto fft_checks = [&](double elapsed) {
        const auto s = curve_spectrum(st.u.u);
        const double h1 = h1_energy(s);
        const double mass = two_pi * l2_sq(q);
        if (rep.h1_initial == 0 && elapsed == 0) {
            rep.h1_initial = h1;
            rep.mass_initial = mass;
        }
        rep.h1_final = h1;
        rep.mass_final = mass;
        if (elapsed > 0) {
            const double h1d = std::abs(h1 - rep.h1_initial) /
                               (std::max(rep.h1_initial, 1e-300) * elapsed);
            const double md = std::abs(mass - rep.mass_initial) /
                              (std::max(rep.mass_initial, 1e-300) * elapsed);
            rep.h1_drift_per_time = std::max(rep.h1_drift_per_time, h1d);
            rep.mass_drift_per_time = std::max(rep.mass_drift_per_time, md);
            if (h1d > 1e-3)
                throw InvariantViolation("sm_evolve: H1 norm drift exceeded 10x tolerance");
            if (md > 1e-9)
                throw InvariantViolation("sm_evolve: mass drift exceeded 10x tolerance");
        }
        const std::vector<Vec3> ux =
            synthesize({x_derivative(s[0]), x_derivative(s[1]), x_derivative(s[2])}, M);
        const auto se = curve_spectrum(st.e);
        const std::vector<Vec3> ex =
            synthesize({x_derivative(se[0]), x_derivative(se[1]), x_derivative(se[2])}, M);
        const GridField qg = from_spectral(q, M);
        double cdef = 0, fres = 0, gres = 0;
        for (size_t j = 0; j < M; ++j) {
            const double q1 = std::real(qg.v[j]), q2 = std::imag(qg.v[j]);
            cdef = std::max(cdef, std::abs(norm(ux[j]) - std::abs(qg.v[j])));
            const Vec3 f =
                ux[j] - q1 * st.e[j] - q2 * cross(st.u.u[j], st.e[j]);
            const Vec3 g = ex[j] + q1 * st.u.u[j];
            fres = std::max(fres, norm(f));
            gres = std::max(gres, norm(g));
        }
        rep.curvature_defect = std::max(rep.curvature_defect, cdef);
        rep.frame_residual_f = std::max(rep.frame_residual_f, fres);
        rep.frame_residual_g = std::max(rep.frame_residual_g, gres);
        if (elapsed == 0) resid0 = std::max({cdef, fres, gres});
        if (cdef > resid_abort())
            throw InvariantViolation("sm_evolve: curvature correspondence broke tolerance");
        if (fres > resid_abort() || gres > resid_abort())
            throw InvariantViolation("sm_evolve: frame residual exceeded tolerance");
    };
    fft_checks(0.0);

    std::vector<Vec3> ku(M), ke(M), u1(M), e1(M), au(M), ae(M);
    for (long long s = 0; s < steps; ++s) {
        const StageData d0 = stage_data(q, M);
        SpectralField qm = q;
        strang_substep(qm, dtq, half, buf, cut);
        const StageData dm = stage_data(qm, M);
        SpectralField qe = qm;
        strang_substep(qe, dtq, half, buf, cut);
        const StageData de = stage_data(qe, M);

        const auto accumulate = [&](const std::vector<Vec3>& U, const std::vector<Vec3>& E,
                                    const StageData& sd, double wk, double wnext,
                                    bool seed_next) {
            for (size_t j = 0; j < M; ++j) {
                const Vec3 f = cross(U[j], E[j]);
                const double p1 = std::real(sd.p[j]), p2 = std::imag(sd.p[j]);
                ku[j] = p1 * E[j] + p2 * f;
                ke[j] = -p1 * U[j] - 0.5 * sd.q2[j] * f;
                au[j] += wk * ku[j];
                ae[j] += wk * ke[j];
                if (seed_next) {
                    u1[j] = st.u.u[j] + wnext * ku[j];
                    e1[j] = st.e[j] + wnext * ke[j];
                }
            }
        };
        std::fill(au.begin(), au.end(), Vec3{});
        std::fill(ae.begin(), ae.end(), Vec3{});
        accumulate(st.u.u, st.e, d0, dte / 6.0, 0.5 * dte, true);
        accumulate(u1, e1, dm, dte / 3.0, 0.5 * dte, true);
        accumulate(u1, e1, dm, dte / 3.0, dte, true);
        accumulate(u1, e1, de, dte / 6.0, 0.0, false);

        double udef = 0, edef = 0, odef = 0;
        for (size_t j = 0; j < M; ++j) {
            const Vec3 un = normalized(st.u.u[j] + au[j]);
            Vec3 en = st.e[j] + ae[j];
            en -= dot(en, un) * un;
            en = normalized(en);
            st.u.u[j] = un;
            st.e[j] = en;
            udef = std::max(udef, std::abs(norm(un) - 1.0));
            edef = std::max(edef, std::abs(norm(en) - 1.0));
            odef = std::max(odef, std::abs(dot(un, en)));
        }
        rep.unit_u_defect = std::max(rep.unit_u_defect, udef);
        rep.unit_e_defect = std::max(rep.unit_e_defect, edef);
        rep.orth_defect = std::max(rep.orth_defect, odef);
        if (udef > 1e-7 || edef > 1e-7 || odef > 1e-7)
            throw InvariantViolation("sm_evolve: orthonormality drift exceeded 10x tolerance");
        const double mdef = norm(grid_mean(st.u.u));
        rep.mean_defect = std::max(rep.mean_defect, mdef);
        if (mdef > mean_abort)
            throw InvariantViolation("sm_evolve: mean-zero drift exceeded 10x tolerance");

        q = qe;
        st.t = s0.t + static_cast<double>(s + 1) * dte;
        if ((s + 1) % 25 == 0 || s + 1 == steps) fft_checks(st.t - s0.t);
    }
    st.q = q;
    if (report) *report = rep;
    return st;
}

SphereCurve planar_curve_from_curvature(const StepFunction& kappa, int mollify_width,
                                        size_t M) {
    if (M < 8 || !is_pow2(M))
        throw SpecError("planar_curve_from_curvature: M must be a power of two >= 8");
    if (mollify_width < 0) throw SpecError("planar_curve_from_curvature: negative width");
    for (const StepPiece& p : kappa.pieces())
        if (std::abs(std::imag(p.c)) > 1e-13)
            throw SpecError("planar_curve_from_curvature: curvature must be real");
    if (std::abs(kappa.mean() - 1.0) > 1e-12)
        throw SpecError("planar_curve_from_curvature: curvature must have mean 1");
    // 2 pi/3 periodicity forces closure (three arcs rotated by 2 pi/3 each)
    const StepFunction shifted = kappa.translated(PiRational(2, 3));
    for (const StepFunction* f : {&kappa, &shifted})
        for (const StepPiece& p : f->pieces())
            for (const PiRational& r : {p.a, p.b})
                if (std::abs(kappa.eval(r) - shifted.eval(r)) > 1e-13)
                    throw SpecError(
                        "planar_curve_from_curvature: curvature must be 2*pi/3-periodic");

    std::vector<double> theta(M);
    if (mollify_width > 0) {
        const int N = static_cast<int>(M) / 2 - 1;
        const SpectralField kh = step_fourier(kappa, N);
        SpectralField psi(N);
        for (int n = -N; n <= N; ++n) {
            if (n == 0) continue;
            const double w =
                std::max(0.0, 1.0 - std::abs(n) / static_cast<double>(mollify_width));
            psi.at(n) = w * kh.coeff(n) / cplx(0.0, static_cast<double>(n));
        }
        const GridField pg = from_spectral(psi, M);
        for (size_t j = 0; j < M; ++j)
            theta[j] = two_pi * static_cast<double>(j) / static_cast<double>(M) +
                       std::real(pg.v[j]) - std::real(pg.v[0]);
    } else {
        // exact running integral of the step profile
        const auto& pieces = kappa.pieces();
        size_t i = 0;
        double cum = 0;  // integral up to pieces[i].a
        for (size_t j = 0; j < M; ++j) {
            const double x = two_pi * static_cast<double>(j) / static_cast<double>(M);
            while (i + 1 < pieces.size() && pieces[i + 1].a.radians() <= x) {
                cum += std::real(pieces[i].c) *
                       (pieces[i].b.radians() - pieces[i].a.radians());
                ++i;
            }
            // clamp to the piece end so gaps (zero level) contribute nothing
            const double span =
                std::min(x, pieces[i].b.radians()) - pieces[i].a.radians();
            theta[j] = cum + std::real(pieces[i].c) * std::max(0.0, span);
        }
    }
    SphereCurve c;
    c.u.resize(M);
    for (size_t j = 0; j < M; ++j) c.u[j] = {std::cos(theta[j]), std::sin(theta[j]), 0.0};
    return c;
}

std::vector<Filament> vfe_reconstruct(const std::vector<SphereFrameState>& history,
                                      const Vec3& gamma0) {
    if (history.empty()) throw SpecError("vfe_reconstruct: empty history");
    const size_t M = history.front().u.M();
    const size_t K = history.size();
    for (const SphereFrameState& st : history) {
        check_curve(st.u);
        if (st.u.M() != M) throw SpecError("vfe_reconstruct: mixed grid sizes");
    }
    double dt0 = 0;
    for (size_t i = 1; i < K; ++i) {
        const double d = history[i].t - history[i - 1].t;
        if (i == 1) dt0 = d;
        if (!(d > 0) || std::abs(d - dt0) > 1e-9 * std::max(1.0, std::abs(dt0)))
            throw SpecError("vfe_reconstruct: history must be uniformly spaced in time");
    }

    // basepoint velocity samples f_i = (u x u_x)(0, t_i)
    std::vector<Vec3> f(K);
    std::vector<std::array<SpectralField, 3>> spectra;
    spectra.reserve(K);
    for (size_t i = 0; i < K; ++i) {
        spectra.push_back(curve_spectrum(history[i].u.u));
        const auto& s = spectra.back();
        const Vec3 m{std::real(s[0].coeff(0)), std::real(s[1].coeff(0)),
                     std::real(s[2].coeff(0))};
        if (norm(m) > 1e-6)
            throw SpecError("vfe_reconstruct: curve must be mean-zero (1e-6)");
        const std::vector<Vec3> ux =
            synthesize({x_derivative(s[0]), x_derivative(s[1]), x_derivative(s[2])}, M);
        f[i] = cross(history[i].u.u[0], ux[0]);
    }
    // cumulative 4th-order quadrature: Simpson pairs with a one-sided start
    std::vector<Vec3> cum(K);
    if (K >= 2) {
        if (K == 2)
            cum[1] = (0.5 * dt0) * (f[0] + f[1]);
        else
            cum[1] = (dt0 / 12.0) * (5.0 * f[0] + 8.0 * f[1] - f[2]);
        for (size_t i = 2; i < K; ++i)
            cum[i] = cum[i - 2] + (dt0 / 3.0) * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
    }

    std::vector<Filament> out(K);
    for (size_t i = 0; i < K; ++i) {
        const auto& s = spectra[i];
        const Vec3 m{std::real(s[0].coeff(0)), std::real(s[1].coeff(0)),
                     std::real(s[2].coeff(0))};
        std::array<SpectralField, 3> anti = {SpectralField(s[0].N()), SpectralField(s[1].N()),
                                             SpectralField(s[2].N())};
        for (int cidx = 0; cidx < 3; ++cidx)
            for (int n = -s[cidx].N(); n <= s[cidx].N(); ++n)
                if (n != 0)
                    anti[static_cast<size_t>(cidx)].at(n) =
                        s[static_cast<size_t>(cidx)].coeff(n) / cplx(0.0, static_cast<double>(n));
        const std::vector<Vec3> psi = synthesize(anti, M);
        const std::vector<Vec3> gx = synthesize(s, M);

        Filament& fil = out[i];
        fil.t = history[i].t;
        fil.basepoint = gamma0 + cum[i];
        fil.gamma.resize(M);
        for (size_t j = 0; j < M; ++j) {
            const double x = two_pi * static_cast<double>(j) / static_cast<double>(M);
            fil.gamma[j] = fil.basepoint + x * m + (psi[j] - psi[0]);
            fil.unit_speed_defect =
                std::max(fil.unit_speed_defect, std::abs(norm(gx[j]) - 1.0));
        }
        fil.closure_defect = two_pi * norm(m);
    }
    return out;
}

}  // namespace dq
