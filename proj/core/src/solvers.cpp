#include "dq/solvers.hpp"

#include <algorithm>
#include <cmath>

#include "dq/fft.hpp"
#include "dq/propagator.hpp"

namespace dq {

namespace {
using u128 = unsigned __int128;

void check_nls_params(const NlsParams& p) {
    if (!(p.dt > 0)) throw SpecError("nls_evolve: dt must be positive");
    if (p.N < 2 || !is_pow2(p.N)) throw SpecError("nls_evolve: N must be a power of two");
}

void apply_dealias_mask(SpectralField& c) {
    const int cut = (2 * c.N()) / 3;
    for (int n = -c.N(); n <= c.N(); ++n)
        if (std::abs(n) > cut) c.at(n) = 0;
}

// pad band coefficients into an M-point synthesis buffer
void pad_into(const SpectralField& c, std::vector<cplx>& buf) {
    const size_t M = buf.size();
    std::fill(buf.begin(), buf.end(), cplx(0.0, 0.0));
    const int N = c.N();
    for (int n = -N; n <= N; ++n)
        buf[static_cast<size_t>((n + static_cast<int>(M)) % static_cast<int>(M))] = c.coeff(n);
}

double grid_quartic_integral(const SpectralField& c, size_t M) {
    std::vector<cplx> buf(M);
    pad_into(c, buf);
    ifft_unscaled(buf);
    double s = 0;
    for (const cplx& v : buf) {
        const double a2 = std::norm(v);
        s += a2 * a2;
    }
    return two_pi * s / static_cast<double>(M);
}

double nls_energy(const SpectralField& c, double lambda, size_t M) {
    double grad = 0;
    for (int n = -c.N(); n <= c.N(); ++n)
        grad += static_cast<double>(n) * n * std::norm(c.coeff(n));
    return two_pi * grad - 0.5 * lambda * grid_quartic_integral(c, M);
}

double rel_drift(double initial, double final_v, double t, double floor_scale) {
    if (t <= 0) return 0.0;
    return std::abs(final_v - initial) / (std::max(std::abs(initial), floor_scale) * t);
}
}  // namespace

SpectralField nls_evolve(const SpectralField& q0, const NlsParams& p, double t,
                         ConservationReport* report) {
    check_nls_params(p);
    if (t < 0) {
        // time reversal: conj(q)(t) solves the same equation backwards
        return conjugated(nls_evolve(conjugated(q0), p, -t, report));
    }
    const int N = p.N;
    SpectralField c = resized(q0, N);
    if (p.dealias) apply_dealias_mask(c);
    const size_t Mnl = 4 * static_cast<size_t>(N);

    if (p.lambda == 0.0 || t == 0.0) {
        SpectralField out = (t == 0.0) ? c : evolve_linear(c, DispersionLaw(2), t);
        if (report) {
            report->mass_initial = two_pi * l2_sq(c);
            report->mass_final = two_pi * l2_sq(out);
            report->mass_drift_per_time = rel_drift(report->mass_initial, report->mass_final, t, 1e-300);
            report->energy_initial = nls_energy(c, p.lambda, Mnl);
            report->energy_final = nls_energy(out, p.lambda, Mnl);
            report->energy_drift_per_time =
                rel_drift(report->energy_initial, report->energy_final, t, 1.0);
            std::vector<cplx> buf(Mnl);
            pad_into(out, buf);
            ifft_unscaled(buf);
            for (const cplx& v : buf) report->sup_abs = std::max(report->sup_abs, std::abs(v));
            report->steps = 0;
            report->dt_effective = 0;
        }
        return out;
    }

    const auto steps = static_cast<long long>(std::max(1.0, std::ceil(t / p.dt)));
    const double dt = t / static_cast<double>(steps);

    const double mass_i = two_pi * l2_sq(c);
    const double energy_i = (report != nullptr) ? nls_energy(c, p.lambda, Mnl) : 0.0;

    std::vector<cplx> half(2 * static_cast<size_t>(N) + 1);
    for (int n = -N; n <= N; ++n)
        half[static_cast<size_t>(n + N)] =
            std::polar(1.0, -0.5 * dt * static_cast<double>(n) * static_cast<double>(n));

    std::vector<cplx> buf(Mnl);
    const int cut = (2 * N) / 3;
    double sup_seen = 0;
    for (long long s = 0; s < steps; ++s) {
        for (size_t i = 0; i < c.data().size(); ++i) c.data()[i] *= half[i];
        pad_into(c, buf);
        ifft_unscaled(buf);
        double sup = 0;
        for (cplx& v : buf) sup = std::max(sup, std::abs(v));
        sup_seen = std::max(sup_seen, sup);
        if (sup > 1e6)
            throw InvariantViolation("nls_evolve: amplitude blow-up (sup|u| > 1e6) at step " +
                                     std::to_string(s));
        for (cplx& v : buf) v *= std::polar(1.0, p.lambda * std::norm(v) * dt);
        fft(buf);
        const double inv = 1.0 / static_cast<double>(Mnl);
        for (int n = -N; n <= N; ++n) {
            const size_t idx =
                static_cast<size_t>((n + static_cast<int>(Mnl)) % static_cast<int>(Mnl));
            c.at(n) = buf[idx] * inv;
        }
        if (p.dealias)
            for (int n = -N; n <= N; ++n)
                if (std::abs(n) > cut) c.at(n) = 0;
        for (size_t i = 0; i < c.data().size(); ++i) c.data()[i] *= half[i];
    }

    if (report) {
        report->mass_initial = mass_i;
        report->mass_final = two_pi * l2_sq(c);
        report->mass_drift_per_time = rel_drift(mass_i, report->mass_final, t, 1e-300);
        report->energy_initial = energy_i;
        report->energy_final = nls_energy(c, p.lambda, Mnl);
        report->energy_drift_per_time = rel_drift(energy_i, report->energy_final, t, 1.0);
        report->sup_abs = sup_seen;
        report->steps = steps;
        report->dt_effective = dt;
    }
    return c;
}

SpectralField kdv_evolve(const SpectralField& u0, int N, double dt, double t,
                         KdvReport* report) {
    if (N < 4 || !is_pow2(N)) throw SpecError("kdv_evolve: N must be a power of two >= 4");
    if (!(dt > 0)) throw SpecError("kdv_evolve: dt must be positive");
    if (t < 0) throw SpecError("kdv_evolve: negative time not supported");
    if (conjugate_symmetry_defect(u0) > 1e-8)
        throw SpecError("kdv_evolve: real-valued data required");

    SpectralField w = resized(u0, N);  // w_n = e^{-i n^3 tau} u_hat_n, tau = 0
    const size_t Mq = 4 * static_cast<size_t>(N);
    const double mom_i = two_pi * l2_sq(w);

    // F(w, tau)_n = -(i n / 2) e^{-i n^3 tau} ((u^2)^)_n with u from e^{+i n^3 tau} w
    std::vector<cplx> buf(Mq);
    const auto rhs = [&](const SpectralField& win, double tau) {
        const ExactPhase ph(tau / two_pi);
        std::vector<cplx> phase(static_cast<size_t>(N) + 1);
        phase[0] = 1.0;
        for (int n = 1; n <= N; ++n)
            phase[static_cast<size_t>(n)] = std::polar(
                1.0, two_pi * ph.frac_times(pow_wrap_u128(static_cast<u128>(n), 3)));
        SpectralField uh(N);
        for (int n = -N; n <= N; ++n) {
            const cplx e = n >= 0 ? phase[static_cast<size_t>(n)]
                                  : std::conj(phase[static_cast<size_t>(-n)]);
            uh.at(n) = e * win.coeff(n);
        }
        pad_into(uh, buf);
        ifft_unscaled(buf);
        double sup = 0;
        for (cplx& v : buf) {
            sup = std::max(sup, std::abs(v));
            v *= v;
        }
        if (sup > 1e6) throw InvariantViolation("kdv_evolve: amplitude blow-up (sup|u| > 1e6)");
        fft(buf);
        const double inv = 1.0 / static_cast<double>(Mq);
        SpectralField out(N);
        for (int n = -N; n <= N; ++n) {
            const size_t idx =
                static_cast<size_t>((n + static_cast<int>(Mq)) % static_cast<int>(Mq));
            const cplx e = n >= 0 ? phase[static_cast<size_t>(n)]
                                  : std::conj(phase[static_cast<size_t>(-n)]);
            out.at(n) = cplx(0.0, -0.5 * static_cast<double>(n)) * std::conj(e) *
                        (buf[idx] * inv);
        }
        return out;
    };

    const auto steps =
        (t == 0.0) ? 0LL : static_cast<long long>(std::max(1.0, std::ceil(t / dt)));
    const double dte = (steps > 0) ? t / static_cast<double>(steps) : 0.0;
    const size_t L = w.data().size();
    for (long long s = 0; s < steps; ++s) {
        const double tau = static_cast<double>(s) * dte;
        const SpectralField k1 = rhs(w, tau);
        SpectralField tmp(N);
        for (size_t i = 0; i < L; ++i) tmp.data()[i] = w.data()[i] + 0.5 * dte * k1.data()[i];
        const SpectralField k2 = rhs(tmp, tau + 0.5 * dte);
        for (size_t i = 0; i < L; ++i) tmp.data()[i] = w.data()[i] + 0.5 * dte * k2.data()[i];
        const SpectralField k3 = rhs(tmp, tau + 0.5 * dte);
        for (size_t i = 0; i < L; ++i) tmp.data()[i] = w.data()[i] + dte * k3.data()[i];
        const SpectralField k4 = rhs(tmp, tau + dte);
        for (size_t i = 0; i < L; ++i)
            w.data()[i] += (dte / 6.0) * (k1.data()[i] + 2.0 * k2.data()[i] +
                                          2.0 * k3.data()[i] + k4.data()[i]);
    }

    // undo the integrating factor at the final time
    SpectralField out(N);
    const ExactPhase ph(t / two_pi);
    for (int n = -N; n <= N; ++n) {
        const int an = n >= 0 ? n : -n;
        const double fr = ph.frac_times(pow_wrap_u128(static_cast<u128>(an), 3));
        const cplx e = n >= 0 ? std::polar(1.0, two_pi * fr) : std::polar(1.0, -two_pi * fr);
        out.at(n) = e * w.coeff(n);
    }
    if (report) {
        report->mean_initial = two_pi * std::real(u0.coeff(0));
        report->mean_final = two_pi * std::real(out.coeff(0));
        report->momentum_initial = mom_i;
        report->momentum_final = two_pi * l2_sq(out);
        report->momentum_drift_per_time = rel_drift(mom_i, report->momentum_final, t, 1e-300);
        report->steps = steps;
        report->dt_effective = dte;
    }
    return out;
}

SmoothingReport smoothing_probe(const StepFunction& g, double lambda, double t,
                                const std::vector<double>& s_probe,
                                const SmoothingOptions& opts) {
    SpectralField q0 = step_fourier(g, opts.N);
    if (opts.dealias) apply_dealias_mask(q0);

    NlsParams p;
    p.lambda = lambda;
    p.N = opts.N;
    p.dt = opts.dt;
    p.dealias = opts.dealias;
    const SpectralField qn = nls_evolve(q0, p, t);
    const SpectralField lin = evolve_linear(q0, DispersionLaw(2), t);

    SmoothingReport rep;
    rep.mu = 2.0 * lambda * l2_sq(q0);
    const cplx gauge = std::polar(1.0, -rep.mu * t);
    SpectralField D(opts.N);
    for (int n = -opts.N; n <= opts.N; ++n) D.at(n) = gauge * qn.coeff(n) - lin.coeff(n);

    rep.blocks_linear = lp_blocks(lin);
    rep.blocks_duhamel = lp_blocks(D);
    rep.j_lo = opts.j_lo;
    // fit ceiling: stay below the split-step resonance ring |n| ~ sqrt(2 pi/dt)
    const int cap = static_cast<int>(std::floor(std::log2(0.8 * std::sqrt(two_pi / opts.dt))));
    rep.j_hi = (opts.j_hi >= 0) ? opts.j_hi : std::min(rep.blocks_linear.j_top - 2, cap);

    const bool trivial = (t == 0.0) || (lambda == 0.0);
    if (!trivial) {
        rep.beta_linear = besov_exponent(rep.blocks_linear, LpKind::L2, rep.j_lo, rep.j_hi);
        rep.beta_duhamel = besov_exponent(rep.blocks_duhamel, LpKind::L2, rep.j_lo, rep.j_hi);
        rep.gap = rep.beta_duhamel - rep.beta_linear;
    }
    rep.s_probe = s_probe;
    for (const double s : s_probe) {
        rep.hs_linear.push_back(sobolev_norm(lin, s));
        rep.hs_duhamel.push_back(sobolev_norm(D, s));
    }
    return rep;
}

}  // namespace dq
