#pragma once

#include <optional>
#include <vector>

#include "dq/pi_rational.hpp"
#include "dq/spectral.hpp"

namespace dq {

// Piecewise-constant 2pi-periodic data g = sum_l c_l chi_[a_l, b_l) with exact
// rational-multiple-of-pi endpoints. Gaps between pieces mean g = 0 there.
struct StepPiece {
    PiRational a, b;
    cplx c;
};

class StepFunction {
  public:
    StepFunction() = default;
    explicit StepFunction(std::vector<StepPiece> pieces);

    const std::vector<StepPiece>& pieces() const { return pieces_; }
    bool empty() const { return pieces_.empty(); }

    // exact evaluation at a rational angle (reduced mod 2pi)
    cplx eval(const PiRational& x) const;
    cplx eval(double x) const;  // floating fallback, half-open pieces

    cplx mean() const;         // (1/2pi) integral
    double total_variation() const;

    // jump locations y_j (sorted, unique) with jump sizes delta_j = g(y_j+) - g(y_j-)
    struct Jump {
        PiRational y;
        cplx delta;
    };
    std::vector<Jump> jumps() const;

    // least K >= 1 with K*a_l = K*b_l = 0 (mod 2pi) for every endpoint
    long long revival_index() const;

    // g(x - shift), endpoints re-normalized into [0, 2pi)
    StepFunction translated(const PiRational& shift) const;

    // covers [0,2pi) with explicit (possibly zero-level) pieces; used where
    // the level list must tile the circle
    StepFunction with_gaps_filled() const;

    // merge touching pieces with equal levels, drop zero levels
    StepFunction simplified(double level_tol = 0.0) const;

    // true when the pieces tile [0,2pi) and cyclically adjacent levels differ
    bool has_distinct_adjacent_levels(double tol = 1e-12) const;

  private:
    std::vector<StepPiece> pieces_;  // sorted, disjoint, within [0, 2pi)
};

// Exact Fourier coefficients:
//   g^(0) = (1/2pi) sum_l c_l (b_l - a_l)
//   g^(n) = (i/2pi) sum_l c_l (e^{-i n b_l} - e^{-i n a_l}) / n
SpectralField step_fourier(const StepFunction& g, int N);

// e^{-i n theta} for theta = p*pi/q, phase from the exact residue n*p mod 2q
cplx unit_phase_neg(long long n, const PiRational& theta);

// canonical indicator data chi_[0,pi) shifted by -c
StepFunction step_indicator_half(double c = 0.0);

// unit-mean square wave 1 +/- amplitude with three periods over [0, 2pi);
// the canonical 2pi/3-periodic curvature profile for planar closed curves
StepFunction square_wave_profile(double amplitude = 0.3);

// linear combination sum_r w_r g(x - shift_r), returned in canonical piece form
StepFunction combine_translates(const StepFunction& g, const std::vector<cplx>& weights,
                                const std::vector<PiRational>& shifts, double level_tol = 1e-13);

}  // namespace dq
