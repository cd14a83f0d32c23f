#include "dq/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace dq {

cplx unit_phase_neg(long long n, const PiRational& theta) {
    const long long q = theta.den;
    long long r = (n % (2 * q)) * (theta.num % (2 * q)) % (2 * q);
    if (r < 0) r += 2 * q;
    return std::polar(1.0, -pi * static_cast<double>(r) / static_cast<double>(q));
}

StepFunction::StepFunction(std::vector<StepPiece> pieces) : pieces_(std::move(pieces)) {
    for (auto& p : pieces_) {
        p.a = p.a.normalized();
        // right endpoint may be exactly 2pi
        long long r = p.b.num % (2 * p.b.den);
        if (r < 0) r += 2 * p.b.den;
        if (r == 0 && p.b.num != 0) p.b = pr_two_pi();
        else p.b = PiRational(r, p.b.den);
        if (!(p.a < p.b)) throw SpecError("StepFunction: empty or inverted piece");
    }
    std::sort(pieces_.begin(), pieces_.end(),
              [](const StepPiece& x, const StepPiece& y) { return x.a < y.a; });
    for (size_t i = 0; i + 1 < pieces_.size(); ++i)
        if (pieces_[i + 1].a < pieces_[i].b) throw SpecError("StepFunction: overlapping pieces");
}

cplx StepFunction::eval(const PiRational& x) const {
    const PiRational xn = x.normalized();
    for (const auto& p : pieces_)
        if (p.a <= xn && xn < p.b) return p.c;
    return 0.0;
}

cplx StepFunction::eval(double x) const {
    const double xw = wrap_2pi(x);
    for (const auto& p : pieces_)
        if (p.a.radians() <= xw && xw < p.b.radians()) return p.c;
    return 0.0;
}

cplx StepFunction::mean() const {
    cplx acc = 0;
    for (const auto& p : pieces_) acc += p.c * (p.b.radians() - p.a.radians());
    return acc / two_pi;
}

double StepFunction::total_variation() const {
    double tv = 0;
    for (const auto& j : jumps()) tv += std::abs(j.delta);
    return tv;
}

std::vector<StepFunction::Jump> StepFunction::jumps() const {
    // candidate breakpoints: all endpoints, normalized mod 2pi
    std::vector<PiRational> pts;
    for (const auto& p : pieces_) {
        pts.push_back(p.a.normalized());
        pts.push_back(p.b.normalized());
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::vector<Jump> out;
    for (const auto& y : pts) {
        const cplx right = eval(y);
        // left limit: piece with a < y <= b; y == 0 wraps to 2pi
        cplx left = 0.0;
        const PiRational probe = y.is_zero() ? pr_two_pi() : y;
        for (const auto& p : pieces_)
            if (p.a < probe && probe <= p.b) { left = p.c; break; }
        const cplx delta = right - left;
        if (delta != 0.0) out.push_back({y, delta});
    }
    return out;
}

long long StepFunction::revival_index() const {
    long long K = 1;
    auto fold = [&K](const PiRational& e) {
        // need k*e = 0 mod 2pi: k*num = 0 mod 2*den
        const long long p = ((e.num % (2 * e.den)) + 2 * e.den) % (2 * e.den);
        const long long need = (2 * e.den) / std::gcd(p == 0 ? 2 * e.den : p, 2 * e.den);
        K = std::lcm(K, need);
    };
    for (const auto& p : pieces_) {
        fold(p.a);
        fold(p.b);
    }
    return K;
}

StepFunction StepFunction::translated(const PiRational& shift) const {
    std::vector<StepPiece> out;
    for (const auto& p : pieces_) {
        const PiRational a = (p.a + shift).normalized();
        PiRational b = p.b + shift;
        long long r = b.num % (2 * b.den);
        if (r < 0) r += 2 * b.den;
        const bool b_wraps_to_zero = (r == 0);
        b = b_wraps_to_zero ? pr_two_pi() : PiRational(r, b.den);
        if (a < b) {
            out.push_back({a, b, p.c});
        } else {
            // piece crosses 2pi: split
            out.push_back({a, pr_two_pi(), p.c});
            if (!b_wraps_to_zero) out.push_back({PiRational(0, 1), b, p.c});
        }
    }
    return StepFunction(std::move(out));
}

StepFunction StepFunction::with_gaps_filled() const {
    std::vector<StepPiece> out;
    PiRational cursor(0, 1);
    for (const auto& p : pieces_) {
        if (cursor < p.a) out.push_back({cursor, p.a, 0.0});
        out.push_back(p);
        cursor = p.b;
    }
    if (cursor < pr_two_pi()) out.push_back({cursor, pr_two_pi(), 0.0});
    return StepFunction(std::move(out));
}

StepFunction StepFunction::simplified(double level_tol) const {
    std::vector<StepPiece> out;
    for (const auto& p : pieces_) {
        if (std::abs(p.c) <= level_tol) continue;
        if (!out.empty() && out.back().b == p.a && std::abs(out.back().c - p.c) <= level_tol) {
            out.back().b = p.b;
            continue;
        }
        out.push_back(p);
    }
    return StepFunction(std::move(out));
}

bool StepFunction::has_distinct_adjacent_levels(double tol) const {
    const StepFunction full = with_gaps_filled();
    const auto& ps = full.pieces();
    if (ps.size() < 2) return false;
    for (size_t i = 0; i < ps.size(); ++i) {
        const cplx cur = ps[i].c;
        const cplx nxt = ps[(i + 1) % ps.size()].c;
        if (std::abs(cur - nxt) <= tol) return false;
    }
    return true;
}

SpectralField step_fourier(const StepFunction& g, int N) {
    if (g.empty()) throw SpecError("step_fourier: empty piece list");
    SpectralField f(N);
    cplx mean = 0;
    for (const auto& p : g.pieces()) mean += p.c * (p.b.radians() - p.a.radians());
    f.at(0) = mean / two_pi;

    for (int n = 1; n <= N; ++n) {
        cplx acc = 0;
        for (const auto& p : g.pieces())
            acc += p.c * (unit_phase_neg(n, p.b) - unit_phase_neg(n, p.a));
        // g^(n) = (i/2pi n) * acc; negative mode by the same sum at -n
        f.at(n) = cplx(0, 1) / (two_pi * n) * acc;
        cplx accm = 0;
        for (const auto& p : g.pieces())
            accm += p.c * (unit_phase_neg(-n, p.b) - unit_phase_neg(-n, p.a));
        f.at(-n) = cplx(0, 1) / (two_pi * -n) * accm;
    }
    return f;
}

StepFunction step_indicator_half(double c) {
    std::vector<StepPiece> ps;
    ps.push_back({PiRational(0, 1), PiRational(1, 1), 1.0 - c});
    if (c != 0.0) ps.push_back({PiRational(1, 1), PiRational(2, 1), -c});
    return StepFunction(std::move(ps));
}

StepFunction square_wave_profile(double amplitude) {
    std::vector<StepPiece> ps;
    for (long long k = 0; k < 3; ++k) {
        ps.push_back({PiRational(2 * k, 3), PiRational(2 * k + 1, 3), 1.0 + amplitude});
        ps.push_back({PiRational(2 * k + 1, 3), PiRational(2 * k + 2, 3), 1.0 - amplitude});
    }
    return StepFunction(std::move(ps));
}

StepFunction combine_translates(const StepFunction& g, const std::vector<cplx>& weights,
                                const std::vector<PiRational>& shifts, double level_tol) {
    if (weights.size() != shifts.size())
        throw SpecError("combine_translates: weight/shift count mismatch");
    std::vector<PiRational> cuts;
    cuts.push_back(PiRational(0, 1));
    for (size_t r = 0; r < shifts.size(); ++r)
        for (const auto& p : g.pieces()) {
            cuts.push_back((p.a + shifts[r]).normalized());
            cuts.push_back((p.b + shifts[r]).normalized());
        }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts.push_back(pr_two_pi());

    std::vector<StepPiece> out;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i] < cuts[i + 1])) continue;
        const PiRational mid = pr_midpoint(cuts[i], cuts[i + 1]);
        cplx level = 0;
        for (size_t r = 0; r < shifts.size(); ++r) level += weights[r] * g.eval(mid - shifts[r]);
        out.push_back({cuts[i], cuts[i + 1], level});
    }
    return StepFunction(std::move(out)).simplified(level_tol);
}

}  // namespace dq
