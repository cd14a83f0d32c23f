#include "dq/regularity.hpp"

#include <algorithm>
#include <cmath>

#include "dq/diophantine.hpp"
#include "dq/fft.hpp"

namespace dq {

namespace {

struct LsqFit {
    double slope = 0.0;
    double residual = 0.0;
};

LsqFit lsq(const std::vector<std::pair<double, double>>& pts) {
    const double n = static_cast<double>(pts.size());
    double sx = 0, sy = 0;
    for (const auto& p : pts) {
        sx += p.first;
        sy += p.second;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (const auto& p : pts) {
        sxx += (p.first - mx) * (p.first - mx);
        sxy += (p.first - mx) * (p.second - my);
    }
    LsqFit fit;
    fit.slope = sxy / sxx;
    const double b = my - fit.slope * mx;
    double ss = 0;
    for (const auto& p : pts) {
        const double d = p.second - (fit.slope * p.first + b);
        ss += d * d;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

}  // namespace

DyadicBlockNorms lp_blocks(const SpectralField& f) {
    const int N = f.N();
    int j_top = 0;
    while (((1LL << j_top) - 1) < N) ++j_top;
    DyadicBlockNorms out;
    out.j_top = j_top;
    out.l1.assign(static_cast<size_t>(j_top) + 1, 0.0);
    out.l2.assign(static_cast<size_t>(j_top) + 1, 0.0);
    out.linf.assign(static_cast<size_t>(j_top) + 1, 0.0);

    const double c0 = std::abs(f.coeff(0));
    out.l1[0] = two_pi * c0;
    out.l2[0] = std::sqrt(two_pi) * c0;
    out.linf[0] = c0;

    for (int j = 1; j <= j_top; ++j) {
        const int lo = 1 << (j - 1);
        const int hi = std::min((1 << j) - 1, N);
        double s2 = 0;
        for (int n = lo; n <= hi; ++n) s2 += std::norm(f.coeff(n)) + std::norm(f.coeff(-n));
        out.l2[static_cast<size_t>(j)] = std::sqrt(two_pi * s2);

        size_t Mg = 64;
        while (Mg < (static_cast<size_t>(1) << (j + 3))) Mg <<= 1;
        std::vector<cplx> c(Mg, cplx(0.0, 0.0));
        for (int n = lo; n <= hi; ++n) {
            c[static_cast<size_t>(n) % Mg] += f.coeff(n);
            c[(Mg - static_cast<size_t>(n) % Mg) % Mg] += f.coeff(-n);
        }
        ifft_unscaled(c);
        double sup = 0, s1 = 0;
        for (const cplx& v : c) {
            const double a = std::abs(v);
            sup = std::max(sup, a);
            s1 += a;
        }
        out.linf[static_cast<size_t>(j)] = sup;
        out.l1[static_cast<size_t>(j)] = two_pi * s1 / static_cast<double>(Mg);
    }
    return out;
}

double besov_exponent(const DyadicBlockNorms& blocks, LpKind p, int j_lo, int j_hi) {
    const std::vector<double>& v = p == LpKind::L1   ? blocks.l1
                                   : p == LpKind::L2 ? blocks.l2
                                                     : blocks.linf;
    if (j_lo < 0) j_lo = 3;
    if (j_hi < 0) j_hi = blocks.j_top - 2;
    std::vector<std::pair<double, double>> pts;
    for (int j = std::max(1, j_lo); j <= std::min(j_hi, blocks.j_top); ++j) {
        const double n = v[static_cast<size_t>(j)];
        if (n > 0) pts.emplace_back(static_cast<double>(j), std::log2(n));
    }
    if (pts.size() < 4) throw SpecError("besov_exponent: fewer than 4 usable blocks");
    return -lsq(pts).slope;
}

DimensionEstimate box_dimension(const std::vector<double>& samples, DimensionOptions opt) {
    const size_t M = samples.size();
    if (!is_pow2(static_cast<long long>(M)))
        throw SpecError("box_dimension: sample count must be a power of two");
    const int m = log2_exact(static_cast<long long>(M));
    if (m < 12) throw SpecError("box_dimension: need at least 2^12 samples");

    DimensionEstimate est;
    const auto [it_min, it_max] = std::minmax_element(samples.begin(), samples.end());
    if (!(*it_max - *it_min > 0.0)) return est;  // constant graph: dimension 1

    for (int l = 1; l <= m - 3; ++l) {
        const double eps = std::ldexp(1.0, -l);
        const size_t ncols = static_cast<size_t>(1) << l;
        const size_t w = M / ncols;
        long long tot = 0;
        for (size_t cidx = 0; cidx < ncols; ++cidx) {
            double lo = samples[cidx * w], hi = lo;
            for (size_t i = cidx * w + 1; i < (cidx + 1) * w; ++i) {
                lo = std::min(lo, samples[i]);
                hi = std::max(hi, samples[i]);
            }
            tot += static_cast<long long>(std::ceil((hi - lo) / eps)) + 1;
        }
        est.counts.emplace_back(l, std::log2(static_cast<double>(tot)));
    }

    est.j_min = (opt.j_min >= 0) ? opt.j_min : 3;
    est.j_max = (opt.j_max >= 0) ? opt.j_max : (m - 5);
    std::vector<std::pair<double, double>> pts;
    for (const auto& [l, lc] : est.counts)
        if (l >= est.j_min && l <= est.j_max) pts.emplace_back(static_cast<double>(l), lc);
    if (pts.size() < 3) throw SpecError("box_dimension: fit window too narrow");
    const LsqFit fit = lsq(pts);
    est.slope = fit.slope;
    est.residual = fit.residual;
    return est;
}

std::pair<double, double> dimension_sandwich(double s_inf, double s1_threshold) {
    const auto clamp = [](double d) { return std::min(2.0, std::max(1.0, d)); };
    return {clamp(2.0 - s1_threshold), clamp(2.0 - s_inf)};
}

DivergenceReport sobolev_divergence(const SpectralField& f, double r, RealPart part) {
    const int N = f.N();
    if (N < 4) throw SpecError("sobolev_divergence: band too small");
    std::vector<double> h2(static_cast<size_t>(N) + 1, 0.0);
    for (int k = 1; k <= N; ++k) {
        const cplx fk = f.coeff(k), fmk = f.coeff(-k);
        const cplx hk = part == RealPart::Re ? 0.5 * (fk + std::conj(fmk))
                                             : (fk - std::conj(fmk)) / cplx(0.0, 2.0);
        h2[static_cast<size_t>(k)] = std::norm(hk);
    }
    DivergenceReport rep;
    double S = 0;
    long long next = 2;
    for (int k = 1; k <= N; ++k) {
        S += std::pow(static_cast<double>(k), 2.0 * r) * h2[static_cast<size_t>(k)];
        if (k == next) {
            rep.cutoffs.push_back(next);
            rep.partial_sums.push_back(S);
            next *= 2;
        }
    }
    const size_t levels = rep.cutoffs.size();
    const size_t use = std::min<size_t>(4, levels);
    std::vector<std::pair<double, double>> pts;
    for (size_t i = levels - use; i < levels; ++i) {
        if (rep.partial_sums[i] <= 0) continue;
        pts.emplace_back(std::log2(static_cast<double>(rep.cutoffs[i])),
                         std::log2(rep.partial_sums[i]));
    }
    if (pts.size() >= 2) rep.slope = lsq(pts).slope;
    rep.diverging = rep.slope > 0.05;
    return rep;
}

BilinearReport bilinear_check(int trials, double alpha, double delta, int N,
                              std::uint32_t seed) {
    if (!(alpha >= -0.5 && alpha <= 0.5))
        throw SpecError("bilinear_check: alpha must lie in [-1/2, 1/2]");
    if (!(delta > 0)) throw SpecError("bilinear_check: delta must be positive");
    if (trials < 1 || N < 2) throw SpecError("bilinear_check: bad trial parameters");
    UniformSource src(seed);
    size_t M = 64;
    while (M < static_cast<size_t>(4 * N + 4)) M <<= 1;

    const auto gaussian_field = [&](int band) {
        SpectralField f(band);
        for (int n = -band; n <= band; ++n) {
            const double u1 = src.unit();
            const double u2 = src.unit();
            const double rr = std::sqrt(-2.0 * std::log(1.0 - u1));
            f.at(n) = cplx(rr * std::cos(two_pi * u2), rr * std::sin(two_pi * u2));
        }
        return f;
    };

    BilinearReport rep;
    for (int trial = 0; trial < trials; ++trial) {
        const SpectralField f = gaussian_field(N);
        const SpectralField g = gaussian_field(N);
        GridField uf = from_spectral(f, M);
        const GridField ug = from_spectral(g, M);
        for (size_t i = 0; i < M; ++i) uf.v[i] *= ug.v[i];
        const SpectralField fg = to_spectral(uf);  // band M/2-1 >= 2N: exact product
        const double den = sobolev_norm(f, 0.5 + delta) * sobolev_norm(g, alpha);
        if (den == 0.0) continue;
        rep.max_ratio = std::max(rep.max_ratio, sobolev_norm(fg, alpha) / den);
        ++rep.trials_used;
    }
    return rep;
}

}  // namespace dq
