#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dq/common.hpp"
#include "dq/spectral.hpp"

namespace dq {

enum class LpKind { L1, L2, Linf };

// Sharp dyadic blocks: P_0 is the mean mode, P_j selects 2^{j-1} <= |n| < 2^j.
// L2 entries are exact (Parseval); L1/Linf come from dense grids with >= 8*2^j
// points per block.
struct DyadicBlockNorms {
    std::vector<double> l1, l2, linf;  // indexed by block j
    int j_top = 0;                     // largest block index meeting the band
};

DyadicBlockNorms lp_blocks(const SpectralField& f);

// least-squares decay exponent s_p: slope of log2||P_j f||_p against -j over
// [j_lo, j_hi]; defaults discard the two coarsest and two finest blocks
double besov_exponent(const DyadicBlockNorms& blocks, LpKind p, int j_lo = -1, int j_hi = -1);

struct DimensionEstimate {
    double slope = 1.0;
    int j_min = 0, j_max = 0;  // fitted level window (eps = 2^-j)
    double residual = 0.0;
    std::string method = "oscillation";
    std::vector<std::pair<int, double>> counts;  // (level, log2 box count)
};

struct DimensionOptions {
    int j_min = -1;  // default: third-coarsest level
    int j_max = -1;  // default: two below the finest counted level
};

// Column-oscillation box count of the graph of the sampled function:
// N(eps) = sum over 2^l columns of (ceil(osc/eps)+1), eps = 2^-l, oscillation
// in native y units. Needs 2^m samples, m >= 12. Constant input -> (1.0, 0).
DimensionEstimate box_dimension(const std::vector<double>& samples, DimensionOptions opt = {});

// (lower, upper) = (2 - s1_threshold, 2 - s_inf), clamped to [1,2]
std::pair<double, double> dimension_sandwich(double s_inf, double s1_threshold);

enum class RealPart { Re, Im };

struct DivergenceReport {
    std::vector<long long> cutoffs;    // dyadic K
    std::vector<double> partial_sums;  // S_K = sum_{k<=K} k^{2r} |h_k|^2
    double slope = 0.0;                // log2 S vs log2 K over the top levels
    bool diverging = false;            // slope > 0.05
};

// h_k = (f_k + conj(f_{-k}))/2 (Re) or (f_k - conj(f_{-k}))/(2i) (Im)
DivergenceReport sobolev_divergence(const SpectralField& f, double r, RealPart part);

struct BilinearReport {
    double max_ratio = 0.0;
    int trials_used = 0;
};

// max over seeded random band-limited f,g of
// ||fg||_{H^alpha} / (||f||_{H^{1/2+delta}} ||g||_{H^alpha});
// products formed exactly on a grid with M >= 4N+4
BilinearReport bilinear_check(int trials, double alpha, double delta, int N = 128,
                              std::uint32_t seed = 0x5EED);

}  // namespace dq
