// Norms used by the convergence studies.
//
//   L2      : Parseval on coefficients, |v|^2 = sum c_k^2
//   H^s     : |v|^2 = sum (k pi)^{2s} c_k^2        (negative s allowed)
//   C^delta : grid Holder norm = sup_j |g_j| + max |g_i - g_j| / |x_i - x_j|^delta
//
// The Holder seminorm scans all pairs up to a lag cap (short distances carry
// the roughness) plus 512 deterministic long-range pairs; lag_cap >= G-1
// degenerates to the exact O(G^2) exhaustive scan, which tests use.

#pragma once

#include "fsb/spectral_basis.hpp"

#include <utility>
#include <vector>

namespace fsb {

struct HolderEstimate {
    double sup_norm = 0.0;
    double seminorm = 0.0;
    double value() const { return sup_norm + seminorm; }
};

double norm_l2(const SpectralField& v);
double norm_h(const SpectralField& v, double s);

// delta in [0,1]; lag_cap <= 0 means exhaustive.  The random long-range pairs
// are a fixed function of (G, lag_cap) — counter-based draws with a pinned
// seed — so the estimate is deterministic.
HolderEstimate norm_c_delta(const GridField& g, double delta, int lag_cap = 64);

struct ExponentFit {
    double exponent = 0.0;        // fitted slope of log max-increment vs log lag
    bool degenerate = false;      // constant series: exponent is +infinity
    std::vector<double> lags;     // lag times used
    std::vector<double> max_increments;
};

// Pathwise Holder exponent of a scalar time series on a uniform grid: for
// dyadic lags ell = 1,2,4,... computes max_m |x_{m+ell} - x_m| and fits the
// log-log slope.  Needs >= 64 samples (throws otherwise).  A constant series
// returns degenerate = true and +infinity.
ExponentFit temporal_holder_exponent(const std::vector<std::pair<double, double>>& series);

// Shared regression core: fit log(max_increments) against log(lags), skipping
// exact zeros; degenerate when everything is zero.
ExponentFit fit_increment_exponent(std::vector<double> lag_times,
                                   std::vector<double> max_increments);

}  // namespace fsb
