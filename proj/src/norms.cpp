#include "fsb/norms.hpp"

#include "fsb/counter_rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fsb {

double norm_l2(const SpectralField& v) { return v.norm(); }

double norm_h(const SpectralField& v, double s) {
    constexpr double pi = std::numbers::pi;
    double acc = 0.0;
    for (int k = 1; k <= v.size(); ++k) {
        const double w = std::pow(k * pi, s) * v[k - 1];
        acc += w * w;
    }
    return std::sqrt(acc);
}

namespace {
// Seed of the pinned stream that draws the long-range pairs; the pairs are a
// fixed function of (G, lag_cap), so the estimate is deterministic.
constexpr std::uint64_t kPairSeed = 0x686f6c646572ULL;  // "holder"
constexpr int kLongRangePairs = 512;
}  // namespace

HolderEstimate norm_c_delta(const GridField& g, double delta, int lag_cap) {
    if (delta < 0.0 || delta > 1.0)
        throw std::invalid_argument("norm_c_delta: delta must lie in [0,1]");
    const int grid = static_cast<int>(g.size());
    if (grid < 1) throw std::invalid_argument("norm_c_delta: empty field");

    HolderEstimate est;
    est.sup_norm = g.lpNorm<Eigen::Infinity>();
    if (grid == 1) return est;

    const bool exhaustive = lag_cap <= 0 || lag_cap >= grid - 1;
    const int max_lag = exhaustive ? grid - 1 : lag_cap;

    // Per-lag weights 1/dist^delta, hoisted out of the pair loop.
    Eigen::VectorXd inv_w(max_lag + 1);
    for (int lag = 1; lag <= max_lag; ++lag)
        inv_w[lag] = std::pow(static_cast<double>(lag) / grid, -delta);

    double semi = 0.0;
    for (int lag = 1; lag <= max_lag; ++lag) {
        double worst = 0.0;
        const int n = grid - lag;
        for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(g[i] - g[i + lag]));
        semi = std::max(semi, worst * inv_w[lag]);
    }

    if (!exhaustive && grid - 1 > lag_cap) {
        // Sampled long-range pairs (j - i > lag_cap), pinned stream.
        for (int t = 0; t < kLongRangePairs; ++t) {
            const double u = uniform01(kPairSeed, StreamTag::norm_pairs, 0, 2 * t);
            const double v = uniform01(kPairSeed, StreamTag::norm_pairs, 0, 2 * t + 1);
            int i = static_cast<int>(u * (grid - 1 - lag_cap));
            i = std::min(i, grid - 2 - lag_cap);
            int j = i + lag_cap + 1 + static_cast<int>(v * (grid - 1 - i - lag_cap));
            j = std::min(j, grid - 1);
            const double dist = static_cast<double>(j - i) / grid;
            semi = std::max(semi, std::abs(g[i] - g[j]) * std::pow(dist, -delta));
        }
    }
    est.seminorm = semi;
    return est;
}

ExponentFit fit_increment_exponent(std::vector<double> lag_times,
                                   std::vector<double> max_increments) {
    if (lag_times.size() != max_increments.size() || lag_times.size() < 2)
        throw std::invalid_argument("fit_increment_exponent: need >= 2 lag points");
    ExponentFit fit;
    fit.lags = lag_times;
    fit.max_increments = max_increments;

    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < lag_times.size(); ++i) {
        if (max_increments[i] > 0.0) {
            lx.push_back(std::log(lag_times[i]));
            ly.push_back(std::log(max_increments[i]));
        }
    }
    if (lx.size() < 2) {
        fit.degenerate = true;
        fit.exponent = std::numeric_limits<double>::infinity();
        return fit;
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) { mx += lx[i]; my += ly[i]; }
    mx /= lx.size();
    my /= ly.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    fit.exponent = sxy / sxx;
    return fit;
}

ExponentFit temporal_holder_exponent(const std::vector<std::pair<double, double>>& series) {
    const int n = static_cast<int>(series.size());
    if (n < 64)
        throw std::invalid_argument("temporal_holder_exponent: need >= 64 samples");
    const double dt = series[1].first - series[0].first;
    if (!(dt > 0.0))
        throw std::invalid_argument("temporal_holder_exponent: times must increase");

    std::vector<double> lags, incs;
    for (int lag = 1; lag <= (n - 1) / 4; lag *= 2) {
        double worst = 0.0;
        for (int m = 0; m + lag < n; ++m)
            worst = std::max(worst, std::abs(series[m + lag].second - series[m].second));
        lags.push_back(lag * dt);
        incs.push_back(worst);
    }
    return fit_increment_exponent(std::move(lags), std::move(incs));
}

}  // namespace fsb
