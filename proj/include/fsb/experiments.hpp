// Convergence laboratory: coupled-noise rate studies against the theoretical
// predictions
//
//   space: |u_{N_ref} - u_N|_{C^delta}  ~ N^{-((alpha-1)/2 - delta)}
//   time : |u_{M_base} - u_M|_{C^delta} ~ dt^{(alpha-1-2 delta)/(2 alpha)}
//   path : t -> u(t) is Holder-((alpha-1-2 delta)/(2 alpha)) in C^delta
//
// Every run of a study shares the per-seed noise path (same NoiseSpec, finest
// resolution), so resolution differences are never confounded by independent
// randomness.  Rates are fitted per seed by least squares in log-log and the
// study reports the median across seeds: the pathwise error constant is
// random and heavy-tailed, and the median is stable where the mean is not.

#pragma once

#include "fsb/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fsb {

struct RateReport {
    std::string study;             // "space" | "time"
    std::string parameter_axis;    // "N" | "dt"
    std::vector<double> axis_values;
    // n_seeds x n_axis error tables (sup over output times of the norm).
    Eigen::MatrixXd errors_cdelta;
    Eigen::MatrixXd errors_l2;
    std::vector<double> fitted_slopes;  // raw d log e / d log axis, per seed
    double median_slope = 0.0;     // +inf when degenerate
    double theory_rate = 0.0;
    double tolerance = 0.0;        // pass margin subtracted from theory_rate
    bool pass = false;
    bool degenerate = false;       // all errors exactly zero (exact scheme)
    double alpha = 0.0, delta = 0.0;
    std::uint64_t noise_hash = 0;
    std::string rng_id;
    std::vector<std::uint64_t> seeds;
};

// Galerkin truncation study: reference at base.n_modes (N_ref), runs at
// n_list with coupled noise (seed s = base.noise.seed + s), errors in C^delta
// (and L2, reported) on the reference grid.  Requires max(n_list)*4 <= N_ref
// and n_list strictly increasing with >= 3 entries, n_seeds >= 1.
// Pass rule: -median_slope >= theory - 0.15 with theory = (alpha-1)/2 - delta.
RateReport space_convergence_study(const SolveConfig& base, const std::vector<int>& n_list,
                                   int n_seeds, int jobs = 1, bool enforce_window = true);

// Time-step study at fixed N = base.n_modes against the base_steps reference.
// Requires m_list strictly increasing with >= 3 entries, max(m_list)*8 <=
// noise.base_steps, and every m dividing base_steps.
// Pass rule: median_slope >= theory - 0.08 with theory = (alpha-1-2delta)/(2alpha).
RateReport time_convergence_study(const SolveConfig& base, const std::vector<int>& m_list,
                                  int n_seeds, int jobs = 1, bool enforce_window = true);

struct RegularityReport {
    double theory = 0.0;                    // (alpha-1-2 delta)/(2 alpha)
    std::vector<double> ou_exponents;       // per seed, OU path in C^delta
    std::vector<double> solution_exponents; // per seed, scheme path (informational)
    double ou_median = 0.0;                 // +inf when the OU series is empty/degenerate
    double solution_median = 0.0;
    bool pass = false;                      // ou_median >= theory - 0.1
    double alpha = 0.0, delta = 0.0;
    std::uint64_t noise_hash = 0;
    std::string rng_id;
};

// Temporal Holder exponents of the OU path (at noise.base_steps resolution)
// and of the solution path (at base.n_steps), measured as the log-log slope
// of the dyadic-lag max C^delta increment: for lags l = 1, 2, 4, ..., M/16
// the scan takes max_m |X(t_{m+l}) - X(t_m)|_{C^delta} over m in strides of
// max(1, M/1024).  The OU assertion is the hard one (closed-form object); the
// solution exponent is recorded for comparison.  With noise_scale == 0 the OU
// series vanishes: ou_exponents stays empty and the assertion passes vacuously
// (the deterministic path is smooth, exponent ~ 1).  Needs M >= 64 on both
// clocks.
RegularityReport path_regularity_study(const SolveConfig& base, int n_seeds, int jobs = 1);

struct WindowCheck {
    bool nonlinearity = false;   // delta in (1 - alpha/2, 1), alpha in (1, 2]
    bool existence = false;      // alpha in (3/2, 2], delta in (1 - alpha/2, (alpha-1)/2)
    bool full_theorem = false;   // alpha in (7/4, 2), delta in (1 - alpha/2, (2 alpha - 3)/2)
    std::vector<std::string> violations;  // human-readable inequality per failure
    bool all() const { return nonlinearity && existence && full_theorem; }
};

WindowCheck validity_window(double alpha, double delta);

double median(std::vector<double> v);

// Least-squares slope of log y against log x (x, y > 0 required).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fsb
