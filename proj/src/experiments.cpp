#include "fsb/experiments.hpp"

#include "fsb/norms.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace fsb {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::vector<std::uint64_t> seed_list(std::uint64_t base_seed, int n_seeds) {
    std::vector<std::uint64_t> seeds(n_seeds);
    for (int s = 0; s < n_seeds; ++s) seeds[s] = base_seed + std::uint64_t(s);
    return seeds;
}

void require_rate_window(double alpha, double delta) {
    const WindowCheck w = validity_window(alpha, delta);
    if (w.full_theorem) return;
    std::ostringstream os;
    os << "(alpha, delta) = (" << alpha << ", " << delta
       << ") is outside the rate-theorem window;";
    for (const auto& v : w.violations) os << ' ' << v << ';';
    os << " pass enforce_window = false to run anyway";
    throw std::invalid_argument(os.str());
}

// Dispatch work(0..n_seeds-1) either inline or over a small thread pool.
// Workers write to disjoint slots, so the only shared state is the counter.
template <class Work>
void run_over_seeds(int n_seeds, int jobs, Work&& work) {
    if (jobs <= 1 || n_seeds <= 1) {
        for (int s = 0; s < n_seeds; ++s) work(s);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const int s = next.fetch_add(1);
            if (s >= n_seeds) return;
            try {
                work(s);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = std::min(jobs, n_seeds);
    pool.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

struct SupGap {
    double cdelta = 0.0;
    double l2 = 0.0;
};

// Sup over output rows of the norms of (wide - narrow), with the narrow state
// zero-padded into the wide mode range, measured on the wide run's grid.
SupGap sup_trajectory_gap(const Eigen::MatrixXd& wide, const Eigen::MatrixXd& narrow,
                          const Basis& basis, int grid, double delta, int lag_cap) {
    if (wide.rows() != narrow.rows() || narrow.cols() > wide.cols())
        throw std::logic_error("trajectory shapes incompatible for a gap measurement");
    SupGap out;
    Eigen::VectorXd diff(wide.cols());
    for (Eigen::Index m = 0; m < wide.rows(); ++m) {
        diff = wide.row(m).transpose();
        diff.head(narrow.cols()) -= narrow.row(m).transpose();
        if ((diff.array() == 0.0).all()) continue;  // exact runs contribute nothing
        out.l2 = std::max(out.l2, norm_l2(diff));
        out.cdelta =
            std::max(out.cdelta, norm_c_delta(synthesize(diff, basis, grid), delta, lag_cap).value());
    }
    return out;
}

// Convert the error table into per-seed slopes and the pass verdict.  `sign`
// orients the fitted slope so that larger = better: -1 for a decaying-in-N
// study, +1 for a dt study where errors shrink with the axis.
void finalize_rates(RateReport& rep, double sign) {
    if ((rep.errors_cdelta.array() == 0.0).all()) {
        // exact-scheme degeneracy: every resolution reproduced the reference
        rep.degenerate = true;
        rep.median_slope = std::numeric_limits<double>::infinity();
        rep.pass = true;
        return;
    }
    if ((rep.errors_cdelta.array() == 0.0).any())
        throw std::runtime_error(
            "some errors are exactly zero while others are not: the runs do not "
            "share their noise path (miscoupled resolutions)");
    const Eigen::Index n_axis = rep.errors_cdelta.cols();
    std::vector<double> errs(n_axis);
    for (Eigen::Index s = 0; s < rep.errors_cdelta.rows(); ++s) {
        for (Eigen::Index i = 0; i < n_axis; ++i) errs[i] = rep.errors_cdelta(s, i);
        rep.fitted_slopes.push_back(loglog_slope(rep.axis_values, errs));
    }
    rep.median_slope = median(rep.fitted_slopes);
    rep.pass = sign * rep.median_slope >= rep.theory_rate - rep.tolerance;
}

// Log-log slope of the dyadic-lag max C^delta increments of a mode trajectory
// (rows = time).  Lags 1, 2, 4, ..., M/16; start positions strided so no lag
// scans more than ~1024 windows.  +infinity for a constant-in-time path.
double increment_exponent(const Eigen::MatrixXd& states, double T, const Basis& basis, int grid,
                          double delta, int lag_cap) {
    const int m = int(states.rows()) - 1;
    const double dt = T / m;
    const int stride = std::max(1, m / 1024);
    std::vector<double> lag_times, max_increments;
    Eigen::VectorXd diff(states.cols());
    for (int lag = 1; 16 * lag <= m; lag *= 2) {
        double best = 0.0;
        for (int i = 0; i + lag <= m; i += stride) {
            diff = (states.row(i + lag) - states.row(i)).transpose();
            if ((diff.array() == 0.0).all()) continue;
            best = std::max(best,
                            norm_c_delta(synthesize(diff, basis, grid), delta, lag_cap).value());
        }
        lag_times.push_back(lag * dt);
        max_increments.push_back(best);
    }
    const ExponentFit fit = fit_increment_exponent(std::move(lag_times), std::move(max_increments));
    return fit.degenerate ? std::numeric_limits<double>::infinity() : fit.exponent;
}

}  // namespace

double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median of an empty sample");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("log-log fit: size mismatch");
    if (x.size() < 2) throw std::invalid_argument("log-log fit needs at least two points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument("log-log fit needs strictly positive data");
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = double(x.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("log-log fit: all abscissae coincide");
    return (n * sxy - sx * sy) / denom;
}

WindowCheck validity_window(double alpha, double delta) {
    WindowCheck w;
    auto check = [&](const char* name,
                     std::initializer_list<std::pair<bool, std::string>> bounds) {
        bool ok = true;
        for (const auto& [holds, text] : bounds) {
            if (holds) continue;
            ok = false;
            w.violations.push_back(std::string(name) + ": " + text);
        }
        return ok;
    };
    const std::string a = fmt(alpha), d = fmt(delta);
    w.nonlinearity = check("nonlinearity window",
                           {{alpha > 1.0, "alpha = " + a + " must exceed 1"},
                            {alpha <= 2.0, "alpha = " + a + " must not exceed 2"},
                            {delta > 1.0 - alpha / 2.0,
                             "delta = " + d + " must exceed 1 - alpha/2 = " + fmt(1.0 - alpha / 2.0)},
                            {delta < 1.0, "delta = " + d + " must stay below 1"}});
    w.existence = check("existence window",
                        {{alpha > 1.5, "alpha = " + a + " must exceed 3/2"},
                         {alpha <= 2.0, "alpha = " + a + " must not exceed 2"},
                         {delta > 1.0 - alpha / 2.0,
                          "delta = " + d + " must exceed 1 - alpha/2 = " + fmt(1.0 - alpha / 2.0)},
                         {delta < (alpha - 1.0) / 2.0,
                          "delta = " + d + " must stay below (alpha-1)/2 = " + fmt((alpha - 1.0) / 2.0)}});
    w.full_theorem =
        check("rate theorem window",
              {{alpha > 1.75, "alpha = " + a + " must exceed 7/4"},
               {alpha < 2.0, "alpha = " + a + " must stay below 2"},
               {delta > 1.0 - alpha / 2.0,
                "delta = " + d + " must exceed 1 - alpha/2 = " + fmt(1.0 - alpha / 2.0)},
               {delta < (2.0 * alpha - 3.0) / 2.0,
                "delta = " + d + " must stay below alpha - 3/2 = " + fmt((2.0 * alpha - 3.0) / 2.0)}});
    return w;
}

RateReport space_convergence_study(const SolveConfig& base, const std::vector<int>& n_list,
                                   int n_seeds, int jobs, bool enforce_window) {
    base.validate();
    if (enforce_window) require_rate_window(base.frac.alpha, base.delta);
    if (n_seeds < 1) throw std::invalid_argument("space study needs n_seeds >= 1");
    if (n_list.size() < 3)
        throw std::invalid_argument("space study needs at least 3 mode counts");
    if (n_list.front() < 1) throw std::invalid_argument("mode counts must be positive");
    for (std::size_t i = 0; i + 1 < n_list.size(); ++i)
        if (n_list[i + 1] <= n_list[i])
            throw std::invalid_argument("n_list must be strictly increasing");
    if (4 * n_list.back() > base.n_modes)
        throw std::invalid_argument(
            "reference resolution too close to the runs: need max(n_list)*4 <= n_modes");

    RateReport rep;
    rep.study = "space";
    rep.parameter_axis = "N";
    for (int n : n_list) rep.axis_values.push_back(double(n));
    rep.theory_rate = (base.frac.alpha - 1.0) / 2.0 - base.delta;
    rep.tolerance = 0.15;
    rep.alpha = base.frac.alpha;
    rep.delta = base.delta;
    rep.noise_hash = noise_metadata_hash(base.noise);
    rep.rng_id = rng_id();
    rep.seeds = seed_list(base.noise.seed, n_seeds);
    rep.errors_cdelta.setZero(n_seeds, Eigen::Index(n_list.size()));
    rep.errors_l2.setZero(n_seeds, Eigen::Index(n_list.size()));

    const int grid = base.effective_grid();
    Basis basis(base.n_modes);

    run_over_seeds(n_seeds, jobs, [&](int s) {
        SolveConfig ref_cfg = base;
        ref_cfg.noise.seed = rep.seeds[s];
        ref_cfg.u0 = base.effective_u0();  // pin so the runs truncate the same state
        const Trajectory ref = solve_fully_discrete(ref_cfg);
        for (std::size_t i = 0; i < n_list.size(); ++i) {
            SolveConfig run_cfg = ref_cfg;
            run_cfg.n_modes = n_list[i];
            run_cfg.grid_size = 0;  // re-derive the alias-safe grid for the smaller basis
            const Trajectory run = solve_fully_discrete(run_cfg);
            const SupGap gap =
                sup_trajectory_gap(ref.states, run.states, basis, grid, base.delta, base.diag_lag_cap);
            rep.errors_cdelta(s, Eigen::Index(i)) = gap.cdelta;
            rep.errors_l2(s, Eigen::Index(i)) = gap.l2;
        }
    });

    finalize_rates(rep, -1.0);  // errors decay in N: the rate is minus the slope
    return rep;
}

RateReport time_convergence_study(const SolveConfig& base, const std::vector<int>& m_list,
                                  int n_seeds, int jobs, bool enforce_window) {
    base.validate();
    if (enforce_window) require_rate_window(base.frac.alpha, base.delta);
    if (n_seeds < 1) throw std::invalid_argument("time study needs n_seeds >= 1");
    if (m_list.size() < 3)
        throw std::invalid_argument("time study needs at least 3 step counts");
    if (m_list.front() < 1) throw std::invalid_argument("step counts must be positive");
    for (std::size_t i = 0; i + 1 < m_list.size(); ++i)
        if (m_list[i + 1] <= m_list[i])
            throw std::invalid_argument("m_list must be strictly increasing");
    const int base_steps = base.noise.base_steps;
    if (8LL * m_list.back() > base_steps)
        throw std::invalid_argument(
            "reference resolution too close to the runs: need max(m_list)*8 <= base_steps");
    for (int m : m_list)
        if (base_steps % m != 0)
            throw std::invalid_argument("every step count must divide base_steps");

    RateReport rep;
    rep.study = "time";
    rep.parameter_axis = "dt";
    for (int m : m_list) rep.axis_values.push_back(base.T / double(m));
    rep.theory_rate = (base.frac.alpha - 1.0 - 2.0 * base.delta) / (2.0 * base.frac.alpha);
    rep.tolerance = 0.08;
    rep.alpha = base.frac.alpha;
    rep.delta = base.delta;
    rep.noise_hash = noise_metadata_hash(base.noise);
    rep.rng_id = rng_id();
    rep.seeds = seed_list(base.noise.seed, n_seeds);
    rep.errors_cdelta.setZero(n_seeds, Eigen::Index(m_list.size()));
    rep.errors_l2.setZero(n_seeds, Eigen::Index(m_list.size()));

    const int grid = base.effective_grid();
    Basis basis(base.n_modes);

    run_over_seeds(n_seeds, jobs, [&](int s) {
        // One finest-resolution trajectory per seed; every coarse comparison
        // subsamples its rows (bitwise identical to a strided reference solve).
        SolveConfig fine_cfg = base;
        fine_cfg.noise.seed = rep.seeds[s];
        fine_cfg.n_steps = base_steps;
        const Trajectory fine = solve_fully_discrete(fine_cfg);
        for (std::size_t i = 0; i < m_list.size(); ++i) {
            const int m_run = m_list[i];
            const int stride = base_steps / m_run;
            Eigen::MatrixXd ref_states(m_run + 1, fine.states.cols());
            for (int r = 0; r <= m_run; ++r) ref_states.row(r) = fine.states.row(r * stride);
            SolveConfig run_cfg = fine_cfg;
            run_cfg.n_steps = m_run;
            const Trajectory run = solve_fully_discrete(run_cfg);
            const SupGap gap =
                sup_trajectory_gap(ref_states, run.states, basis, grid, base.delta, base.diag_lag_cap);
            rep.errors_cdelta(s, Eigen::Index(i)) = gap.cdelta;
            rep.errors_l2(s, Eigen::Index(i)) = gap.l2;
        }
    });

    finalize_rates(rep, +1.0);  // axis is dt: errors shrink together with it
    return rep;
}

RegularityReport path_regularity_study(const SolveConfig& base, int n_seeds, int jobs) {
    base.validate();
    if (n_seeds < 1) throw std::invalid_argument("regularity study needs n_seeds >= 1");
    if (base.n_steps < 64 || base.noise.base_steps < 64)
        throw std::invalid_argument(
            "regularity study needs >= 64 steps on both the solver and noise clocks");

    RegularityReport rep;
    rep.theory = (base.frac.alpha - 1.0 - 2.0 * base.delta) / (2.0 * base.frac.alpha);
    rep.alpha = base.frac.alpha;
    rep.delta = base.delta;
    rep.noise_hash = noise_metadata_hash(base.noise);
    rep.rng_id = rng_id();

    const bool noisy = base.noise_scale != 0.0;
    if (noisy) rep.ou_exponents.assign(n_seeds, 0.0);
    rep.solution_exponents.assign(n_seeds, 0.0);

    const int grid = base.effective_grid();
    Basis basis(base.n_modes);

    run_over_seeds(n_seeds, jobs, [&](int s) {
        SolveConfig cfg = base;
        cfg.noise.seed = base.noise.seed + std::uint64_t(s);
        if (noisy) {
            NoiseSpec spec = cfg.noise;
            spec.n_modes = cfg.n_modes;  // the modes the solver actually sees
            const OUPath path = generate_ou_path(spec, cfg.frac, spec.base_steps);
            const Eigen::MatrixXd w = path.w * cfg.noise_scale;
            rep.ou_exponents[s] =
                increment_exponent(w, cfg.T, basis, grid, cfg.delta, cfg.diag_lag_cap);
        }
        const Trajectory traj = solve_fully_discrete(cfg);
        rep.solution_exponents[s] =
            increment_exponent(traj.states, cfg.T, basis, grid, cfg.delta, cfg.diag_lag_cap);
    });

    rep.ou_median = rep.ou_exponents.empty() ? std::numeric_limits<double>::infinity()
                                             : median(rep.ou_exponents);
    rep.solution_median = median(rep.solution_exponents);
    rep.pass = rep.ou_exponents.empty() || rep.ou_median >= rep.theory - 0.1;
    return rep;
}

}  // namespace fsb
