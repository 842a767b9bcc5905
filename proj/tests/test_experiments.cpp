// Convergence-study orchestration: parameter windows, rate bookkeeping,
// coupled-noise discipline, and the deterministic oracles (analytic spectral
// tail for the space study, first-order self-convergence for the time study).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fsb/experiments.hpp"
#include "fsb/norms.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace {

fsb::SolveConfig study_base(int n_modes, int n_steps, std::uint64_t seed, int base_steps) {
    fsb::SolveConfig cfg;
    cfg.frac.alpha = 1.9;
    cfg.delta = 0.1;
    cfg.n_modes = n_modes;
    cfg.n_steps = n_steps;
    cfg.T = 0.5;
    cfg.noise.seed = seed;
    cfg.noise.n_modes = n_modes;
    cfg.noise.base_steps = base_steps;
    cfg.noise.T = cfg.T;
    return cfg;
}

}  // namespace

TEST_CASE("validity windows: nested parameter regimes with named violations") {
    auto all = fsb::validity_window(1.9, 0.1);
    CHECK(all.nonlinearity);
    CHECK(all.existence);
    CHECK(all.full_theorem);
    CHECK(all.all());
    CHECK(all.violations.empty());

    // alpha below 7/4: drift theory fine, rate theorem out of reach
    auto mid = fsb::validity_window(1.6, 0.25);
    CHECK(mid.nonlinearity);
    CHECK(mid.existence);  // alpha > 3/2 and delta < (alpha-1)/2 = 0.3
    CHECK_FALSE(mid.full_theorem);
    CHECK_FALSE(mid.all());
    REQUIRE_FALSE(mid.violations.empty());
    bool names_alpha = false;
    for (const auto& v : mid.violations)
        if (v.find("alpha") != std::string::npos) names_alpha = true;
    CHECK(names_alpha);

    // boundary: delta = 0 sits on the open end of (1 - alpha/2, .) at alpha = 2
    auto bound = fsb::validity_window(2.0, 0.0);
    CHECK_FALSE(bound.nonlinearity);
    CHECK_FALSE(bound.existence);
    CHECK_FALSE(bound.full_theorem);
    bool names_delta = false;
    for (const auto& v : bound.violations)
        if (v.find("delta") != std::string::npos) names_delta = true;
    CHECK(names_delta);

    // alpha = 2 is admitted for existence (closed end) but not the rate theorem
    auto edge = fsb::validity_window(2.0, 0.1);
    CHECK(edge.nonlinearity);
    CHECK(edge.existence);
    CHECK_FALSE(edge.full_theorem);
}

TEST_CASE("median and log-log slope helpers") {
    CHECK(fsb::median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(fsb::median({4.0, 1.0, 3.0, 2.0}) == 2.5);
    CHECK(fsb::median({7.0}) == 7.0);
    CHECK_THROWS_AS(fsb::median({}), std::invalid_argument);

    // exact power law comes back exactly
    std::vector<double> x = {2.0, 4.0, 8.0, 16.0};
    std::vector<double> y;
    for (double xi : x) y.push_back(3.0 * std::pow(xi, -0.7));
    CHECK(fsb::loglog_slope(x, y) == doctest::Approx(-0.7).epsilon(1e-12));

    CHECK_THROWS_AS(fsb::loglog_slope({1.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(fsb::loglog_slope({1.0, 2.0}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(fsb::loglog_slope({1.0, -2.0}, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(fsb::loglog_slope({1.0, 2.0}, {0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("space study: bookkeeping, theory rate, and preconditions") {
    auto base = study_base(32, 64, 21, 64);
    std::vector<int> n_list = {4, 6, 8};
    auto rep = fsb::space_convergence_study(base, n_list, 2);
    CHECK(rep.study == "space");
    CHECK(rep.parameter_axis == "N");
    CHECK(rep.theory_rate == doctest::Approx(0.35).epsilon(1e-12));
    CHECK(rep.tolerance == 0.15);
    CHECK(rep.alpha == 1.9);
    CHECK(rep.delta == 0.1);
    REQUIRE(rep.axis_values.size() == 3);
    CHECK(rep.axis_values[1] == 6.0);
    REQUIRE(rep.errors_cdelta.rows() == 2);
    REQUIRE(rep.errors_cdelta.cols() == 3);
    CHECK((rep.errors_cdelta.array() > 0.0).all());
    CHECK((rep.errors_l2.array() > 0.0).all());
    REQUIRE(rep.fitted_slopes.size() == 2);
    CHECK_FALSE(rep.degenerate);
    CHECK(rep.noise_hash == fsb::noise_metadata_hash(base.noise));
    CHECK(rep.rng_id == std::string(fsb::rng_id()));
    REQUIRE(rep.seeds.size() == 2);
    CHECK(rep.seeds[0] == 21);
    CHECK(rep.seeds[1] == 22);

    CHECK_THROWS_AS(fsb::space_convergence_study(base, {4, 8}, 2), std::invalid_argument);
    CHECK_THROWS_AS(fsb::space_convergence_study(base, {4, 4, 8}, 2), std::invalid_argument);
    CHECK_THROWS_AS(fsb::space_convergence_study(base, {4, 8, 16}, 2),
                    std::invalid_argument);  // 16*4 > N_ref = 32
    CHECK_THROWS_AS(fsb::space_convergence_study(base, n_list, 0), std::invalid_argument);
}

TEST_CASE("space study: linear drift + zero noise reproduces the analytic tail decay") {
    // With f linear and no noise the t = 0 difference between the reference
    // and the N-run is exactly the spectral tail of u0, and the semigroup only
    // shrinks it afterwards; for c_k = k^-2 the tail C^delta norms decay like
    // a power whose slope the study must reproduce.
    auto base = study_base(64, 128, 0, 128);
    base.f = fsb::Polynomial({0.0, 1.0});
    base.noise_scale = 0.0;
    Eigen::VectorXd u0(64);
    for (int k = 1; k <= 64; ++k) u0[k - 1] = std::pow(double(k), -2.0);
    base.u0 = u0;
    std::vector<int> n_list = {4, 8, 16};

    auto rep = fsb::space_convergence_study(base, n_list, 1);
    REQUIRE(rep.fitted_slopes.size() == 1);
    CHECK(rep.pass);

    // oracle: C^delta norms of the pure tails (modes N+1..64) on the same grid
    fsb::Basis basis(64);
    const int grid = base.effective_grid();
    std::vector<double> axis, tails;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        Eigen::VectorXd tail = u0;
        tail.head(n_list[i]).setZero();
        const double norm =
            fsb::norm_c_delta(fsb::synthesize(tail, basis, grid), base.delta, base.diag_lag_cap)
                .value();
        tails.push_back(norm);
        axis.push_back(n_list[i]);
        // the study's error can never fall below the t = 0 tail it contains
        CHECK(rep.errors_cdelta(0, i) >= norm * (1.0 - 1e-12));
    }
    const double oracle_slope = fsb::loglog_slope(axis, tails);
    CHECK(std::abs(rep.median_slope - oracle_slope) < 0.05);
    CHECK(oracle_slope < -0.5);  // tail of k^-2 data in C^0.1 decays fast
}

TEST_CASE("time study: bookkeeping, deterministic first-order convergence") {
    auto base = study_base(16, 64, 3, 1024);
    base.noise_scale = 0.0;
    std::vector<int> m_list = {32, 64, 128};
    auto rep = fsb::time_convergence_study(base, m_list, 1);
    CHECK(rep.study == "time");
    CHECK(rep.parameter_axis == "dt");
    CHECK(rep.theory_rate == doctest::Approx(0.7 / 3.8).epsilon(1e-12));
    CHECK(rep.tolerance == 0.08);
    REQUIRE(rep.axis_values.size() == 3);
    CHECK(rep.axis_values[0] == doctest::Approx(0.5 / 32).epsilon(1e-15));
    CHECK(rep.axis_values[2] == doctest::Approx(0.5 / 128).epsilon(1e-15));
    CHECK_FALSE(rep.degenerate);
    CHECK((rep.errors_cdelta.array() > 0.0).all());
    // deterministic exponential-Euler self-convergence is first order in dt
    REQUIRE(rep.fitted_slopes.size() == 1);
    CHECK(rep.median_slope > 0.85);
    CHECK(rep.median_slope < 1.15);
    CHECK(rep.pass);

    CHECK_THROWS_AS(fsb::time_convergence_study(base, {32, 64}, 1), std::invalid_argument);
    auto tight = study_base(16, 64, 3, 512);
    CHECK_THROWS_AS(fsb::time_convergence_study(tight, {16, 32, 128}, 1),
                    std::invalid_argument);  // 128*8 > 512
    CHECK_THROWS_AS(fsb::time_convergence_study(base, {24, 48, 96}, 1),
                    std::invalid_argument);  // 24 does not divide 1024
}

TEST_CASE("time study: exact stochastic integrator degenerates cleanly") {
    auto base = study_base(8, 64, 9, 512);
    base.f = fsb::Polynomial({0.0});
    base.u0 = fsb::SpectralField::Zero(8);
    std::vector<int> m_list = {8, 16, 32};
    auto rep = fsb::time_convergence_study(base, m_list, 2);
    CHECK(rep.degenerate);
    CHECK(rep.pass);
    CHECK(rep.fitted_slopes.empty());
    CHECK_FALSE(std::isfinite(rep.median_slope));
    CHECK((rep.errors_cdelta.array() == 0.0).all());
    CHECK((rep.errors_l2.array() == 0.0).all());
}

TEST_CASE("studies enforce the rate-theorem window unless told otherwise") {
    auto base = study_base(32, 32, 4, 64);
    base.frac.alpha = 1.6;  // outside (7/4, 2)
    base.delta = 0.25;
    CHECK_THROWS_AS(fsb::space_convergence_study(base, {4, 6, 8}, 1), std::invalid_argument);
    CHECK_THROWS_AS(fsb::time_convergence_study(base, {4, 8, 16}, 1), std::invalid_argument);

    auto rep = fsb::space_convergence_study(base, {4, 6, 8}, 1, 1, false);
    CHECK(rep.theory_rate == doctest::Approx((1.6 - 1) / 2 - 0.25).epsilon(1e-12));

    auto inside = study_base(16, 32, 4, 256);
    inside.frac.alpha = 1.8;
    inside.delta = 0.15;  // inside (1 - alpha/2, (2 alpha - 3)/2) = (0.1, 0.3)
    CHECK_NOTHROW(fsb::time_convergence_study(inside, {4, 8, 16}, 1));
}

TEST_CASE("rate studies are reproducible bitwise for a fixed config") {
    auto base = study_base(8, 32, 31, 256);
    std::vector<int> m_list = {8, 16, 32};
    auto a = fsb::time_convergence_study(base, m_list, 3);
    auto b = fsb::time_convergence_study(base, m_list, 3);
    CHECK((a.errors_cdelta - b.errors_cdelta).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.errors_l2 - b.errors_l2).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(a.fitted_slopes.size() == b.fitted_slopes.size());
    for (std::size_t i = 0; i < a.fitted_slopes.size(); ++i)
        CHECK(a.fitted_slopes[i] == b.fitted_slopes[i]);
    CHECK(a.median_slope == b.median_slope);
    CHECK(a.noise_hash == b.noise_hash);

    // a multi-thread run reduces to the same numbers
    auto c = fsb::time_convergence_study(base, m_list, 3, 3);
    CHECK((a.errors_cdelta - c.errors_cdelta).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.median_slope == c.median_slope);
}

TEST_CASE("path regularity: OU exponent close to theory, smooth path near one") {
    auto base = study_base(8, 512, 17, 2048);
    auto rep = fsb::path_regularity_study(base, 4);
    CHECK(rep.theory == doctest::Approx(0.7 / 3.8).epsilon(1e-12));
    REQUIRE(rep.ou_exponents.size() == 4);
    REQUIRE(rep.solution_exponents.size() == 4);
    for (double e : rep.ou_exponents) {
        CHECK(std::isfinite(e));
        CHECK(e > 0.0);
        CHECK(e < 0.6);  // far from smooth
    }
    CHECK(rep.ou_median >= rep.theory - 0.1);
    CHECK(rep.pass);
    CHECK(std::isfinite(rep.solution_median));
    CHECK(rep.noise_hash == fsb::noise_metadata_hash(base.noise));
    CHECK(rep.rng_id == std::string(fsb::rng_id()));

    // deterministic run: OU series vanishes, solution path is smooth in time
    auto det = study_base(8, 512, 17, 512);
    det.noise_scale = 0.0;
    auto drep = fsb::path_regularity_study(det, 2);
    CHECK(drep.ou_exponents.empty());
    CHECK(drep.pass);  // vacuous: nothing stochastic to assert on
    CHECK_FALSE(std::isfinite(drep.ou_median));
    CHECK(drep.solution_median > 0.7);
    CHECK(drep.solution_median < 1.3);

    // near the classical heat case the target approaches 1/4
    auto heat = study_base(8, 256, 1, 256);
    heat.frac.alpha = 2.0;
    heat.delta = 0.01;
    auto hrep = fsb::path_regularity_study(heat, 1);
    CHECK(hrep.theory == doctest::Approx((1.0 - 0.02) / 4.0).epsilon(1e-12));

    CHECK_THROWS_AS(fsb::path_regularity_study(study_base(8, 32, 1, 32), 1),
                    std::invalid_argument);  // too few samples for a lag scan
}
