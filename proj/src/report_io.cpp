#include "fsb/report_io.hpp"

#include "fsb/noise.hpp"
#include "fsb/nonlinearity.hpp"
#include "fsb/norms.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsb {

namespace {

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string short_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

std::filesystem::path artifact_path(const RunManifest& m, const char* name) {
    return std::filesystem::path(m.output_dir) / name;
}

void write_manifest_file(const RunManifest& m) {
    atomic_write(artifact_path(m, "manifest.json").string(), manifest_json(m), m.force);
}

nlohmann::json study_common_json(const RunManifest& m) {
    nlohmann::json j;
    j["git_ref"] = m.git_ref;
    j["tool_version"] = m.tool_version;
    j["manifest"] = hash_hex(m.hash());
    return j;
}

void print_rate_report(const RateReport& r) {
    std::cout << "study: " << r.study << "  (alpha = " << short_num(r.alpha)
              << ", delta = " << short_num(r.delta) << ")\n";
    std::cout << "  " << r.parameter_axis << "        median C^delta error   median L2 error\n";
    for (std::size_t i = 0; i < r.axis_values.size(); ++i) {
        std::vector<double> ec, el;
        for (Eigen::Index s = 0; s < r.errors_cdelta.rows(); ++s) {
            ec.push_back(r.errors_cdelta(s, Eigen::Index(i)));
            el.push_back(r.errors_l2(s, Eigen::Index(i)));
        }
        std::printf("  %-9s %-22s %s\n", short_num(r.axis_values[i]).c_str(),
                    short_num(median(ec)).c_str(), short_num(median(el)).c_str());
    }
    if (r.degenerate) {
        std::cout << "  all errors exactly zero (exact integrator for this drift); "
                     "rate check passes vacuously\n";
        return;
    }
    std::cout << "  per-seed slopes:";
    for (double s : r.fitted_slopes) std::cout << ' ' << short_num(s);
    const double observed = r.study == "space" ? -r.median_slope : r.median_slope;
    std::cout << "\n  observed rate " << short_num(observed) << " vs required "
              << short_num(r.theory_rate) << " - " << short_num(r.tolerance) << " = "
              << short_num(r.theory_rate - r.tolerance) << ": "
              << (r.pass ? "PASS" : "FAIL") << "\n";
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void atomic_write(const std::string& path, const std::string& content, bool allow_overwrite) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (!allow_overwrite && fs::exists(target))
        throw std::runtime_error("refusing to overwrite existing file " + path +
                                 " (re-run with --force to replace it)");
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), std::streamsize(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ec2;
        fs::remove(tmp, ec2);
        throw std::runtime_error("cannot move " + tmp.string() + " into place: " + ec.message());
    }
}

std::string trajectory_csv(const Trajectory& traj, std::uint64_t manifest_hash) {
    std::ostringstream os;
    os << "# manifest=" << hash_hex(manifest_hash) << '\n';
    os << "m,t,l2_norm,h_alpha2_norm,c_delta_norm\n";
    for (int m = 0; m <= traj.n_steps(); ++m)
        os << m << ',' << format_double(traj.times[m]) << ',' << format_double(traj.l2_norm[m])
           << ',' << format_double(traj.h_alpha2_norm[m]) << ','
           << format_double(traj.c_delta_norm[m]) << '\n';
    return os.str();
}

std::string rate_study_csv(const RateReport& r, std::uint64_t manifest_hash) {
    std::ostringstream os;
    os << "# manifest=" << hash_hex(manifest_hash) << '\n';
    os << "seed,axis_value,error_cdelta,error_l2\n";
    for (Eigen::Index s = 0; s < r.errors_cdelta.rows(); ++s)
        for (Eigen::Index i = 0; i < r.errors_cdelta.cols(); ++i)
            os << r.seeds[std::size_t(s)] << ',' << format_double(r.axis_values[std::size_t(i)])
               << ',' << format_double(r.errors_cdelta(s, i)) << ','
               << format_double(r.errors_l2(s, i)) << '\n';
    return os.str();
}

std::string rate_study_json(const RateReport& r, const RunManifest& m) {
    nlohmann::json j = study_common_json(m);
    j["study"] = r.study;
    j["parameter_axis"] = r.parameter_axis;
    j["axis_values"] = r.axis_values;
    j["alpha"] = r.alpha;
    j["delta"] = r.delta;
    j["theory_rate"] = r.theory_rate;
    j["tolerance"] = r.tolerance;
    j["median_slope"] = r.median_slope;  // non-finite dumps as null
    j["per_seed_slopes"] = r.fitted_slopes;
    j["pass"] = r.pass;
    j["degenerate"] = r.degenerate;
    j["seeds"] = r.seeds;
    j["noise_hash"] = hash_hex(r.noise_hash);
    j["rng_id"] = r.rng_id;
    return j.dump(2) + "\n";
}

std::string regularity_json(const RegularityReport& r, const RunManifest& m) {
    nlohmann::json j = study_common_json(m);
    j["study"] = "regularity";
    j["alpha"] = r.alpha;
    j["delta"] = r.delta;
    j["theory"] = r.theory;
    j["ou_exponents"] = r.ou_exponents;
    j["solution_exponents"] = r.solution_exponents;
    j["ou_median"] = r.ou_median;
    j["solution_median"] = r.solution_median;
    j["pass"] = r.pass;
    j["noise_hash"] = hash_hex(r.noise_hash);
    j["rng_id"] = r.rng_id;
    return j.dump(2) + "\n";
}

std::string manifest_json(const RunManifest& m) {
    nlohmann::json c;
    c["alpha"] = m.config.alpha;
    c["delta"] = m.config.delta;
    c["poly_coeffs"] = m.config.poly_coeffs;
    c["u0_mode"] = m.config.u0_mode;
    c["u0_coeffs"] = m.config.u0_coeffs;
    c["T"] = m.config.T;
    c["N"] = m.config.N;
    c["M"] = m.config.M;
    c["M_base"] = m.config.M_base;
    c["G"] = m.config.G;
    c["seed"] = m.config.seed;
    c["n_seeds"] = m.config.n_seeds;
    c["N_list"] = m.config.N_list;
    c["M_list"] = m.config.M_list;
    c["lag_cap"] = m.config.lag_cap;
    c["strict"] = m.config.strict;
    c["blowup_threshold"] = m.config.blowup_threshold;

    nlohmann::json j;
    j["subcommand"] = m.subcommand;
    j["config_path"] = m.config_path;
    j["config"] = c;
    j["output_dir"] = m.output_dir;
    j["tool_version"] = m.tool_version;
    j["rng_id"] = m.rng_identifier;
    j["git_ref"] = m.git_ref;
    j["timestamp"] = m.timestamp;
    j["strict"] = m.strict;
    j["force"] = m.force;
    j["jobs"] = m.jobs;
    j["hash"] = hash_hex(m.hash());
    return j.dump(2) + "\n";
}

int run_simulate(const RunManifest& m) {
    const SolveConfig cfg = m.config.to_solve_config();
    write_manifest_file(m);
    try {
        const Trajectory traj = solve_fully_discrete(cfg);
        const EnergyReport energy = energy_diagnostic(traj, cfg);
        atomic_write(artifact_path(m, "trajectory.csv").string(), trajectory_csv(traj, m.hash()),
                     m.force);
        const int last = traj.n_steps();
        std::cout << "simulate: N = " << cfg.n_modes << ", M = " << cfg.n_steps
                  << ", T = " << short_num(cfg.T) << ", seed = " << cfg.noise.seed << "\n"
                  << "  final |u|_L2 = " << short_num(traj.l2_norm[last])
                  << ", |u|_C^delta = " << short_num(traj.c_delta_norm[last]) << "\n"
                  << "  mild-form residual = " << short_num(traj.mild_residual) << "\n"
                  << "  energy envelope ratio = " << short_num(energy.max_ratio)
                  << (energy.flagged ? "  (EXCEEDED)" : "  (within bound)") << "\n"
                  << "wrote " << artifact_path(m, "trajectory.csv").string() << "\n";
        if (!energy.finite || energy.flagged) {
            std::cout << "[FAIL] energy diagnostic violated the a-priori envelope\n";
            return 2;
        }
        return 0;
    } catch (const BlowupError& e) {
        std::cout << "[FAIL] " << e.what() << "\n";
        return 2;
    }
}

int run_converge_space(const RunManifest& m) {
    const SolveConfig base = m.config.to_solve_config();
    write_manifest_file(m);
    const RateReport rep = space_convergence_study(base, m.config.N_list, m.config.n_seeds,
                                                   std::max(1, m.jobs), false);
    atomic_write(artifact_path(m, "space_rates.csv").string(), rate_study_csv(rep, m.hash()),
                 m.force);
    atomic_write(artifact_path(m, "space_rates.json").string(), rate_study_json(rep, m), m.force);
    print_rate_report(rep);
    std::cout << "wrote " << artifact_path(m, "space_rates.csv").string() << " and .json\n";
    return rep.pass ? 0 : 2;
}

int run_converge_time(const RunManifest& m) {
    const SolveConfig base = m.config.to_solve_config();
    write_manifest_file(m);
    const RateReport rep = time_convergence_study(base, m.config.M_list, m.config.n_seeds,
                                                  std::max(1, m.jobs), false);
    atomic_write(artifact_path(m, "time_rates.csv").string(), rate_study_csv(rep, m.hash()),
                 m.force);
    atomic_write(artifact_path(m, "time_rates.json").string(), rate_study_json(rep, m), m.force);
    print_rate_report(rep);
    std::cout << "wrote " << artifact_path(m, "time_rates.csv").string() << " and .json\n";
    return rep.pass ? 0 : 2;
}

int run_regularity(const RunManifest& m) {
    const SolveConfig base = m.config.to_solve_config();
    write_manifest_file(m);
    const RegularityReport rep =
        path_regularity_study(base, m.config.n_seeds, std::max(1, m.jobs));
    atomic_write(artifact_path(m, "regularity.json").string(), regularity_json(rep, m), m.force);
    std::cout << "path regularity: theory exponent " << short_num(rep.theory) << "\n"
              << "  OU median exponent = "
              << (rep.ou_exponents.empty() ? std::string("n/a (deterministic run)")
                                           : short_num(rep.ou_median))
              << "\n  solution median exponent = " << short_num(rep.solution_median) << "\n"
              << "  " << (rep.pass ? "PASS" : "FAIL") << "\n"
              << "wrote " << artifact_path(m, "regularity.json").string() << "\n";
    return rep.pass ? 0 : 2;
}

// Smoke battery over the library invariants: fast, deterministic re-checks of
// each layer, printed as a table.  Exit 2 when any check fails.
int run_validate(const RunManifest& m) {
    const SolveConfig user_cfg = m.config.to_solve_config();  // throws -> operational error

    struct Row {
        std::string name;
        bool pass;
        std::string note;
    };
    std::vector<Row> rows;
    const auto add = [&rows](const std::string& name, bool pass, const std::string& note) {
        rows.push_back({name, pass, note});
    };

    {  // transform layer: analysis inverts synthesis, quadrature Parseval
        const int n = 64, grid = 2 * 64 + 1;
        Basis basis(n);
        double worst = 0.0;
        for (int field = 1; field <= 20; ++field) {
            SpectralField v(n);
            for (int k = 1; k <= n; ++k)
                v[k - 1] = gaussian(500 + std::uint64_t(field), StreamTag::test, k, 1);
            const GridField g = synthesize(v, basis, grid);
            worst = std::max(worst, (analyze_sine(g, basis) - v).cwiseAbs().maxCoeff());
            worst = std::max(worst, std::abs(std::sqrt(g.squaredNorm() / grid) - v.norm()));
        }
        add("spectral round-trip + Parseval", worst < 1e-10, "max err " + short_num(worst));
    }
    {  // nonlinearity: closed-form image of e_1 and the conservation identity
        const int n = 8, grid = 2 * 2 * n + 1;
        Basis basis(n);
        SpectralField e1 = SpectralField::Zero(n);
        e1[0] = 1.0;
        const SpectralField fe1 = apply_F(e1, Polynomial::burgers(), basis, grid);
        double worst = std::abs(fe1[1] - std::sqrt(2.0) * std::numbers::pi);
        for (int k = 1; k <= n; ++k)
            if (k != 2) worst = std::max(worst, std::abs(fe1[k - 1]));
        double worst_skew = 0.0;
        for (int field = 1; field <= 10; ++field) {
            SpectralField v(n);
            for (int k = 1; k <= n; ++k)
                v[k - 1] = gaussian(600 + std::uint64_t(field), StreamTag::test, k, 1);
            const double skew = std::abs(apply_F(v, Polynomial::burgers(), basis, grid).dot(v));
            worst_skew = std::max(worst_skew, skew / (1.0 + std::pow(v.norm(), 3)));
        }
        add("drift image of e_1 + skew symmetry", worst < 1e-10 && worst_skew < 1e-10,
            "err " + short_num(std::max(worst, worst_skew)));
    }
    {  // noise layer: exact OU variance and bitwise refinement coupling
        const FracParams p{user_cfg.frac.alpha};
        const double T = 0.5;
        const int n_paths = 3000, m_steps = 32;
        Eigen::MatrixXd finals(n_paths, 2);  // modes 1 and 4
        for (int i = 0; i < n_paths; ++i) {
            NoiseSpec spec;
            spec.seed = 9000 + std::uint64_t(i);
            spec.n_modes = 4;
            spec.base_steps = m_steps;
            spec.T = T;
            const OUPath path = generate_ou_path(spec, p, m_steps);
            finals(i, 0) = path.w(m_steps, 0);
            finals(i, 1) = path.w(m_steps, 3);
        }
        double worst = 0.0;
        for (int c = 0; c < 2; ++c) {
            const int k = c == 0 ? 1 : 4;
            const double lam = std::pow(k * std::numbers::pi, user_cfg.frac.alpha);
            const double theory = -std::expm1(-2.0 * lam * T) / (2.0 * lam);
            const double var = finals.col(c).squaredNorm() / n_paths;
            worst = std::max(worst, std::abs(var / theory - 1.0));
        }
        const double band = 3.0 * std::sqrt(2.0 / n_paths);
        NoiseSpec spec;
        spec.seed = 77;
        spec.n_modes = 4;
        spec.base_steps = m_steps;
        spec.T = T;
        const OUPath fine = generate_ou_path(spec, p, m_steps);
        const OUPath coarse = generate_ou_path(spec, p, m_steps / 2);
        double refine = 0.0;
        for (int r = 0; r <= m_steps / 2; ++r)
            refine = std::max(refine, (coarse.w.row(r) - fine.w.row(2 * r)).cwiseAbs().maxCoeff());
        add("OU variance (3 SE) + bitwise refinement", worst < band && refine == 0.0,
            "var dev " + short_num(worst) + " of " + short_num(band));
    }
    {  // semigroup smoothing plateau (library property, pinned alpha = 1.9)
        const FracParams p{1.9};
        bool ok = true;
        double worst = 0.0;
        const struct {
            double beta, t_hi;
        } windows[] = {{1.0, 1e-2}, {0.5, 5e-3}};
        for (const auto& w : windows) {
            const double plateau = std::pow(w.beta / 1.9, w.beta / 1.9) * std::exp(-w.beta / 1.9);
            double lo = plateau, hi = 0.0;
            for (int i = 0; i < 15; ++i) {
                const double t = 1e-6 * std::pow(w.t_hi / 1e-6, i / 14.0);
                const double v = smoothing_constant(t, w.beta, p);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            ok = ok && hi <= plateau * (1.0 + 1e-12) && (hi - lo) / hi < 0.05;
            worst = std::max(worst, (hi - lo) / hi);
        }
        add("semigroup smoothing plateau (< 5%)", ok, "ripple " + short_num(worst));
    }
    {  // projection tails decay at the coefficient-regularity rate
        const int kmax = 512;
        Basis basis(kmax);
        const double gamma = user_cfg.frac.alpha / 2.0, beta = 0.0;
        std::vector<double> fitted;
        for (std::uint64_t field = 1; field <= 8; ++field) {
            SpectralField v(kmax);
            for (int k = 1; k <= kmax; ++k)
                v[k - 1] =
                    std::pow(k, -gamma - 0.51) * gaussian(700 + field, StreamTag::test, k, 1);
            std::vector<double> ns, tails;
            for (int n : {8, 16, 32, 64, 128}) {
                ns.push_back(n);
                tails.push_back(norm_h(v - project(v, n), beta));
            }
            fitted.push_back(-loglog_slope(ns, tails));
        }
        const double med = median(fitted);
        add("projection tail rate", med >= gamma - beta - 0.1,
            "median exponent " + short_num(med) + " vs " + short_num(gamma - beta));
    }
    {  // solver layer: determinism, mild-form identity, energy envelope, OU limit
        SolveConfig cfg;
        cfg.n_modes = 8;
        cfg.n_steps = 64;
        cfg.noise.n_modes = 8;
        cfg.noise.base_steps = 256;
        cfg.noise.T = cfg.T;
        cfg.noise.seed = 21;
        const Trajectory a = solve_fully_discrete(cfg);
        const Trajectory b = solve_fully_discrete(cfg);
        const bool deterministic = (a.states - b.states).cwiseAbs().maxCoeff() == 0.0;
        const EnergyReport energy = energy_diagnostic(a, cfg);

        SolveConfig lin = cfg;
        lin.f = Polynomial({0.0});
        lin.u0 = SpectralField::Zero(8);
        const Trajectory ou = solve_fully_discrete(lin);
        NoiseSpec spec = lin.noise;
        const OUPath path = generate_ou_path(spec, lin.frac, 256);
        double ou_gap = 0.0;
        for (int r = 0; r <= 64; ++r)
            ou_gap = std::max(ou_gap, (ou.states.row(r) - path.w.row(4 * r)).cwiseAbs().maxCoeff());

        add("scheme determinism + mild residual + energy + OU limit",
            deterministic && a.mild_residual <= 1e-10 && energy.finite && !energy.flagged &&
                ou_gap == 0.0,
            "mild " + short_num(a.mild_residual) + ", energy ratio " +
                short_num(energy.max_ratio));
    }
    {  // parameter window report for the configured run (informational)
        const WindowCheck w = validity_window(m.config.alpha, m.config.delta);
        std::ostringstream note;
        note << "nonlinearity " << (w.nonlinearity ? "yes" : "NO") << ", existence "
             << (w.existence ? "yes" : "NO") << ", rate theorem "
             << (w.full_theorem ? "yes" : "NO");
        add("parameter windows (informational)", true, note.str());
    }

    int failed = 0;
    for (const Row& r : rows) {
        if (!r.pass) ++failed;
        std::printf("[%s] %-48s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.note.c_str());
    }
    std::printf("validate: %zu/%zu checks passed\n", rows.size() - std::size_t(failed),
                rows.size());
    return failed == 0 ? 0 : 2;
}

}  // namespace fsb
