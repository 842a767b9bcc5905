// Command-line front end: parses a key = value config file, stamps a run
// manifest, and dispatches to the simulate / convergence / regularity /
// validate drivers.  Exit codes: 0 success (and rate-check pass), 2 a
// scientific check failed (rate below theory, blow-up, energy violation),
// 1 operational error (bad config, existing artifacts without --force, ...).

#include "CLI11.hpp"

#include "fsb/config.hpp"

#include <exception>
#include <iostream>
#include <sstream>
#include <string>

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    bool force = false;
    bool strict = false;
    int jobs = 1;
};

void add_common(CLI::App* sub, CommonOpts& o, bool writes_artifacts) {
    sub->add_option("-c,--config", o.config_path,
                    "Config file of 'key = value' lines (defaults used when omitted)");
    sub->add_flag("--strict", o.strict,
                  "Refuse to run when (alpha, delta) lie outside the rate-theorem window");
    if (writes_artifacts) {
        sub->add_option("-o,--out", o.out_dir, "Output directory (default fsb_out/<subcommand>)");
        sub->add_flag("--force", o.force, "Replace existing output files");
        sub->add_option("-j,--jobs", o.jobs, "Worker threads for multi-seed studies")
            ->check(CLI::PositiveNumber);
    }
}

int dispatch(const std::string& name, const CommonOpts& o) {
    const fsb::FileConfig cfg =
        o.config_path.empty() ? fsb::FileConfig{} : fsb::parse_config(o.config_path);
    const bool strict = o.strict || cfg.strict;

    const fsb::WindowCheck window = fsb::validity_window(cfg.alpha, cfg.delta);
    if (!window.full_theorem) {
        if (strict) {
            std::ostringstream os;
            os << "strict mode: parameters outside the convergence-rate window:";
            for (const std::string& v : window.violations) os << "\n  " << v;
            throw std::invalid_argument(os.str());
        }
        std::cerr << "warning: (alpha, delta) outside the convergence-rate window; "
                     "theoretical rates below are extrapolations\n";
        for (const std::string& v : window.violations) std::cerr << "  note: " << v << "\n";
    }

    std::string out = o.out_dir.empty() ? "fsb_out/" + name : o.out_dir;
    fsb::RunManifest m = fsb::make_manifest(name, cfg, o.config_path, out);
    m.strict = strict;
    m.force = o.force;
    m.jobs = o.jobs;

    if (name == "simulate") return fsb::run_simulate(m);
    if (name == "converge-space") return fsb::run_converge_space(m);
    if (name == "converge-time") return fsb::run_converge_time(m);
    if (name == "regularity") return fsb::run_regularity(m);
    return fsb::run_validate(m);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral Galerkin laboratory for a fractional stochastic Burgers equation"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        bool writes;
        CLI::App* cmd = nullptr;
        CommonOpts opts;
    };
    Sub subs[] = {
        {"simulate", "Run one trajectory and write trajectory.csv", true, nullptr, {}},
        {"converge-space", "Coupled-noise spatial refinement study (error vs N)", true, nullptr,
         {}},
        {"converge-time", "Coupled-noise temporal refinement study (error vs dt)", true, nullptr,
         {}},
        {"regularity", "Temporal Hoelder-exponent study of noise and solution paths", true,
         nullptr, {}},
        {"validate", "Fast self-checks of the numerical core (no artifacts)", false, nullptr, {}},
    };
    for (Sub& s : subs) {
        s.cmd = app.add_subcommand(s.name, s.help);
        add_common(s.cmd, s.opts, s.writes);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;  // bad usage is an operational error
    }

    for (const Sub& s : subs) {
        if (!s.cmd->parsed()) continue;
        try {
            return dispatch(s.name, s.opts);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    }
    return 1;  // unreachable: require_subcommand(1)
}
