// Run configuration: UTF-8 "key = value" text files (lists comma-separated,
// '#' comments), defaults matching the headline setup alpha = 1.9, delta = 0.1,
// f = x^2, u0 = e_1, T = 0.5.  A RunManifest freezes everything that went into
// a run — resolved config, subcommand, rng id, git ref — and hashes it
// (timestamp excluded) so outputs can assert "same manifest => same bytes".

#pragma once

#include "fsb/experiments.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fsb {

struct FileConfig {
    double alpha = 1.9;
    double delta = 0.1;
    std::vector<double> poly_coeffs = {0.0, 0.0, 1.0};  // f = x^2
    int u0_mode = 1;                        // u0 = e_{u0_mode} ...
    std::vector<double> u0_coeffs;          // ...unless explicit coefficients given
    double T = 0.5;
    int N = 256;
    int M = 8192;
    int M_base = 8192;
    int G = 0;                              // 0 -> auto 2*deg*N+1
    std::uint64_t seed = 0;
    int n_seeds = 8;
    std::vector<int> N_list = {8, 16, 32, 64};
    std::vector<int> M_list = {32, 64, 128, 256, 512, 1024};
    int lag_cap = 64;
    bool strict = false;
    double blowup_threshold = 1e8;

    SolveConfig to_solve_config() const;
};

// Parses path (missing keys keep defaults; empty file = all defaults).
// Unknown keys, malformed numbers and malformed lists throw
// std::invalid_argument naming the key and line number.
FileConfig parse_config(const std::string& path);
FileConfig parse_config_text(const std::string& text, const std::string& origin);

struct RunManifest {
    std::string subcommand;
    std::string config_path;     // "" when defaults only
    FileConfig config;
    std::string output_dir;
    std::string tool_version;
    std::string rng_identifier;
    std::string git_ref;
    std::string timestamp;       // ISO-8601, excluded from the hash
    bool strict = false;
    bool force = false;
    int jobs = 1;

    // FNV-1a over the canonical serialization.  timestamp, force and jobs are
    // excluded: they are run bookkeeping and do not influence the numbers.
    std::uint64_t hash() const;
    std::string canonical_text() const;  // what the hash covers
};

RunManifest make_manifest(const std::string& subcommand, const FileConfig& cfg,
                          const std::string& config_path, const std::string& output_dir);

inline const char* tool_version() { return "0.1.0"; }
const char* build_git_ref();

// Subcommand drivers used by the CLI front-end.  Return process exit codes:
// 0 success, 2 scientific failure (a rate assertion did not hold), 1
// operational error (bad config, refused overwrite, ...).  Operational errors
// surface as exceptions; the CLI maps them to exit 1.
int run_simulate(const RunManifest& m);
int run_converge_space(const RunManifest& m);
int run_converge_time(const RunManifest& m);
int run_regularity(const RunManifest& m);
int run_validate(const RunManifest& m);

}  // namespace fsb
