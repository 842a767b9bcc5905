// Report writers.  All writes are atomic (temp file + rename in the target
// directory) and refuse to overwrite existing files unless allow_overwrite,
// so partially-written or silently-clobbered artifacts cannot occur.  Numbers
// are formatted locale-independently as shortest round-trip decimals so that
// reruns stay byte-identical and parsing the CSV recovers the exact doubles.

#pragma once

#include "fsb/config.hpp"
#include "fsb/experiments.hpp"

#include <string>

namespace fsb {

// Atomically writes content; throws std::runtime_error if the file exists and
// !allow_overwrite, or on any filesystem failure.
void atomic_write(const std::string& path, const std::string& content, bool allow_overwrite);

std::string format_double(double x);  // shortest round-trip decimal

// Trajectory CSV: "# manifest=<hex>" comment, header
// m,t,l2_norm,h_alpha2_norm,c_delta_norm, one row per step.
std::string trajectory_csv(const Trajectory& traj, std::uint64_t manifest_hash);

// Study CSV: columns seed,axis_value,error_cdelta,error_l2.
std::string rate_study_csv(const RateReport& r, std::uint64_t manifest_hash);

// JSON summary of a rate study: study, alpha, delta, theory_rate,
// median_slope, per_seed_slopes, pass, rng_id, git_ref, manifest hash.
std::string rate_study_json(const RateReport& r, const RunManifest& m);

std::string regularity_json(const RegularityReport& r, const RunManifest& m);

std::string manifest_json(const RunManifest& m);

}  // namespace fsb
