// Space-time white noise truncated to N sine modes, and the stochastic
// convolution (Ornstein–Uhlenbeck path) the exponential scheme consumes:
//
//   W_k(t_{m+1}) = e^{-lambda dt} W_k(t_m) + eta,   lambda = (k pi)^alpha,
//   eta ~ N(0, (1 - e^{-2 lambda dt}) / (2 lambda)),
//
// which is the exact transition law of dW_k = -lambda W_k dt + d beta_k.
// Paths are always generated at the finest resolution (base_steps, a power of
// two) and coarse requests subsample that path, so refining the step count or
// truncating modes never changes the numbers already drawn: path(M) rows are
// bitwise rows of path(base_steps), and the first N' columns match the
// N'-mode path of the same seed.

#pragma once

#include "fsb/counter_rng.hpp"
#include "fsb/fractional_operator.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace fsb {

struct NoiseSpec {
    std::uint64_t seed = 0;
    int n_modes = 256;
    int base_steps = 8192;  // finest dyadic resolution, power of two
    double T = 0.5;

    void validate() const;  // throws std::invalid_argument on contract breach
};

struct OUPath {
    double T = 0.0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    // (M+1) x N; row m holds W(t_m), row 0 is zero (W(0) = 0).
    Eigen::MatrixXd w;

    int n_steps() const { return static_cast<int>(w.rows()) - 1; }
    int n_modes() const { return static_cast<int>(w.cols()); }
    double dt() const { return T / n_steps(); }
    double t(int m) const { return m * dt(); }
};

// One-step transition of dX = -lambda X dt + d beta: returns (decay, std) with
// decay = e^{-lambda dt}, std = sqrt((1 - e^{-2 lambda dt}) / (2 lambda)).
// Stable for lambda*dt anywhere in [0, inf): uses expm1, and the lambda -> 0
// limit sqrt(dt) comes out exactly.
std::pair<double, double> ou_step_moments(double lambda_alpha, double dt);

// OU path on the coarse grid t_m = m T / n_steps, m = 0..n_steps.  n_steps
// must divide spec.base_steps.  Deterministic in (spec, p.alpha, n_steps).
OUPath generate_ou_path(const NoiseSpec& spec, const FracParams& p, int n_steps);

// Coarse Wiener increments: row m holds beta(t_{m+1}) - beta(t_m) per mode,
// m = 0..n_steps-1, built by summing the fine-step increments in fine order.
Eigen::MatrixXd wiener_increments(const NoiseSpec& spec, int n_steps);

// FNV-1a over (seed, n_modes, base_steps, T, rng_id): reports embed this so
// coupled-noise studies are auditable.
std::uint64_t noise_metadata_hash(const NoiseSpec& spec);

// Raw binary trajectory dump: header of five little-endian 64-bit fields
// (seed u64, N u64, M u64, T f64, alpha f64) then row-major f64 payload of
// (M+1) x N path values.  read round-trips write bit-exactly.
void write_path_dump(std::ostream& os, const OUPath& path);
OUPath read_path_dump(std::istream& is);

}  // namespace fsb
