// Spectral calculus of the fractional Dirichlet Laplacian A = -d2/dx2 on (0,1):
// every operator here is a diagonal multiplier on sine coefficients.
//
//   A^{beta/2}        : c_k -> (k pi)^beta c_k
//   e^{-A^{alpha/2} t}: c_k -> exp(-(k pi)^alpha t) c_k
//
// Norm estimates targeting the grid Holder norm C^delta use the fact that the
// discrete C^delta norm is a max of finitely many linear functionals, so the
// operator norm from H^beta is the max over that family of the dual H^beta
// norm — exact for the discrete norm, a lower bound for the continuum one.

#pragma once

#include "fsb/spectral_basis.hpp"

#include <string>

namespace fsb {

struct FracParams {
    double alpha = 1.9;  // dissipation exponent, scheme theory wants (3/2, 2]
};

// Target-norm tag for operator_norm_estimate.
struct NormTarget {
    enum Kind { L2, Hs, Cdelta } kind = L2;
    double exponent = 0.0;  // s for Hs, delta for Cdelta, ignored for L2
    static NormTarget l2() { return {L2, 0.0}; }
    static NormTarget h(double s) { return {Hs, s}; }
    static NormTarget c_delta(double delta) { return {Cdelta, delta}; }
};

// (A^{beta/2} v)_k = (k pi)^beta v_k.  beta may be negative (smoothing).
SpectralField apply_frac_power(const SpectralField& v, double beta, const Basis& basis);

// (e^{-A^{alpha/2} t} v)_k = exp(-(k pi)^alpha t) v_k.  Requires t >= 0;
// t = 0 is the exact identity.
SpectralField apply_semigroup(const SpectralField& v, double t, const FracParams& p);

// Truncation P_N: keep modes 1..n, zero the rest (output length = input length).
SpectralField project(const SpectralField& v, int n);

// Operator norm of e^{-A^{alpha/2} t} : H^beta -> target, restricted to the
// first n_trunc modes (1 <= n_trunc <= 256).  For L2/Hs targets this is the
// exact diagonal max over k; for Cdelta it is the dual-functional max of the
// grid Holder norm (sup + seminorm, all pairs) on a fixed 513-point midpoint
// grid, resolved exactly via |a| + |b| = max_{s=+-1} (a + s b).
// source_exponent is beta (source space H^beta).  Requires t > 0.
double operator_norm_estimate(double source_exponent, const NormTarget& target,
                              double t, const FracParams& p, int n_trunc);

// sup_k (k pi)^beta exp(-(k pi)^alpha t) scaled by t^{beta/alpha}; k unbounded
// (the maximiser k* = (beta/(alpha t))^{1/alpha}/pi is scanned exactly).  The
// smoothing estimate says this is bounded by a t-independent constant.
double smoothing_constant(double t, double beta, const FracParams& p);

// Operator norm of e^{-A^{alpha/2} t} - e^{-A^{alpha/2} s} from H^{-alpha/2}
// to C^delta on the first n_trunc modes (dual-functional max).  Requires
// 0 < s <= t.
double semigroup_difference_norm(double t, double s, double delta,
                                 const FracParams& p, int n_trunc);

}  // namespace fsb
