// Gradient-form nonlinearity F(u) = d/dx f(u) for a scalar polynomial f,
// evaluated pseudospectrally.  Integration by parts moves the derivative onto
// the test function (boundary terms vanish on the sine basis):
//
//   <F(u), e_j> = -sqrt(2) j pi * integral_0^1 f(u(x)) cos(j pi x) dx
//
// so the recipe is: synthesize u on the G midpoints, apply f pointwise, take
// cosine moments, scale by -sqrt(2) j pi.  With the anti-aliasing contract
// G >= 2 n N + 1 (n = deg f) every cosine frequency of f(u) cos(j pi x) stays
// below 2G and the midpoint rule commits no aliasing error.  Odd-frequency
// sine content of f(u) (present only when f has odd-degree terms) carries an
// O(G^-2) quadrature error instead; the Burgers case f = x^2 is exact.

#pragma once

#include "fsb/spectral_basis.hpp"

#include <vector>

namespace fsb {

struct Polynomial {
    // a[i] multiplies x^i; degree = a.size()-1 after trailing-zero trim.
    std::vector<double> a;

    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs) : a(std::move(coeffs)) {}
    static Polynomial burgers() { return Polynomial({0.0, 0.0, 1.0}); }

    int degree() const;
    bool is_constant() const { return degree() <= 0; }
    double eval(double x) const;  // Horner
    double derivative_eval(double x) const;
};

// P_N F(u); output has basis.n_modes() entries.  grid_size must satisfy
// G >= 2 max(deg f, 1) N + 1 (throws otherwise).  If u_values_out is non-null
// it receives the synthesized point values of u (callers reuse them for
// grid-norm diagnostics).
SpectralField apply_F(const SpectralField& u, const Polynomial& f,
                      const Basis& basis, int grid_size,
                      GridField* u_values_out = nullptr);

struct LipschitzProbe {
    double lhs;        // |F(u) - F(v)|_{H^{-alpha/2}}
    double denom;      // |u - v|_{C^delta} (discrete, on the working grid)
    double ratio;      // lhs / denom
};

// Local Lipschitz quotient of F between two fields inside the C^delta ball of
// radius R (throws if either field exceeds it).  alpha sets the dual norm.
LipschitzProbe local_lipschitz_probe(const SpectralField& u, const SpectralField& v,
                                     const Polynomial& f, double delta, double R,
                                     double alpha, const Basis& basis, int grid_size);

}  // namespace fsb
