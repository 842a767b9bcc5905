#include "fsb/nonlinearity.hpp"

#include "fsb/norms.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fsb {

namespace {
constexpr int kDegreeCap = 8;
}

int Polynomial::degree() const {
    int d = static_cast<int>(a.size()) - 1;
    while (d >= 0 && a[d] == 0.0) --d;
    return d;
}

double Polynomial::eval(double x) const {
    double s = 0.0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) s = s * x + *it;
    return s;
}

double Polynomial::derivative_eval(double x) const {
    double s = 0.0;
    for (int i = static_cast<int>(a.size()) - 1; i >= 1; --i) s = s * x + i * a[i];
    return s;
}

SpectralField apply_F(const SpectralField& u, const Polynomial& f, const Basis& basis,
                      int grid_size, GridField* u_values_out) {
    const int n = basis.n_modes();
    if (u.size() > n) throw std::invalid_argument("apply_F: field has more modes than the basis");
    const int deg = f.degree();
    if (deg > kDegreeCap)
        throw std::invalid_argument("apply_F: polynomial degree exceeds the cap of " +
                                    std::to_string(kDegreeCap));
    const int need = 2 * std::max(deg, 1) * n + 1;
    if (grid_size < need)
        throw std::invalid_argument("apply_F: grid_size " + std::to_string(grid_size) +
                                    " below the alias-free contract " + std::to_string(need));

    const GridField vals = synthesize(u, basis, grid_size);
    if (u_values_out) *u_values_out = vals;
    if (f.is_constant()) return SpectralField::Zero(n);

    GridField fv(grid_size);
    for (int j = 0; j < grid_size; ++j) fv[j] = f.eval(vals[j]);

    const Eigen::VectorXd moments = cosine_moments(fv, basis, n);
    SpectralField r(n);
    for (int j = 1; j <= n; ++j)
        r[j - 1] = -std::numbers::sqrt2 * j * std::numbers::pi * moments[j - 1];
    return r;
}

LipschitzProbe local_lipschitz_probe(const SpectralField& u, const SpectralField& v,
                                     const Polynomial& f, double delta, double R,
                                     double alpha, const Basis& basis, int grid_size) {
    GridField gu, gv;
    const SpectralField fu = apply_F(u, f, basis, grid_size, &gu);
    const SpectralField fv = apply_F(v, f, basis, grid_size, &gv);

    // exhaustive grid Holder norms: the probe grids are small
    const double nu = norm_c_delta(gu, delta, 0).value();
    const double nv = norm_c_delta(gv, delta, 0).value();
    if (nu > R || nv > R)
        throw std::invalid_argument("local_lipschitz_probe: field outside the C^delta ball of radius " +
                                    std::to_string(R));

    LipschitzProbe pr;
    pr.lhs = norm_h(fu - fv, -0.5 * alpha);
    pr.denom = norm_c_delta(gu - gv, delta, 0).value();
    pr.ratio = pr.denom == 0.0
                   ? (pr.lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity())
                   : pr.lhs / pr.denom;
    return pr;
}

}  // namespace fsb
