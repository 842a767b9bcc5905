#include "fsb/spectral_basis.hpp"

#include "fsb/norms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fsb {

namespace {
constexpr double pi = std::numbers::pi;
}

Basis::Basis(int n_modes) : n_(n_modes) {
    if (n_modes < 1) throw std::invalid_argument("Basis: n_modes must be >= 1");
    lambda_.resize(n_);
    for (int k = 1; k <= n_; ++k) lambda_[k - 1] = (k * pi) * (k * pi);
}

double Basis::eigenvalue(int k) const {
    if (k < 1 || k > n_) throw std::invalid_argument("Basis::eigenvalue: mode out of range");
    return lambda_[k - 1];
}

const Eigen::MatrixXd& Basis::sine_table(int grid_size) const {
    if (grid_size < 1) throw std::invalid_argument("Basis: grid_size must be >= 1");
    std::lock_guard<std::mutex> lock(mu_);
    auto it = tables_.find(grid_size);
    if (it == tables_.end()) {
        Eigen::MatrixXd s(grid_size, n_), c(grid_size, n_);
        const double root2 = std::sqrt(2.0);
        for (int j = 0; j < grid_size; ++j) {
            const double x = (j + 0.5) / grid_size;
            for (int k = 1; k <= n_; ++k) {
                s(j, k - 1) = root2 * std::sin(k * pi * x);
                c(j, k - 1) = std::cos(k * pi * x);
            }
        }
        it = tables_.emplace(grid_size, std::make_pair(std::move(s), std::move(c))).first;
    }
    return it->second.first;
}

const Eigen::MatrixXd& Basis::cosine_table(int grid_size) const {
    sine_table(grid_size);  // builds both
    std::lock_guard<std::mutex> lock(mu_);
    return tables_.at(grid_size).second;
}

GridField synthesize(const SpectralField& v, const Basis& basis, int grid_size) {
    if (v.size() > basis.n_modes())
        throw std::invalid_argument("synthesize: more coefficients than basis modes");
    const Eigen::MatrixXd& s = basis.sine_table(grid_size);
    if (v.size() == basis.n_modes()) return s * v;
    return s.leftCols(v.size()) * v;
}

SpectralField analyze_sine(const GridField& g, const Basis& basis) {
    const int grid = static_cast<int>(g.size());
    if (grid < 2 * basis.n_modes() + 1)
        throw std::invalid_argument("analyze_sine: grid too small, need G >= 2N+1 (G=" +
                                    std::to_string(grid) + ", N=" +
                                    std::to_string(basis.n_modes()) + ")");
    return basis.sine_table(grid).transpose() * g / grid;
}

Eigen::VectorXd cosine_moments(const GridField& g, const Basis& basis, int n_moments) {
    if (n_moments < 1 || n_moments > basis.n_modes())
        throw std::invalid_argument("cosine_moments: n_moments out of range");
    const int grid = static_cast<int>(g.size());
    const Eigen::MatrixXd& c = basis.cosine_table(grid);
    return c.leftCols(n_moments).transpose() * g / grid;
}

std::pair<double, double> holder_seminorm_bound_check(int k, double delta) {
    if (k < 1) throw std::invalid_argument("holder_seminorm_bound_check: k >= 1");
    if (!(delta > 0.0) || delta > 1.0)
        throw std::invalid_argument("holder_seminorm_bound_check: delta in (0,1]");
    // Fine enough to resolve the k-th mode; exhaustive pair scan.
    const int grid = std::max(65, 8 * k + 1);
    Basis b(k);
    SpectralField v = SpectralField::Zero(k);
    v[k - 1] = 1.0;
    const HolderEstimate est = norm_c_delta(synthesize(v, b, grid), delta, grid - 1);
    const double c_delta = std::sqrt(2.0) + std::pow(2.0, 1.5 - delta) * std::pow(pi, delta);
    return {est.value(), c_delta * std::pow(static_cast<double>(k), delta)};
}

}  // namespace fsb
