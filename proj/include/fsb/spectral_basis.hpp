// Dirichlet sine basis on (0,1) and dense transforms between spectral
// coefficients and midpoint-grid point values.
//
//   e_k(x) = sqrt(2) sin(k pi x),  k = 1..N,   -d2/dx2 e_k = (k pi)^2 e_k
//
// Grid convention: G midpoints x_j = (j + 1/2)/G, j = 0..G-1.  The midpoint
// rule integrates cos(m pi x) exactly for 0 <= m < 2G, which is what makes
// the sine analysis and the cosine moments alias-free at the grid sizes the
// callers contract to (analysis: G >= 2N+1; nonlinearity: G >= 2nN+1).

#pragma once

#include <Eigen/Dense>

#include <map>
#include <mutex>
#include <utility>

namespace fsb {

// Coefficients c_k against e_k; index k-1 holds mode k.
using SpectralField = Eigen::VectorXd;
// Point values on the G midpoints; the grid size is the vector length.
using GridField = Eigen::VectorXd;

class Basis {
public:
    explicit Basis(int n_modes);

    int n_modes() const { return n_; }
    // lambda_k = (k pi)^2, 1-based k.
    double eigenvalue(int k) const;
    const Eigen::VectorXd& eigenvalues() const { return lambda_; }

    // G x N tables, cached per grid size (thread-safe; all callers share).
    //   sine_table(G)(j, k-1)   = sqrt(2) sin(k pi x_j)
    //   cosine_table(G)(j, k-1) = cos(k pi x_j)
    const Eigen::MatrixXd& sine_table(int grid_size) const;
    const Eigen::MatrixXd& cosine_table(int grid_size) const;

private:
    int n_;
    Eigen::VectorXd lambda_;
    mutable std::mutex mu_;
    mutable std::map<int, std::pair<Eigen::MatrixXd, Eigen::MatrixXd>> tables_;
};

// u(x_j) = sum_k v_k e_k(x_j).  v may have fewer than n_modes entries
// (missing high modes are zero).  Requires grid_size >= 1.
GridField synthesize(const SpectralField& v, const Basis& basis, int grid_size);

// c_k = (1/G) sum_j g_j e_k(x_j), exact inverse of synthesize for sine
// polynomials of degree <= G-N-1.  Requires G >= 2N+1 (else throws).
SpectralField analyze_sine(const GridField& g, const Basis& basis);

// m_j = integral_0^1 g(x) cos(j pi x) dx by the midpoint rule, j = 1..n_moments.
Eigen::VectorXd cosine_moments(const GridField& g, const Basis& basis, int n_moments);

// Discrete check of the basis Holder bound |e_k|_{C^delta} <= c_delta k^delta.
// Returns (lhs, rhs): lhs is the discrete C^delta norm of e_k on a fine grid,
// rhs = c_delta k^delta with c_delta = sqrt(2) + 2^{3/2-delta} pi^delta, which
// follows from |e_k(x)-e_k(y)| <= sqrt(2) min(2, k pi |x-y|) plus the sup part.
std::pair<double, double> holder_seminorm_bound_check(int k, double delta);

}  // namespace fsb
