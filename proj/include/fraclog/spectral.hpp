#pragma once

#include <vector>

#include "fraclog/coefficients.hpp"
#include "fraclog/field.hpp"
#include "fraclog/grid.hpp"

namespace fraclog {

struct EigenPair {
    double mu1 = 0.0;
    /// Sup-norm 1, positive on interior nodes, zero on exterior nodes.
    Field phi1;
    int iterations = 0;
    double residual_inf = 0.0;
    /// ||K - K^T||_inf / ||K||_inf of the zero-exterior interior block before symmetrization.
    double asymmetry = 0.0;
};

struct EigenOptions {
    int max_iter = 1000;
    double rayleigh_tol = 1e-10;
    double residual_tol = 1e-8;
};

/**
 * First eigenpair of (-Delta)^alpha phi = mu a phi on the interior with zero exterior.
 *
 * Inverse power iteration on the symmetrized interior block against diag(a), with one
 * Cholesky factorization. Stops once the Rayleigh quotient moves by less than
 * rayleigh_tol (relative) and the residual is below residual_tol.
 */
EigenPair first_eigenpair(const Grid& grid, const std::vector<double>& a, double alpha, const EigenOptions& opts = {});

EigenPair first_eigenpair(const Grid& grid, const Coefficient& a, double alpha, const EigenOptions& opts = {});

/// v^T K_sym v / v^T diag(a) v over interior values v (zero exterior).
double rayleigh_quotient(const Grid& grid, const std::vector<double>& a, double alpha, const std::vector<double>& v);

struct ScalingRow {
    double r = 0.0;
    double mu1 = 0.0;
    double mu1_r2alpha = 0.0;
};

/// mu_1 of the ball of radius r for each radius, on self-similar grids h = h_rel r, L = 2r.
std::vector<ScalingRow> eigen_scaling_curve(const std::vector<double>& radii, double alpha, double h_rel);

}  // namespace fraclog
