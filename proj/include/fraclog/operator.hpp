#pragma once

#include <Eigen/Dense>

#include "fraclog/field.hpp"
#include "fraclog/grid.hpp"

namespace fraclog {

/**
 * Dense discrete fractional Laplacian (unnormalized kernel |y|^{-1-2 alpha}).
 *
 * Rows are interior nodes, columns are all box nodes. For a field u that vanishes
 * beyond the box,
 *
 *     (-Delta)^alpha u (x_i) = (A u)_i + tail_diag_i * u_i.
 *
 * A annihilates constants: every row of A sums to zero up to roundoff.
 * Off-diagonal entries are <= 0 and the diagonal is positive.
 */
struct OperatorMatrix {
    Eigen::MatrixXd A;
    Eigen::VectorXd tail_diag;
    double alpha = 0.5;

    /// Interior-by-interior block plus tail_diag on the diagonal: the operator on zero-exterior fields.
    Eigen::MatrixXd interior_block(const Grid& grid) const;
};

OperatorMatrix assemble_operator(const Grid& grid, double alpha);

/// Pointwise evaluation of (-Delta)^alpha u at the interior nodes (in interior order).
Eigen::VectorXd apply_fractional_laplacian(const Field& u, const Grid& grid, double alpha);

/// Same as apply_fractional_laplacian but with a pre-assembled matrix and the exterior law of u.
Eigen::VectorXd apply_operator(const OperatorMatrix& op, const Grid& grid, const Field& u);

/**
 * Discrete source produced by known exterior data: the part of the operator that does not
 * multiply interior unknowns, with the sign flipped. The zero-exterior equation
 * K u = f(u) + s, with K = op.interior_block(grid), is equivalent to the full equation
 * with exterior data g. Exterior box nodes take the values g(x_j).
 */
Eigen::VectorXd exterior_source(const OperatorMatrix& op, const Grid& grid, const ExteriorSpec& g);

/**
 * G(x) = \int_{R \ Omega} g(y) / |x - y|^{1+2 alpha} dy at the interior nodes, by quadrature
 * of the exterior law directly (no grid values involved).
 *
 * The full-line operator applied to the exterior extension of g equals -2 G on the interior,
 * so exterior_source approximates 2 G.
 */
Eigen::VectorXd exterior_contribution(const ExteriorSpec& g, const Grid& grid, double alpha);

struct WeightedL1 {
    double value = 0.0;
    bool finite = true;
};

/// \int_{|y| >= R} g(y) / (1 + |y|^{1+2 alpha}) dy. Divergence is reported in-band.
WeightedL1 weighted_l1(const ExteriorSpec& g, double alpha, double exterior_radius);

/// \int_Y^inf g(x + dir*y) y^{-1-2 alpha} dy for dir = +1 or -1, Y > 0.
double exterior_tail(const ExteriorSpec& g, double x, double Y, double alpha, int dir);

void check_alpha(double alpha);

}  // namespace fraclog
