#pragma once

#include <string>
#include <vector>

#include "fraclog/blowup.hpp"
#include "fraclog/coefficients.hpp"
#include "fraclog/dirichlet.hpp"
#include "fraclog/grid.hpp"

namespace fraclog {

struct SqueezeOptions {
    std::vector<double> caps{1e1, 1e2, 1e3, 1e4, 1e5, 1e6};
    BlowupOptions blowup;
    double tol = 1e-9;
    /// Box radius as a multiple of R.
    double box_factor = 2.0;
    /// Exterior law of w_R. The comparison v_R <= u <= w_R for the constant entire solution
    /// u = lambda^{1/(p-1)} needs w_R's exterior data to dominate u, so by default w_R takes
    /// that constant outside B_R. Setting this runs w_R with zero exterior instead.
    bool w_zero_exterior = false;
};

/// Center values are taken at the node nearest 0 (grids are offset, so |x| = h/2).
struct SqueezeRow {
    double R = 0.0;
    double h = 0.0;
    double v_center = 0.0;
    double w_center = 0.0;
    double gap = 0.0;
    double target = 0.0;
    /// mu_1 of the ball on this grid; v is identically zero when lambda <= mu_1.
    double mu1 = 0.0;
    bool v_positive = false;
    bool failed = false;
    std::string diagnostic;
    Grid grid;
    Field v;
    Field w;
};

struct SqueezeTable {
    double lambda = 0.0;
    double p = 0.0;
    double alpha = 0.0;
    std::vector<SqueezeRow> rows;
};

/**
 * Per radius: v_R, the zero-exterior Dirichlet solution, and w_R, the large solution (exterior
 * per SqueezeOptions), both for (-Delta)^alpha u = lambda u - u^p on h = h_rel R. A failing inner solve
 * marks its row (NaN values) and the run continues.
 */
SqueezeTable run_squeeze(double lambda, double p, double alpha, const std::vector<double>& radii, double h_rel,
                         const SqueezeOptions& opts = {});

struct BallsRow {
    double R = 0.0;
    double center = 0.0;
    double max = 0.0;
    double residual = 0.0;
};

struct BallsResult {
    double M0 = 0.0;
    double h = 0.0;
    std::vector<BallsRow> rows;
    std::vector<Grid> grids;
    std::vector<Field> solutions;
};

/**
 * Zero-exterior solutions u_n of (-Delta)^alpha u = lambda a u - b u^p on nested balls with a
 * common spacing h, so grids share nodes. Asserts u_n <= u_{n+1} on every shared interior
 * node (comparison_violation) and u_n <= M0 = (lambda sup a / inf b)^{1/(p-1)}.
 */
BallsResult run_increasing_balls(const Coefficient& a, const Coefficient& b, double lambda, double p, double alpha,
                                 const std::vector<double>& radii, double h, double tol = 1e-9);

struct TailRow {
    double r = 0.0;
    double u = 0.0;
    double deviation = 0.0;
};

struct TailTable {
    double target = 0.0;
    std::vector<TailRow> rows;
    /// Deviation at the largest sampled |x|.
    double deviation_at_max = 0.0;
};

/// Rows (|x|, u, |u - (lambda a_inf / b_inf)^{1/(p-1)}|) for nodes x > 0 with |x| in [R/4, R/2].
TailTable tail_profile(const Field& u, const Grid& grid, double a_inf, double b_inf, double p, double lambda = 1.0);

}  // namespace fraclog
