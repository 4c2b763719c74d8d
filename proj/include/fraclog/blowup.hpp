#pragma once

#include <utility>
#include <vector>

#include "fraclog/dirichlet.hpp"
#include "fraclog/field.hpp"
#include "fraclog/grid.hpp"

namespace fraclog {

struct CapSchedule {
    std::vector<double> caps;
    /// Collar width delta: barrier collar and outer end (delta/2) of the rate-fit window.
    double collar_width = 0.25;
};

enum class Fill { cubic, quintic };

/// V_tau: d^tau on the collar d < delta, smooth positive fill inside, zero outside.
struct BarrierProfile {
    double tau = 0.0;
    double delta = 0.0;
    Fill fill = Fill::cubic;
    Field values;
};

/**
 * Collar nodes get d^tau. Inside, a polynomial in t = d - delta continues d^tau with
 * matching value, first and second derivative at d = delta and zero slope at the center
 * (cubic), or additionally zero third derivative at the center (quintic). The fill is
 * floored at delta^tau / 2.
 */
BarrierProfile build_v_tau(const Grid& grid, double tau, double delta, Fill fill = Fill::cubic);

struct RatioRow {
    double x = 0.0;
    double d = 0.0;
    /// -(-Delta)^alpha V_tau(x) / d^{tau - 2 alpha}
    double ratio = 0.0;
};

/// Ratio samples at interior nodes with d in [d_min, d_max] (defaults 4h, delta/2).
/// -(-Delta)^alpha V_tau is evaluated by adaptive quadrature of the closed-form profile, not
/// through the grid operator: hat interpolation of the d^tau singularity at the boundary has
/// relative error of order (h/d)^{1+tau}. As d -> 0 the ratio tends to 2 C(tau).
std::vector<RatioRow> barrier_ratio_profile(const Grid& grid, double tau, double alpha, double delta,
                                            Fill fill = Fill::cubic, double d_min = -1.0, double d_max = -1.0);

/// (min, max) of the ratio over the profile; throws barrier_violation if any ratio is not
/// positive and finite, which happens for tau > tau0(alpha).
std::pair<double, double> verify_barrier(const Grid& grid, double tau, double alpha, double delta,
                                         Fill fill = Fill::cubic);

struct BlowupOptions {
    /// Interior nodes with d < pin_cells * h are pinned to min(m_j, kappa d^tau).
    double pin_cells = 2.0;
    /// Stop once the relative sup change of the free values between caps is below this.
    double stabilization_tol = 1e-4;
    /// Newton residual tolerance relative to 1 + ||source||_inf of each stage.
    double rel_tol = 1e-10;
};

struct CapStage {
    double cap = 0.0;
    double center_value = 0.0;
    /// Relative sup change of the free values from the previous stage (inf for the first).
    double change = 0.0;
    int newton_iterations = 0;
    bool converged = false;
};

struct BlowupReport {
    SolveReport solve;
    std::vector<CapStage> stages;
    double tau = 0.0;
    /// Leading amplitude (2 C(tau) / (mu b))^{1/(p-1)} at the boundary.
    double kappa = 0.0;
    bool stabilized = false;
};

/**
 * Large solution as a monotone limit over increasing caps. The boundary layer
 * d < pin_cells * h is held at min(m_j, kappa d^tau); every other interior node solves the
 * Dirichlet problem with the exterior law of spec, by Newton warm-started from the previous
 * cap. Free values must be nondecreasing in j (comparison_violation otherwise).
 */
BlowupReport solve_blowup(const ProblemSpec& spec, const CapSchedule& schedule, const BlowupOptions& opts = {});

struct RateFit {
    double slope = 0.0;
    double std_error = 0.0;
    int samples = 0;
};

/// Least-squares slope of log u against log d over interior nodes with d in [d_min, d_max].
RateFit fit_boundary_rate(const Field& u, const Grid& grid, double d_min, double d_max);

}  // namespace fraclog
