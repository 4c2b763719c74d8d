#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fraclog/coefficients.hpp"
#include "fraclog/field.hpp"
#include "fraclog/grid.hpp"
#include "fraclog/operator.hpp"

namespace fraclog {

/// (-Delta)^alpha u = mu u (a - b u^{p-1}) in (-R, R), u = exterior law outside.
struct ProblemSpec {
    double alpha = 0.5;
    double p = 2.5;
    double mu = 1.0;
    Coefficient a = Coefficient::constant(1.0);
    Coefficient b = Coefficient::constant(1.0);
    Grid grid;
    ExteriorSpec exterior = ZeroExterior{};
    /// Converged when the sup-norm residual and (for monotone iteration) the successive-iterate
    /// difference are both below tol.
    double tol = 1e-9;
    /// Successive-iterate sup-norm difference below which iteration stops.
    double step_tol = 1e-14;
    int max_iter = 20000;
};

struct SolveReport {
    Field solution;
    double residual_inf = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<std::pair<double, double>> iterate_extrema;
    std::string diagnostic;
};

/// Interior nodes held at prescribed values (they act like exterior data).
struct PinnedNodes {
    std::vector<std::size_t> nodes;
    std::vector<double> values;
};

/**
 * Discretized problem on the free interior nodes:
 *
 *     F(u) = K u - mu u (a - b u_+^{p-1}) - s = 0,
 *
 * with K the zero-exterior operator block on free nodes and s collecting exterior data
 * and pinned nodes. The operator is assembled once; pinned values can be changed cheaply.
 */
class DiscreteProblem {
public:
    explicit DiscreteProblem(ProblemSpec spec, PinnedNodes pinned = {});

    const ProblemSpec& spec() const noexcept { return spec_; }
    const Eigen::MatrixXd& K() const noexcept { return K_; }
    const Eigen::VectorXd& source() const noexcept { return source_; }
    const std::vector<std::size_t>& free_nodes() const noexcept { return free_; }
    Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(free_.size()); }
    const Eigen::VectorXd& a() const noexcept { return a_; }
    const Eigen::VectorXd& b() const noexcept { return b_; }

    /// Replace pinned values (same nodes) and refresh the source.
    void set_pinned_values(const std::vector<double>& values);

    Eigen::VectorXd nonlinearity(const Eigen::VectorXd& u) const;
    Eigen::VectorXd nonlinearity_derivative(const Eigen::VectorXd& u) const;
    Eigen::VectorXd residual(const Eigen::VectorXd& u) const;

    /// Free-node values of a box field.
    Eigen::VectorXd restrict(const Field& f) const;
    /// Box field: free values, pinned values, and the exterior law on exterior nodes.
    Field to_field(const Eigen::VectorXd& u) const;

    /// Largest exterior or pinned value (0 if none is positive).
    double data_sup() const noexcept { return data_sup_; }

private:
    void refresh_source();

    ProblemSpec spec_;
    PinnedNodes pinned_;
    OperatorMatrix op_;
    std::vector<std::size_t> free_;
    std::vector<long> free_pos_;  // grid index -> free position or -1
    std::vector<std::size_t> pinned_rows_;
    Eigen::MatrixXd K_;
    Eigen::MatrixXd coupling_;  // free rows x pinned columns
    Eigen::VectorXd exterior_part_;
    Eigen::VectorXd source_;
    Eigen::VectorXd a_, b_;
    double data_sup_ = 0.0;
};

struct Bounds {
    Field sub;
    Field super;
    /// Constant value of the super-solution: max(M, sup of exterior data).
    double super_value = 0.0;
    /// max (a/b)^{1/(p-1)} over interior nodes.
    double M = 0.0;
    double epsilon = 0.0;
    double mu1 = 0.0;
    bool positive_sub = false;
    std::string diagnostic;
};

/// Constant super-solution and eps*phi_1 sub-solution; eps starts at M/2 and is halved until the discrete
/// sub-solution inequality holds at every interior node.
Bounds default_bounds(const ProblemSpec& spec);

enum class Start { sub, super };

using IterateObserver = std::function<void(int, const Field&)>;

/**
 * Order-preserving fixed-point iteration
 *
 *     (K + c I) u_{k+1} = c u_k + f(u_k) + s,   c = mu (max a + p max b U^{p-1}),
 *
 * from the sub- or super-solution of default_bounds. Iterates are checked to move
 * monotonically and stay in [0, U]; on a violation c is doubled once, after that a
 * monotonicity_violation error is thrown.
 */
SolveReport monotone_solve(const ProblemSpec& spec, Start start, const IterateObserver& observe = {});
SolveReport monotone_solve(const DiscreteProblem& problem, const Eigen::VectorXd& start, bool from_above,
                           double upper, const IterateObserver& observe = {});

/// Damped Newton with Armijo backtracking on ||F||_2. Falls back to monotone iteration from
/// the super-solution if the Jacobian is numerically singular. A positive tol overrides spec.tol.
SolveReport newton_solve(const ProblemSpec& spec, const Field& init);
SolveReport newton_solve(const DiscreteProblem& problem, const Eigen::VectorXd& init, double tol = -1.0);

/// Nodewise residual F(u) on interior nodes; exterior values come from the problem's ProblemSpec.
Eigen::VectorXd nodal_residual(const DiscreteProblem& problem, const Field& u);

/**
 * Discrete comparison: requires u1 to be a discrete super-solution, u2 a discrete
 * sub-solution (residual signs) and u2 <= u1 on exterior nodes, otherwise throws a
 * precondition error. Returns whether u2 <= u1 + 1e-10 on every interior node.
 */
bool check_comparison(const Field& u1, const Field& u2, const ProblemSpec& spec);

}  // namespace fraclog
