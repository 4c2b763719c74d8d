#include "fraclog/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fraclog/errors.hpp"
#include "fraclog/special_functions.hpp"
#include "fraclog/spectral.hpp"

namespace fraclog {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double field_max(const Field& f, const Grid& grid) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t j : grid.interior) m = std::max(m, f.values[j]);
    return m;
}

}  // namespace

// The experiments use lambda a u - b u^p, which is mu u (a - b' u^{p-1}) with mu = lambda and
// b' = b / lambda.

SqueezeTable run_squeeze(double lambda, double p, double alpha, const std::vector<double>& radii, double h_rel,
                         const SqueezeOptions& opts) {
    check_alpha(alpha);
    if (!admissible_p(p, alpha)) {
        std::ostringstream os;
        os << "p=" << p << " is outside the admissible window (" << 1.0 + 2.0 * alpha << ", "
           << (1.0 + alpha) / (1.0 - alpha) << ") for alpha=" << alpha;
        fail(ErrorKind::admissibility, os.str());
    }
    if (!(lambda > 0.0)) fail(ErrorKind::configuration, "lambda must be positive");
    if (!(h_rel > 0.0 && h_rel < 0.5)) fail(ErrorKind::configuration, "h_rel must lie in (0, 1/2)");

    SqueezeTable table{lambda, p, alpha, {}};
    const double target = std::pow(lambda, 1.0 / (p - 1.0));
    for (double R : radii) {
        SqueezeRow row;
        row.R = R;
        row.h = h_rel * R;
        row.target = target;
        try {
            ProblemSpec spec;
            spec.alpha = alpha;
            spec.p = p;
            spec.mu = lambda;
            spec.b = Coefficient::constant(1.0 / lambda);
            spec.grid = build_grid(R, row.h, opts.box_factor * R);
            spec.tol = opts.tol;
            row.grid = spec.grid;
            const std::size_t c = spec.grid.center_index();

            row.mu1 = first_eigenpair(spec.grid, spec.a, alpha).mu1;
            const Bounds bounds = default_bounds(spec);
            SolveReport v = newton_solve(spec, bounds.super);
            if (!v.converged) v = monotone_solve(spec, Start::super);
            if (!v.converged) fail(ErrorKind::numerical, "Dirichlet solve did not converge: " + v.diagnostic);
            row.v = v.solution;
            row.v_center = v.solution.values[c];
            row.v_positive = lambda > row.mu1 && row.v_center > 0.0;
            if (!row.v_positive) row.diagnostic = "lambda <= mu_1(B_R): v_R is identically zero";

            CapSchedule schedule;
            schedule.caps = opts.caps;
            schedule.collar_width = 0.25 * R;
            if (!opts.w_zero_exterior) spec.exterior = ConstantExterior{target};
            const BlowupReport w = solve_blowup(spec, schedule, opts.blowup);
            row.w = w.solve.solution;
            row.w_center = w.solve.solution.values[c];
            row.gap = row.w_center - row.v_center;
            if (!w.stabilized) row.diagnostic += (row.diagnostic.empty() ? "" : "; ") + w.solve.diagnostic;
        } catch (const Error& e) {
            row.failed = true;
            row.v_center = row.w_center = row.gap = nan;
            row.diagnostic = std::string(to_string(e.kind())) + ": " + e.what();
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

BallsResult run_increasing_balls(const Coefficient& a, const Coefficient& b, double lambda, double p, double alpha,
                                 const std::vector<double>& radii, double h, double tol) {
    check_alpha(alpha);
    if (!(a.inf() > 0.0) || !(b.inf() > 0.0)) fail(ErrorKind::configuration, "a and b must be positive");
    if (!(lambda > 0.0) || !(p > 1.0)) fail(ErrorKind::configuration, "lambda must be positive and p > 1");
    for (std::size_t k = 1; k < radii.size(); ++k)
        if (!(radii[k] > radii[k - 1])) fail(ErrorKind::configuration, "radii must be strictly increasing");

    BallsResult out;
    out.h = h;
    out.M0 = std::pow(lambda * a.sup() / b.inf(), 1.0 / (p - 1.0));
    const double slack = 1e-9 * out.M0;
    for (double R : radii) {
        ProblemSpec spec;
        spec.alpha = alpha;
        spec.p = p;
        spec.mu = lambda;
        spec.a = a;
        spec.b = b.scaled(1.0 / lambda);
        spec.tol = tol;
        spec.grid = build_grid(R, h, 2.0 * R);
        SolveReport rep = newton_solve(spec, default_bounds(spec).super);
        if (!rep.converged) rep = monotone_solve(spec, Start::super);
        if (!rep.converged) fail(ErrorKind::numerical, "ball solve did not converge: " + rep.diagnostic);

        const Grid& grid = spec.grid;
        const double top = field_max(rep.solution, grid);
        if (top > out.M0 + slack) {
            std::ostringstream os;
            os << "solution on R=" << R << " exceeds M0=" << out.M0 << " (max " << top << ")";
            fail(ErrorKind::comparison_violation, os.str());
        }
        if (!out.grids.empty()) {
            const Grid& prev = out.grids.back();
            const Field& pu = out.solutions.back();
            for (std::size_t j : prev.interior) {
                const double x = prev.nodes[j];
                const auto k = static_cast<long>(std::lround((x - grid.nodes.front()) / h));
                if (k < 0 || static_cast<std::size_t>(k) >= grid.size() || std::abs(grid.nodes[k] - x) > 1e-9 * h)
                    fail(ErrorKind::configuration, "nested grids do not share nodes; choose radii as multiples of h");
                if (pu.values[j] > rep.solution.values[static_cast<std::size_t>(k)] + slack) {
                    std::ostringstream os;
                    os << "u on R=" << R << " is below the previous ball's solution at x=" << x;
                    fail(ErrorKind::comparison_violation, os.str());
                }
            }
        }
        out.rows.push_back({R, rep.solution.values[grid.center_index()], top, rep.residual_inf});
        out.grids.push_back(grid);
        out.solutions.push_back(std::move(rep.solution));
    }
    return out;
}

TailTable tail_profile(const Field& u, const Grid& grid, double a_inf, double b_inf, double p, double lambda) {
    if (u.values.size() != grid.size()) fail(ErrorKind::configuration, "field does not match grid");
    TailTable t;
    t.target = std::pow(lambda * a_inf / b_inf, 1.0 / (p - 1.0));
    const double R = grid.domain_radius;
    for (std::size_t j : grid.interior) {
        const double x = grid.nodes[j];
        if (x < 0.25 * R || x > 0.5 * R) continue;
        t.rows.push_back({x, u.values[j], std::abs(u.values[j] - t.target)});
    }
    if (!t.rows.empty()) t.deviation_at_max = t.rows.back().deviation;
    return t;
}

}  // namespace fraclog
