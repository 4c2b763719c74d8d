#include "fraclog/blowup.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fraclog/errors.hpp"
#include "fraclog/operator.hpp"
#include "fraclog/quadrature.hpp"
#include "fraclog/special_functions.hpp"

namespace fraclog {

namespace {

// Coefficients of the fill polynomial in t = d - delta, constant term first.
std::vector<double> fill_coefficients(double tau, double delta, double R, Fill fill) {
    const double T = R - delta;
    const double l0 = std::pow(delta, tau);
    const double l1 = tau * std::pow(delta, tau - 1.0);
    const double l2 = 0.5 * tau * (tau - 1.0) * std::pow(delta, tau - 2.0);
    if (fill == Fill::cubic) {
        const double c3 = -(l1 + 2.0 * l2 * T) / (3.0 * T * T);
        return {l0, l1, l2, c3};
    }
    const double c3 = tau * (tau - 1.0) * (tau - 2.0) * std::pow(delta, tau - 3.0) / 6.0;
    // l'(T) = 0 and l'''(T) = 0 for c4, c5.
    Eigen::Matrix2d M;
    M << 4.0 * T * T * T, 5.0 * std::pow(T, 4), 24.0 * T, 60.0 * T * T;
    const Eigen::Vector2d rhs(-(l1 + 2.0 * l2 * T + 3.0 * c3 * T * T), -6.0 * c3);
    const Eigen::Vector2d c = M.partialPivLu().solve(rhs);
    return {l0, l1, l2, c3, c(0), c(1)};
}

void check_tau(double tau) {
    if (!(tau > -1.0 && tau < 0.0)) {
        std::ostringstream os;
        os << "tau=" << tau << " is outside (-1, 0)";
        fail(ErrorKind::domain, os.str());
    }
}

struct Profile {
    double R, tau, delta, floor;
    std::vector<double> c;

    double at_distance(double d) const {
        if (d <= 0.0) return 0.0;
        if (d < delta) return std::pow(d, tau);
        const double t = d - delta;
        double v = 0.0;
        for (auto k = c.size(); k-- > 0;) v = v * t + c[k];
        return std::max(v, floor);
    }
    double operator()(double z) const { return at_distance(R - std::abs(z)); }

    /// k-th derivative in d (k = 2 or 4), ignoring the floor.
    double derivative(double d, int k) const {
        if (d < delta) {
            double f = 1.0;
            for (int i = 0; i < k; ++i) f *= tau - i;
            return f * std::pow(d, tau - k);
        }
        const double t = d - delta;
        double v = 0.0;
        for (auto j = c.size(); j-- > static_cast<std::size_t>(k);) {
            double f = 1.0;
            for (int i = 0; i < k; ++i) f *= static_cast<double>(j) - i;
            v = v * t + f * c[j];
        }
        return v;
    }
};

quad::Result checked(quad::Result r) {
    if (!r.converged) fail(ErrorKind::numerical, "barrier quadrature did not reach tolerance");
    return r;
}

// \int_{z0}^{R} (V(z) - v) (z - x)^{-1-2 alpha} dz for z0 > x. The collar part uses
// R - z = w^{1/(1+tau)}, which cancels the d^tau singularity at z = R.
double right_part(const Profile& V, double x, double z0, double alpha) {
    const double R = V.R, tau = V.tau, v = V(x), e = -1.0 - 2.0 * alpha;
    const quad::Options opts{1e-12 * v * std::pow(R - std::abs(x), -2.0 * alpha), 1e-10, 4000};
    double total = 0.0;
    const double zc = std::max(z0, R - V.delta);
    const double b = 1.0 / (1.0 + tau);
    total += checked(quad::integrate(
                         [&](double w) {
                             const double s = std::pow(w, b);
                             const double z = R - s;
                             // dz = b w^{b-1} dw and V(z) = s^tau = w^{b tau}.
                             return (std::pow(w, b * tau) - v) * b * std::pow(w, b - 1.0) * std::pow(z - x, e);
                         },
                         0.0, std::pow(R - zc, 1.0 + tau), opts))
                 .value;
    std::vector<double> cuts{z0};
    for (double k : {-(R - V.delta), 0.0})
        if (k > z0 && k < zc) cuts.push_back(k);
    cuts.push_back(zc);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
        if (cuts[k + 1] > cuts[k])
            total += checked(quad::integrate([&](double z) { return (V(z) - v) * std::pow(z - x, e); }, cuts[k],
                                             cuts[k + 1], opts))
                         .value;
    return total;
}

// -(-Delta)^alpha V at an interior point, by quadrature of the closed-form profile.
double negative_laplacian(const Profile& V, double x, double alpha) {
    const double R = V.R;
    const double d = R - std::abs(x);
    const double rho = 0.5 * d;
    const double v = V(x);
    const double e = -1.0 - 2.0 * alpha;
    const quad::Options opts{1e-12 * v * std::pow(d, -2.0 * alpha), 1e-10, 4000};
    // Below ys the symmetric difference is replaced by its Taylor expansion to avoid cancellation.
    const double ys = 1e-3 * d;
    const double v2 = V.derivative(d, 2), v4 = V.derivative(d, 4);
    double near = v2 * std::pow(ys, 2.0 - 2.0 * alpha) / (2.0 - 2.0 * alpha) +
                  v4 / 12.0 * std::pow(ys, 4.0 - 2.0 * alpha) / (4.0 - 2.0 * alpha);
    near += checked(quad::integrate([&](double y) { return (V(x + y) + V(x - y) - 2.0 * v) * std::pow(y, e); }, ys,
                                    rho, opts))
                .value;
    // V is even, so the left part at x is the right part at -x.
    const double far = right_part(V, x, x + rho, alpha) + right_part(V, -x, -x + rho, alpha);
    const double outside = -v * (std::pow(R - x, -2.0 * alpha) + std::pow(R + x, -2.0 * alpha)) / (2.0 * alpha);
    return 2.0 * (near + far + outside);
}

}  // namespace

BarrierProfile build_v_tau(const Grid& grid, double tau, double delta, Fill fill) {
    check_tau(tau);
    const double R = grid.domain_radius;
    if (!(delta > 0.0 && delta < 0.5 * R)) fail(ErrorKind::configuration, "collar width must lie in (0, R/2)");
    const Profile V{R, tau, delta, 0.5 * std::pow(delta, tau), fill_coefficients(tau, delta, R, fill)};

    BarrierProfile out;
    out.tau = tau;
    out.delta = delta;
    out.fill = fill;
    out.values.exterior = ZeroExterior{};
    out.values.values.assign(grid.size(), 0.0);
    for (std::size_t j : grid.interior) out.values.values[j] = V.at_distance(grid.dist[j]);
    return out;
}

std::vector<RatioRow> barrier_ratio_profile(const Grid& grid, double tau, double alpha, double delta, Fill fill,
                                            double d_min, double d_max) {
    check_alpha(alpha);
    if (d_min < 0.0) d_min = 4.0 * grid.spacing;
    if (d_max < 0.0) d_max = 0.5 * delta;
    check_tau(tau);
    const double R = grid.domain_radius;
    if (!(delta > 0.0 && delta < 0.5 * R)) fail(ErrorKind::configuration, "collar width must lie in (0, R/2)");
    const Profile V{R, tau, delta, 0.5 * std::pow(delta, tau), fill_coefficients(tau, delta, R, fill)};
    std::vector<RatioRow> rows;
    for (std::size_t j : grid.interior) {
        const double d = grid.dist[j];
        if (d < d_min || d > d_max) continue;
        const double x = grid.nodes[j];
        rows.push_back({x, d, negative_laplacian(V, x, alpha) / std::pow(d, tau - 2.0 * alpha)});
    }
    return rows;
}

std::pair<double, double> verify_barrier(const Grid& grid, double tau, double alpha, double delta, Fill fill) {
    const std::vector<RatioRow> rows = barrier_ratio_profile(grid, tau, alpha, delta, fill);
    if (rows.empty()) fail(ErrorKind::insufficient_data, "no collar nodes with d in [4h, delta/2]");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const RatioRow& row : rows) {
        if (!(row.ratio > 0.0) || !std::isfinite(row.ratio)) {
            std::ostringstream os;
            os << "barrier ratio " << row.ratio << " at x=" << row.x << " (d=" << row.d << ")";
            fail(ErrorKind::barrier_violation, os.str());
        }
        lo = std::min(lo, row.ratio);
        hi = std::max(hi, row.ratio);
    }
    return {lo, hi};
}

BlowupReport solve_blowup(const ProblemSpec& spec, const CapSchedule& schedule, const BlowupOptions& opts) {
    check_alpha(spec.alpha);
    if (!admissible_p(spec.p, spec.alpha)) {
        std::ostringstream os;
        os << "p=" << spec.p << " is outside the admissible window (" << 1.0 + 2.0 * spec.alpha << ", "
           << (1.0 + spec.alpha) / (1.0 - spec.alpha) << ") for alpha=" << spec.alpha;
        fail(ErrorKind::admissibility, os.str());
    }
    const Grid& grid = spec.grid;
    const double R = grid.domain_radius;
    if (!weighted_l1(spec.exterior, spec.alpha, R).finite)
        fail(ErrorKind::admissibility, "exterior data " + describe(spec.exterior) + " is not in the weighted L1 space");
    if (schedule.caps.empty()) fail(ErrorKind::configuration, "cap schedule is empty");
    for (std::size_t k = 0; k < schedule.caps.size(); ++k)
        if (!(schedule.caps[k] > 0.0) || (k > 0 && !(schedule.caps[k] > schedule.caps[k - 1])))
            fail(ErrorKind::configuration, "caps must be positive and strictly increasing");
    if (!(schedule.collar_width > 0.0 && schedule.collar_width < 0.5 * R))
        fail(ErrorKind::configuration, "collar width must lie in (0, R/2)");
    if (!(opts.pin_cells > 0.0)) fail(ErrorKind::configuration, "pin_cells must be positive");

    BlowupReport out;
    out.tau = blowup_exponent(spec.p, spec.alpha);
    const double C = c_tau(out.tau, spec.alpha);
    const double q = spec.p - 1.0;
    out.kappa = std::pow(2.0 * C / (spec.mu * spec.b(R)), 1.0 / q);

    PinnedNodes pinned;
    std::vector<double> profile;
    for (std::size_t j : grid.interior) {
        const double d = grid.dist[j];
        if (d < opts.pin_cells * grid.spacing) {
            pinned.nodes.push_back(j);
            const double kappa = std::pow(2.0 * C / (spec.mu * spec.b(grid.nodes[j])), 1.0 / q);
            profile.push_back(kappa * std::pow(d, out.tau));
        }
    }
    if (pinned.nodes.empty()) fail(ErrorKind::configuration, "no interior node lies in the pinned boundary layer");
    auto capped = [&](double m) {
        std::vector<double> v(profile.size());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::min(m, profile[k]);
        return v;
    };
    pinned.values = capped(schedule.caps.front());
    DiscreteProblem problem(spec, pinned);

    double M = 0.0;
    for (Eigen::Index i = 0; i < problem.size(); ++i)
        M = std::max(M, std::pow(std::max(problem.a()(i), 0.0) / problem.b()(i), 1.0 / q));
    Eigen::VectorXd u = Eigen::VectorXd::Constant(problem.size(), std::max(M, problem.data_sup()));
    Eigen::VectorXd prev;

    const std::size_t center = grid.center_index();
    for (std::size_t k = 0; k < schedule.caps.size(); ++k) {
        problem.set_pinned_values(capped(schedule.caps[k]));
        const double tol = opts.rel_tol * (1.0 + problem.source().cwiseAbs().maxCoeff());
        SolveReport rep = newton_solve(problem, u, tol);
        if (!rep.converged) {
            std::ostringstream os;
            os << "Newton failed at cap " << schedule.caps[k] << ": " << rep.diagnostic << " (residual "
               << rep.residual_inf << ")";
            fail(ErrorKind::numerical, os.str());
        }
        const Eigen::VectorXd next = problem.restrict(rep.solution);
        CapStage stage;
        stage.cap = schedule.caps[k];
        stage.center_value = rep.solution.values[center];
        stage.newton_iterations = rep.iterations;
        stage.converged = rep.converged;
        stage.change = std::numeric_limits<double>::infinity();
        if (k > 0) {
            const double scale = std::max(next.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
            const double drop = (prev - next).maxCoeff();
            if (drop > 1e-9 * scale) {
                std::ostringstream os;
                os << "free values decreased by " << drop << " from cap " << schedule.caps[k - 1] << " to "
                   << schedule.caps[k];
                fail(ErrorKind::comparison_violation, os.str());
            }
            stage.change = (next - prev).cwiseAbs().maxCoeff() / scale;
        }
        out.stages.push_back(stage);
        u = next;
        prev = next;
        out.solve = std::move(rep);
        if (stage.change < opts.stabilization_tol) {
            out.stabilized = true;
            break;
        }
    }
    out.solve.iterations = 0;
    for (const CapStage& s : out.stages) out.solve.iterations += s.newton_iterations;
    if (!out.stabilized) out.solve.diagnostic = "cap schedule exhausted before the free values stabilized";
    return out;
}

RateFit fit_boundary_rate(const Field& u, const Grid& grid, double d_min, double d_max) {
    if (u.values.size() != grid.size()) fail(ErrorKind::configuration, "field does not match grid");
    if (!(d_min > 0.0 && d_max > d_min)) fail(ErrorKind::configuration, "fit window must satisfy 0 < d_min < d_max");
    std::vector<double> X, Y;
    for (std::size_t j : grid.interior) {
        const double d = grid.dist[j];
        if (d < d_min || d > d_max) continue;
        if (!(u.values[j] > 0.0)) fail(ErrorKind::domain, "field must be positive inside the fit window");
        X.push_back(std::log(d));
        Y.push_back(std::log(u.values[j]));
    }
    const auto n = static_cast<int>(X.size());
    if (n < 5) {
        std::ostringstream os;
        os << "only " << n << " nodes in the fit window [" << d_min << ", " << d_max << "], need 5";
        fail(ErrorKind::insufficient_data, os.str());
    }
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += X[i];
        my += Y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (X[i] - mx) * (X[i] - mx);
        sxy += (X[i] - mx) * (Y[i] - my);
    }
    RateFit fit;
    fit.samples = n;
    fit.slope = sxy / sxx;
    double sse = 0.0;
    for (int i = 0; i < n; ++i) {
        const double e = Y[i] - my - fit.slope * (X[i] - mx);
        sse += e * e;
    }
    fit.std_error = n > 2 ? std::sqrt(sse / (n - 2) / sxx) : 0.0;
    return fit;
}

}  // namespace fraclog
