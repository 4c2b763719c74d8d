#include "fraclog/dirichlet.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fraclog/errors.hpp"
#include "fraclog/spectral.hpp"

namespace fraclog {

namespace {

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

double exterior_sup(const ExteriorSpec& g, const Grid& grid) {
    if (const auto* e = std::get_if<PowerDecayExterior>(&g); e && e->s < 0.0 && e->c > 0.0)
        return std::numeric_limits<double>::infinity();
    const double R = grid.domain_radius;
    double s = std::max(exterior_value(g, R), exterior_value(g, -R));
    for (std::size_t j = 0; j < grid.size(); ++j)
        if (!grid.is_interior(j)) s = std::max(s, exterior_value(g, grid.nodes[j]));
    if (std::holds_alternative<CosineExterior>(g)) s = std::abs(std::get<CosineExterior>(g).c);
    return std::max(s, 0.0);
}

void validate(const ProblemSpec& spec) {
    check_alpha(spec.alpha);
    if (!(spec.p > 1.0)) fail(ErrorKind::configuration, "p must exceed 1");
    if (!(spec.mu > 0.0)) fail(ErrorKind::configuration, "mu must be positive");
    if (!(spec.b.inf() > 0.0)) fail(ErrorKind::configuration, "b must be bounded below by a positive constant");
    if (spec.grid.interior_size() == 0) fail(ErrorKind::configuration, "grid has no interior nodes");
    if (!(spec.tol > 0.0) || spec.max_iter <= 0) fail(ErrorKind::configuration, "tol and max_iter must be positive");
}

}  // namespace

DiscreteProblem::DiscreteProblem(ProblemSpec spec, PinnedNodes pinned) : spec_(std::move(spec)), pinned_(std::move(pinned)) {
    validate(spec_);
    const Grid& grid = spec_.grid;
    if (pinned_.nodes.size() != pinned_.values.size())
        fail(ErrorKind::configuration, "pinned nodes and values differ in length");

    std::vector<long> interior_pos(grid.size(), -1);
    for (std::size_t r = 0; r < grid.interior.size(); ++r) interior_pos[grid.interior[r]] = static_cast<long>(r);
    std::vector<bool> is_pinned(grid.size(), false);
    for (std::size_t j : pinned_.nodes) {
        if (j >= grid.size() || !grid.is_interior(j)) fail(ErrorKind::configuration, "pinned node is not interior");
        is_pinned[j] = true;
        pinned_rows_.push_back(static_cast<std::size_t>(interior_pos[j]));
    }
    free_pos_.assign(grid.size(), -1);
    std::vector<Eigen::Index> free_rows;
    for (std::size_t r = 0; r < grid.interior.size(); ++r) {
        const std::size_t j = grid.interior[r];
        if (is_pinned[j]) continue;
        free_pos_[j] = static_cast<long>(free_.size());
        free_.push_back(j);
        free_rows.push_back(static_cast<Eigen::Index>(r));
    }
    if (free_.empty()) fail(ErrorKind::configuration, "every interior node is pinned");

    op_ = assemble_operator(grid, spec_.alpha);
    const Eigen::MatrixXd full = op_.interior_block(grid);
    const Eigen::VectorXd ext = exterior_source(op_, grid, spec_.exterior);
    const auto n = static_cast<Eigen::Index>(free_.size());
    K_.resize(n, n);
    exterior_part_.resize(n);
    a_.resize(n);
    b_.resize(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        exterior_part_(r) = ext(free_rows[r]);
        const double x = grid.nodes[free_[static_cast<std::size_t>(r)]];
        a_(r) = spec_.a(x);
        b_(r) = spec_.b(x);
        for (Eigen::Index c = 0; c < n; ++c) K_(r, c) = full(free_rows[r], free_rows[c]);
    }
    // Coupling of free rows to pinned columns, kept for refresh_source.
    coupling_.resize(n, static_cast<Eigen::Index>(pinned_rows_.size()));
    for (Eigen::Index r = 0; r < n; ++r)
        for (std::size_t c = 0; c < pinned_rows_.size(); ++c)
            coupling_(r, static_cast<Eigen::Index>(c)) = full(free_rows[r], static_cast<Eigen::Index>(pinned_rows_[c]));
    refresh_source();
}

void DiscreteProblem::set_pinned_values(const std::vector<double>& values) {
    if (values.size() != pinned_.nodes.size()) fail(ErrorKind::configuration, "pinned value count changed");
    pinned_.values = values;
    refresh_source();
}

void DiscreteProblem::refresh_source() {
    source_ = exterior_part_;
    if (!pinned_.values.empty()) {
        const Eigen::Map<const Eigen::VectorXd> v(pinned_.values.data(), static_cast<Eigen::Index>(pinned_.values.size()));
        source_ -= coupling_ * v;
    }
    data_sup_ = exterior_sup(spec_.exterior, spec_.grid);
    for (double v : pinned_.values) data_sup_ = std::max(data_sup_, v);
}

Eigen::VectorXd DiscreteProblem::nonlinearity(const Eigen::VectorXd& u) const {
    const double q = spec_.p - 1.0;
    Eigen::VectorXd f(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const double up = std::max(u(i), 0.0);
        f(i) = spec_.mu * u(i) * (a_(i) - b_(i) * std::pow(up, q));
    }
    return f;
}

Eigen::VectorXd DiscreteProblem::nonlinearity_derivative(const Eigen::VectorXd& u) const {
    const double q = spec_.p - 1.0;
    Eigen::VectorXd d(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const double up = std::max(u(i), 0.0);
        d(i) = spec_.mu * (a_(i) - spec_.p * b_(i) * std::pow(up, q));
    }
    return d;
}

Eigen::VectorXd DiscreteProblem::residual(const Eigen::VectorXd& u) const { return K_ * u - nonlinearity(u) - source_; }

Eigen::VectorXd DiscreteProblem::restrict(const Field& f) const {
    if (f.values.size() != spec_.grid.size()) fail(ErrorKind::configuration, "field does not match grid");
    Eigen::VectorXd u(size());
    for (std::size_t r = 0; r < free_.size(); ++r) u(static_cast<Eigen::Index>(r)) = f.values[free_[r]];
    return u;
}

Field DiscreteProblem::to_field(const Eigen::VectorXd& u) const {
    const Grid& grid = spec_.grid;
    Field f;
    f.exterior = spec_.exterior;
    f.values.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
        if (!grid.is_interior(j)) f.values[j] = exterior_value(spec_.exterior, grid.nodes[j]);
    for (std::size_t r = 0; r < free_.size(); ++r) f.values[free_[r]] = u(static_cast<Eigen::Index>(r));
    for (std::size_t k = 0; k < pinned_.nodes.size(); ++k) f.values[pinned_.nodes[k]] = pinned_.values[k];
    return f;
}

Eigen::VectorXd nodal_residual(const DiscreteProblem& problem, const Field& u) {
    return problem.residual(problem.restrict(u));
}

Bounds default_bounds(const ProblemSpec& spec) {
    validate(spec);
    const DiscreteProblem problem(spec);
    Bounds out;
    const double q = spec.p - 1.0;
    for (Eigen::Index i = 0; i < problem.size(); ++i)
        out.M = std::max(out.M, std::pow(std::max(problem.a()(i), 0.0) / problem.b()(i), 1.0 / q));
    out.super_value = std::max(out.M, problem.data_sup());
    if (!std::isfinite(out.super_value))
        fail(ErrorKind::configuration, "exterior data is unbounded: no constant super-solution");
    out.super = problem.to_field(Eigen::VectorXd::Constant(problem.size(), out.super_value));
    out.sub = problem.to_field(Eigen::VectorXd::Zero(problem.size()));

    if (problem.a().minCoeff() <= 0.0) {
        out.diagnostic = "a is not positive on every interior node: zero sub-solution";
        return out;
    }
    const EigenPair ep = first_eigenpair(spec.grid, spec.a, spec.alpha);
    out.mu1 = ep.mu1;
    if (!(spec.mu > ep.mu1)) {
        out.diagnostic = "mu <= mu_1: zero sub-solution";
        return out;
    }
    const Eigen::VectorXd phi = problem.restrict(ep.phi1);
    double eps = 0.5 * out.M;
    for (int k = 0; k < 200; ++k, eps *= 0.5) {
        const Eigen::VectorXd r = problem.residual(eps * phi);
        // Roundoff floor relative to the size of K phi.
        const double floor = 1e-12 * eps * inf_norm(problem.K() * phi);
        if (r.maxCoeff() <= floor) {
            out.epsilon = eps;
            out.positive_sub = true;
            out.sub = problem.to_field(eps * phi);
            return out;
        }
    }
    out.diagnostic = "no eps in [2^-200, 1] makes eps*phi_1 a discrete sub-solution: zero sub-solution";
    return out;
}

SolveReport monotone_solve(const DiscreteProblem& problem, const Eigen::VectorXd& start, bool from_above, double upper,
                           const IterateObserver& observe) {
    const ProblemSpec& spec = problem.spec();
    if (start.size() != problem.size()) fail(ErrorKind::configuration, "start vector does not match free nodes");
    if (!std::isfinite(upper) || upper < 0.0) fail(ErrorKind::configuration, "upper bound must be finite and >= 0");

    const double slack = 1e-9 * std::max(1.0, upper);
    double c = spec.mu * (std::max(problem.a().maxCoeff(), 0.0) +
                          spec.p * problem.b().maxCoeff() * std::pow(upper, spec.p - 1.0));
    c = std::max(c, 1e-12);

    for (int attempt = 0; attempt < 2; ++attempt, c *= 2.0) {
        const Eigen::MatrixXd M = problem.K() + c * Eigen::MatrixXd::Identity(problem.size(), problem.size());
        const Eigen::LLT<Eigen::MatrixXd> llt(M);
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu = llt.info() == Eigen::Success
                                                            ? Eigen::PartialPivLU<Eigen::MatrixXd>()
                                                            : Eigen::PartialPivLU<Eigen::MatrixXd>(M);
        auto solve = [&](const Eigen::VectorXd& rhs) -> Eigen::VectorXd {
            return llt.info() == Eigen::Success ? Eigen::VectorXd(llt.solve(rhs)) : Eigen::VectorXd(lu.solve(rhs));
        };

        SolveReport rep;
        Eigen::VectorXd u = start;
        bool violated = false;
        std::string what;
        int k = 0;
        double res = inf_norm(problem.residual(u));
        double step = std::numeric_limits<double>::infinity();
        while (k < spec.max_iter && !(res <= spec.tol && (k == 0 || step < spec.tol))) {
            Eigen::VectorXd next = solve(c * u + problem.nonlinearity(u) + problem.source());
            ++k;
            const double move = from_above ? (next - u).maxCoeff() : (u - next).maxCoeff();
            if (move > slack || next.minCoeff() < -slack || next.maxCoeff() > upper + slack) {
                std::ostringstream os;
                os << "iterate " << k << " left the order interval or moved the wrong way (by "
                   << std::max({move, -next.minCoeff(), next.maxCoeff() - upper}) << ", shift c=" << c << ")";
                what = os.str();
                violated = true;
                break;
            }
            step = inf_norm(next - u);
            u = std::move(next);
            rep.iterate_extrema.emplace_back(u.minCoeff(), u.maxCoeff());
            if (observe) observe(k, problem.to_field(u));
            res = inf_norm(problem.residual(u));
            if (step < spec.step_tol) break;
        }
        if (violated) {
            if (attempt == 0) continue;
            fail(ErrorKind::monotonicity_violation, what);
        }
        rep.solution = problem.to_field(u);
        rep.iterations = k;
        rep.residual_inf = res;
        rep.converged = res <= spec.tol && (k == 0 || step < spec.tol);
        if (!rep.converged) {
            std::ostringstream os;
            os << "stopped after " << k << " iterations with residual " << res;
            rep.diagnostic = os.str();
        }
        if (attempt == 1) rep.diagnostic += (rep.diagnostic.empty() ? "" : "; ") + std::string("shift doubled once");
        return rep;
    }
    fail(ErrorKind::numerical, "unreachable");
}

SolveReport monotone_solve(const ProblemSpec& spec, Start start, const IterateObserver& observe) {
    const Bounds bounds = default_bounds(spec);
    const DiscreteProblem problem(spec);
    const bool above = start == Start::super;
    SolveReport rep = monotone_solve(problem, problem.restrict(above ? bounds.super : bounds.sub), above,
                                     bounds.super_value, observe);
    if (!bounds.diagnostic.empty() && !above)
        rep.diagnostic = bounds.diagnostic + (rep.diagnostic.empty() ? "" : "; " + rep.diagnostic);
    return rep;
}

SolveReport newton_solve(const DiscreteProblem& problem, const Eigen::VectorXd& init, double tol) {
    const ProblemSpec& spec = problem.spec();
    if (!(tol > 0.0)) tol = spec.tol;
    if (init.size() != problem.size()) fail(ErrorKind::configuration, "initial vector does not match free nodes");
    constexpr int max_newton = 200;
    SolveReport rep;
    Eigen::VectorXd u = init;
    Eigen::VectorXd F = problem.residual(u);
    double merit = F.norm();
    int it = 0;
    for (; it < max_newton && inf_norm(F) > tol; ++it) {
        Eigen::MatrixXd J = problem.K();
        J.diagonal() -= problem.nonlinearity_derivative(u);
        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
        if (!(lu.rcond() > 1e-14)) {
            const double upper = std::max(problem.data_sup(), [&] {
                double M = 0.0;
                for (Eigen::Index i = 0; i < problem.size(); ++i)
                    M = std::max(M, std::pow(std::max(problem.a()(i), 0.0) / problem.b()(i), 1.0 / (spec.p - 1.0)));
                return M;
            }());
            SolveReport fb = monotone_solve(problem, Eigen::VectorXd::Constant(problem.size(), upper), true, upper);
            fb.diagnostic = "singular Jacobian at Newton step " + std::to_string(it) + ": fell back to monotone iteration" +
                            (fb.diagnostic.empty() ? "" : "; " + fb.diagnostic);
            return fb;
        }
        const Eigen::VectorXd delta = lu.solve(-F);
        double t = 1.0;
        bool accepted = false;
        for (; t > 1e-12; t *= 0.5) {
            const Eigen::VectorXd trial = u + t * delta;
            const Eigen::VectorXd Ft = problem.residual(trial);
            if (Ft.norm() <= (1.0 - 1e-4 * t) * merit) {
                u = trial;
                F = Ft;
                merit = F.norm();
                accepted = true;
                break;
            }
        }
        rep.iterate_extrema.emplace_back(u.minCoeff(), u.maxCoeff());
        if (!accepted) {
            rep.diagnostic = "line search failed at Newton step " + std::to_string(it);
            ++it;
            break;
        }
    }
    rep.solution = problem.to_field(u);
    rep.iterations = it;
    rep.residual_inf = inf_norm(F);
    rep.converged = rep.residual_inf <= tol;
    if (!rep.converged && rep.diagnostic.empty()) rep.diagnostic = "Newton iteration limit reached";
    return rep;
}

SolveReport newton_solve(const ProblemSpec& spec, const Field& init) {
    const DiscreteProblem problem(spec);
    return newton_solve(problem, problem.restrict(init));
}

bool check_comparison(const Field& u1, const Field& u2, const ProblemSpec& spec) {
    const DiscreteProblem problem(spec);
    const Grid& grid = spec.grid;
    if (u1.values.size() != grid.size() || u2.values.size() != grid.size())
        fail(ErrorKind::configuration, "fields do not match grid");
    for (std::size_t j = 0; j < grid.size(); ++j)
        if (!grid.is_interior(j) && u2.values[j] > u1.values[j] + 1e-12)
            fail(ErrorKind::precondition, "u2 exceeds u1 on an exterior node");

    const Eigen::VectorXd v1 = problem.restrict(u1);
    const Eigen::VectorXd v2 = problem.restrict(u2);
    const double kn = problem.K().cwiseAbs().rowwise().sum().maxCoeff();
    const double slack = 1e-10 * (1.0 + kn * std::max(inf_norm(v1), inf_norm(v2)));
    if (problem.residual(v1).minCoeff() < -slack) fail(ErrorKind::precondition, "u1 is not a discrete super-solution");
    if (problem.residual(v2).maxCoeff() > slack) fail(ErrorKind::precondition, "u2 is not a discrete sub-solution");
    return (v2 - v1).maxCoeff() <= 1e-10;
}

}  // namespace fraclog
