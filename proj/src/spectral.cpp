#include "fraclog/spectral.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <sstream>

#include "fraclog/errors.hpp"
#include "fraclog/operator.hpp"

namespace fraclog {

namespace {

Eigen::MatrixXd symmetric_block(const Grid& grid, double alpha, double* asymmetry) {
    const OperatorMatrix op = assemble_operator(grid, alpha);
    Eigen::MatrixXd K = op.interior_block(grid);
    const double norm = K.cwiseAbs().rowwise().sum().maxCoeff();
    Eigen::MatrixXd S = 0.5 * (K + K.transpose());
    if (asymmetry) *asymmetry = (K - K.transpose()).cwiseAbs().rowwise().sum().maxCoeff() / norm;
    return S;
}

}  // namespace

EigenPair first_eigenpair(const Grid& grid, const std::vector<double>& a, double alpha, const EigenOptions& opts) {
    check_alpha(alpha);
    const auto m = static_cast<Eigen::Index>(grid.interior_size());
    if (a.size() != grid.interior_size()) fail(ErrorKind::configuration, "weight size does not match interior");
    for (double v : a)
        if (!(v > 0.0)) fail(ErrorKind::domain, "eigenvalue weight must be positive on interior nodes");

    EigenPair out;
    const Eigen::MatrixXd K = symmetric_block(grid, alpha, &out.asymmetry);
    const Eigen::Map<const Eigen::VectorXd> w(a.data(), m);
    const Eigen::LLT<Eigen::MatrixXd> llt(K);
    if (llt.info() != Eigen::Success) fail(ErrorKind::numerical, "interior operator block is not positive definite");

    Eigen::VectorXd x = Eigen::VectorXd::Ones(m);
    double mu = 0.0;
    double residual = 0.0;
    bool done = false;
    int it = 0;
    for (; it < opts.max_iter && !done; ++it) {
        Eigen::VectorXd y = llt.solve(w.cwiseProduct(x));
        y /= y.cwiseAbs().maxCoeff();
        const Eigen::VectorXd Ky = K * y;
        const double next = y.dot(Ky) / y.dot(w.cwiseProduct(y));
        residual = (Ky - next * w.cwiseProduct(y)).cwiseAbs().maxCoeff();
        done = it > 0 && std::abs(next - mu) <= opts.rayleigh_tol * std::abs(next) && residual <= opts.residual_tol;
        mu = next;
        x = std::move(y);
    }
    if (!done) {
        std::ostringstream os;
        os << "inverse power iteration did not converge in " << opts.max_iter << " iterations (residual "
           << residual << ")";
        fail(ErrorKind::numerical, os.str());
    }
    if (x.sum() < 0.0) x = -x;

    out.mu1 = mu;
    out.iterations = it;
    out.residual_inf = residual;
    out.phi1.values.assign(grid.size(), 0.0);
    out.phi1.exterior = ZeroExterior{};
    for (Eigen::Index r = 0; r < m; ++r) out.phi1.values[grid.interior[static_cast<std::size_t>(r)]] = x(r);
    return out;
}

EigenPair first_eigenpair(const Grid& grid, const Coefficient& a, double alpha, const EigenOptions& opts) {
    return first_eigenpair(grid, sample_interior(a, grid), alpha, opts);
}

double rayleigh_quotient(const Grid& grid, const std::vector<double>& a, double alpha, const std::vector<double>& v) {
    const auto m = static_cast<Eigen::Index>(grid.interior_size());
    if (a.size() != grid.interior_size() || v.size() != grid.interior_size())
        fail(ErrorKind::configuration, "vector size does not match interior");
    const Eigen::MatrixXd K = symmetric_block(grid, alpha, nullptr);
    const Eigen::Map<const Eigen::VectorXd> vv(v.data(), m);
    const Eigen::Map<const Eigen::VectorXd> w(a.data(), m);
    return vv.dot(K * vv) / vv.dot(w.cwiseProduct(vv));
}

std::vector<ScalingRow> eigen_scaling_curve(const std::vector<double>& radii, double alpha, double h_rel) {
    check_alpha(alpha);
    for (std::size_t k = 1; k < radii.size(); ++k)
        if (!(radii[k] > radii[k - 1])) fail(ErrorKind::configuration, "radii must be strictly increasing");
    std::vector<ScalingRow> rows;
    for (double r : radii) {
        const Grid grid = build_grid(r, h_rel * r, 2.0 * r);
        const EigenPair ep = first_eigenpair(grid, Coefficient::constant(1.0), alpha);
        rows.push_back({r, ep.mu1, ep.mu1 * std::pow(r, 2.0 * alpha)});
    }
    return rows;
}

}  // namespace fraclog
