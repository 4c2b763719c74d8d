#include "fraclog/operator.hpp"

#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "fraclog/errors.hpp"
#include "fraclog/quadrature.hpp"

namespace fraclog {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Cell weights of the kernel against the hat functions on [k h, (k+1) h]:
//   w0[k] = \int (1 - theta) y^{-1-2a} dy,  w1[k] = \int theta y^{-1-2a} dy.
// sum_k \int_k^{k+1} (s-k)(k+1-s) s^{-1-2a} ds: the curvature the hat-function
// reconstruction misses on every cell. Folded into the second-difference weight.
double interpolation_defect(double alpha) {
    const double two_a = 2.0 * alpha;
    constexpr int kmax = 4096;
    double sum = 0.0;
    for (int k = kmax; k >= 1; --k) {
        const double kd = k;
        sum += quad::gauss_legendre10(
            [&](double s) { return (s - kd) * (kd + 1.0 - s) * std::pow(s, -1.0 - two_a); }, kd, kd + 1.0);
    }
    // (s-k)(k+1-s) averages 1/6 over a cell.
    return sum + std::pow(kmax + 1.0, -two_a) / (6.0 * two_a);
}

struct CellWeights {
    std::vector<double> w0, w1;
    double near = 0.0;

    CellWeights(std::size_t kmax, double h, double alpha) : w0(kmax + 1, 0.0), w1(kmax + 1, 0.0) {
        const double scale = std::pow(h, -2.0 * alpha);
        const double two_a = 2.0 * alpha;
        near = scale * (1.0 / (1.0 - alpha) - 2.0 * interpolation_defect(alpha));
        const double one_m = 1.0 - two_a;
        for (std::size_t k = 1; k <= kmax; ++k) {
            const double kd = static_cast<double>(k);
            if (k < 64) {
                const double lg = std::log1p(1.0 / kd);
                const double i0 = -std::pow(kd, -two_a) * std::expm1(-two_a * lg) / two_a;
                const double i1 = std::abs(one_m) < 1e-12
                                      ? lg
                                      : std::pow(kd, one_m) * std::expm1(one_m * lg) / one_m;
                w0[k] = scale * ((kd + 1.0) * i0 - i1);
                w1[k] = scale * (i1 - kd * i0);
            } else {
                // Far cells: the integrand is analytic well beyond the cell, so ten Gauss
                // points are exact to rounding and avoid the cancellation above.
                w0[k] = scale * quad::gauss_legendre10(
                                    [&](double s) { return (kd + 1.0 - s) * std::pow(s, -1.0 - two_a); },
                                    kd, kd + 1.0);
                w1[k] = scale * quad::gauss_legendre10(
                                    [&](double s) { return (s - kd) * std::pow(s, -1.0 - two_a); }, kd,
                                    kd + 1.0);
            }
        }
    }
};

// \int_Y^inf F(1/y) y^{-1-beta} dy via y = Y w^{-1/beta}; F receives 1/y so it never overflows.
double power_law_tail(const std::function<double(double)>& F, double Y, double beta) {
    quad::Options opts;
    opts.abs_tol = 1e-15;
    opts.rel_tol = 1e-13;
    auto integrand = [&](double w) { return F(std::pow(w, 1.0 / beta) / Y); };
    const auto r = quad::integrate(integrand, 0.0, 1.0, opts);
    return std::pow(Y, -beta) / beta * r.value;
}

double cosine_tail(double c, double k, double x, double Y, double s, int dir) {
    k = std::abs(k);
    if (k == 0.0) return c * std::pow(Y, 1.0 - s) / (s - 1.0);
    // Rotate [Y, inf) onto the vertical ray Y + i t / k, where e^{iky} decays like e^{-t}.
    quad::Options opts;
    opts.abs_tol = 1e-16;
    opts.rel_tol = 1e-13;
    auto part = [&](bool imag) {
        return quad::integrate(
                   [&](double t) {
                       const std::complex<double> z = std::pow(std::complex<double>(Y, t / k), -s);
                       return std::exp(-t) * (imag ? z.imag() : z.real());
                   },
                   0.0, 60.0, opts)
            .value;
    };
    const std::complex<double> inner(part(false), part(true));
    std::complex<double> J = std::complex<double>(0.0, 1.0 / k) * std::polar(1.0, k * Y) * inner;
    if (dir < 0) J = std::conj(J);
    return c * (std::polar(1.0, k * x) * J).real();
}

// Contributions from beyond the outermost box node on each side (analytic tails and, for
// box-edge interior nodes, the virtual near-field neighbour), for interior node i.
double far_source(const Grid& grid, const CellWeights& cw, const ExteriorSpec& g, double alpha, std::size_t j) {
    const std::size_t n = grid.size();
    const double h = grid.spacing;
    const double x = grid.nodes[j];
    double s = 0.0;
    for (int dir : {-1, 1}) {
        const std::size_t K = dir > 0 ? n - 1 - j : j;
        const double Y = static_cast<double>(std::max<std::size_t>(K, 1)) * h;
        s += 2.0 * exterior_tail(g, x, Y, alpha, dir);
        if (K == 0) s += cw.near * exterior_value(g, x + dir * h);
    }
    return s;
}

}  // namespace

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        std::ostringstream os;
        os << "alpha must lie in (0,1), got " << alpha;
        fail(ErrorKind::domain, os.str());
    }
}

double exterior_tail(const ExteriorSpec& g, double x, double Y, double alpha, int dir) {
    const double two_a = 2.0 * alpha;
    return std::visit(
        overloaded{
            [](const ZeroExterior&) { return 0.0; },
            [&](const ConstantExterior& e) { return e.c * std::pow(Y, -two_a) / two_a; },
            [&](const PowerDecayExterior& e) {
                const double beta = two_a + e.s;
                if (!(beta > 0.0)) {
                    std::ostringstream os;
                    os << "exterior power law |x|^{-s} with s=" << e.s << " is not integrable against the kernel";
                    fail(ErrorKind::admissibility, os.str());
                }
                if (e.c == 0.0) return 0.0;
                // |x + dir y|^{-s} y^{s} = |1 + dir x / y|^{-s}
                return e.c * power_law_tail([&](double r) { return std::pow(std::abs(1.0 + dir * x * r), -e.s); },
                                            Y, beta);
            },
            [&](const GaussianBumpExterior& e) {
                if (e.c == 0.0) return 0.0;
                return power_law_tail(
                    [&](double r) { return r == 0.0 ? 0.0 : exterior_value(e, x + dir / r); }, Y, two_a);
            },
            [&](const CosineExterior& e) { return cosine_tail(e.c, e.k, x, Y, 1.0 + two_a, dir); },
        },
        g);
}

Eigen::MatrixXd OperatorMatrix::interior_block(const Grid& grid) const {
    const auto m = static_cast<Eigen::Index>(grid.interior_size());
    Eigen::MatrixXd K(m, m);
    for (Eigen::Index r = 0; r < m; ++r)
        for (Eigen::Index c = 0; c < m; ++c) K(r, c) = A(r, static_cast<Eigen::Index>(grid.interior[c]));
    K.diagonal() += tail_diag;
    return K;
}

OperatorMatrix assemble_operator(const Grid& grid, double alpha) {
    check_alpha(alpha);
    const std::size_t n = grid.size();
    const double h = grid.spacing;
    const CellWeights cw(n, h, alpha);

    OperatorMatrix op;
    op.alpha = alpha;
    op.A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid.interior_size()), static_cast<Eigen::Index>(n));
    op.tail_diag.resize(static_cast<Eigen::Index>(grid.interior_size()));

    for (std::size_t r = 0; r < grid.interior_size(); ++r) {
        const std::size_t i = grid.interior[r];
        const auto row = static_cast<Eigen::Index>(r);
        double tail = 0.0;
        for (int dir : {-1, 1}) {
            const std::size_t K = dir > 0 ? n - 1 - i : i;
            if (K >= 1) op.A(row, static_cast<Eigen::Index>(i + dir)) -= cw.near;
            for (std::size_t k = 1; k + 1 <= K; ++k) {
                op.A(row, static_cast<Eigen::Index>(i + dir * static_cast<long>(k))) -= 2.0 * cw.w0[k];
                op.A(row, static_cast<Eigen::Index>(i + dir * static_cast<long>(k + 1))) -= 2.0 * cw.w1[k];
            }
            const double Y = static_cast<double>(std::max<std::size_t>(K, 1)) * h;
            tail += std::pow(Y, -2.0 * alpha) / alpha;
        }
        // Diagonal = minus the sum of the off-diagonal couplings plus any virtual neighbours,
        // summed in ascending column order.
        double diag = 0.0;
        for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(n); ++c) diag -= op.A(row, c);
        if (i == 0) diag += cw.near;
        if (i == n - 1) diag += cw.near;
        op.A(row, static_cast<Eigen::Index>(i)) = diag;
        op.tail_diag(row) = tail;
    }
    return op;
}

Eigen::VectorXd apply_fractional_laplacian(const Field& u, const Grid& grid, double alpha) {
    check_alpha(alpha);
    const std::size_t n = grid.size();
    if (u.values.size() != n) fail(ErrorKind::configuration, "field size does not match grid");
    const double h = grid.spacing;
    const CellWeights cw(n, h, alpha);
    const auto& v = u.values;

    Eigen::VectorXd out(static_cast<Eigen::Index>(grid.interior_size()));
    for (std::size_t r = 0; r < grid.interior_size(); ++r) {
        const std::size_t i = grid.interior[r];
        const double ui = v[i];
        double acc = 0.0;
        for (int dir : {-1, 1}) {
            const std::size_t K = dir > 0 ? n - 1 - i : i;
            const double neighbour = K >= 1 ? v[i + dir] : exterior_value(u.exterior, grid.nodes[i] + dir * h);
            acc += cw.near * (ui - neighbour);
            for (std::size_t k = 1; k + 1 <= K; ++k) {
                acc += 2.0 * cw.w0[k] * (ui - v[i + dir * static_cast<long>(k)]);
                acc += 2.0 * cw.w1[k] * (ui - v[i + dir * static_cast<long>(k + 1)]);
            }
            const double Y = static_cast<double>(std::max<std::size_t>(K, 1)) * h;
            acc += 2.0 * (ui * std::pow(Y, -2.0 * alpha) / (2.0 * alpha) -
                          exterior_tail(u.exterior, grid.nodes[i], Y, alpha, dir));
        }
        out(static_cast<Eigen::Index>(r)) = acc;
    }
    return out;
}

Eigen::VectorXd apply_operator(const OperatorMatrix& op, const Grid& grid, const Field& u) {
    const std::size_t n = grid.size();
    if (u.values.size() != n) fail(ErrorKind::configuration, "field size does not match grid");
    const CellWeights cw(1, grid.spacing, op.alpha);
    const Eigen::Map<const Eigen::VectorXd> ub(u.values.data(), static_cast<Eigen::Index>(n));
    Eigen::VectorXd out = op.A * ub;
    for (std::size_t r = 0; r < grid.interior_size(); ++r) {
        const std::size_t i = grid.interior[r];
        out(static_cast<Eigen::Index>(r)) +=
            op.tail_diag(static_cast<Eigen::Index>(r)) * u.values[i] - far_source(grid, cw, u.exterior, op.alpha, i);
    }
    return out;
}

Eigen::VectorXd exterior_source(const OperatorMatrix& op, const Grid& grid, const ExteriorSpec& g) {
    const std::size_t n = grid.size();
    const CellWeights cw(1, grid.spacing, op.alpha);
    Eigen::VectorXd gb = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j)
        if (!grid.is_interior(j)) gb(static_cast<Eigen::Index>(j)) = exterior_value(g, grid.nodes[j]);
    Eigen::VectorXd s = -(op.A * gb);
    for (std::size_t r = 0; r < grid.interior_size(); ++r)
        s(static_cast<Eigen::Index>(r)) += far_source(grid, cw, g, op.alpha, grid.interior[r]);
    return s;
}

Eigen::VectorXd exterior_contribution(const ExteriorSpec& g, const Grid& grid, double alpha) {
    check_alpha(alpha);
    const double R = grid.domain_radius;
    Eigen::VectorXd G(static_cast<Eigen::Index>(grid.interior_size()));
    for (std::size_t r = 0; r < grid.interior_size(); ++r) {
        const double x = grid.nodes[grid.interior[r]];
        G(static_cast<Eigen::Index>(r)) = exterior_tail(g, x, R - x, alpha, 1) + exterior_tail(g, x, R + x, alpha, -1);
    }
    return G;
}

WeightedL1 weighted_l1(const ExteriorSpec& g, double alpha, double exterior_radius) {
    check_alpha(alpha);
    if (!(exterior_radius > 0.0)) fail(ErrorKind::domain, "exterior radius must be positive");
    const double R = exterior_radius;
    const double s = 1.0 + 2.0 * alpha;
    // 1/(1 + y^s) = y^{-s} / (1 + (1/y)^s)
    auto damp = [s](double r) { return 1.0 / (1.0 + std::pow(r, s)); };
    return std::visit(
        overloaded{
            [](const ZeroExterior&) { return WeightedL1{0.0, true}; },
            [&](const ConstantExterior& e) { return WeightedL1{2.0 * e.c * power_law_tail(damp, R, s - 1.0), true}; },
            [&](const PowerDecayExterior& e) {
                const double beta = s - 1.0 + e.s;
                if (!(beta > 0.0)) return WeightedL1{std::numeric_limits<double>::infinity(), false};
                return WeightedL1{2.0 * e.c * power_law_tail(damp, R, beta), true};
            },
            [&](const GaussianBumpExterior& e) {
                quad::Options opts;
                opts.abs_tol = 1e-15;
                const auto r = quad::integrate_to_infinity(
                    [&](double y) { return exterior_value(e, y) / (1.0 + std::pow(y, s)); }, R, opts);
                return WeightedL1{2.0 * r.value, true};
            },
            [&](const CosineExterior& e) {
                const double k = std::abs(e.k);
                auto f = [&](double y) { return e.c * std::cos(k * y) / (1.0 + std::pow(y, s)); };
                if (k == 0.0) return WeightedL1{2.0 * e.c * power_law_tail(damp, R, s - 1.0), true};
                // Alternating half-period pieces, accelerated by repeated averaging of partial sums.
                const double half = M_PI / k;
                double a = R;
                const double first_zero = (std::floor(k * R / M_PI - 0.5) + 1.5) * half;
                quad::Options opts;
                opts.abs_tol = 1e-16;
                double head = quad::integrate(f, a, first_zero, opts).value;
                a = first_zero;
                std::vector<double> partial;
                double run = 0.0;
                for (int m = 0; m < 40; ++m) {
                    run += quad::integrate(f, a + m * half, a + (m + 1) * half, opts).value;
                    partial.push_back(run);
                }
                while (partial.size() > 1) {
                    for (std::size_t m = 0; m + 1 < partial.size(); ++m) partial[m] = 0.5 * (partial[m] + partial[m + 1]);
                    partial.pop_back();
                }
                return WeightedL1{2.0 * (head + partial.front()), true};
            },
        },
        g);
}

}  // namespace fraclog
