#include "fraclog/special_functions.hpp"

#include <cmath>
#include <sstream>

#include "fraclog/errors.hpp"
#include "fraclog/operator.hpp"
#include "fraclog/quadrature.hpp"

namespace fraclog {

namespace {

double piece(const quad::Integrand& f, double a, double b) {
    quad::Options opts;
    opts.abs_tol = 1e-13;
    opts.rel_tol = 1e-13;
    opts.max_subdivisions = 4000;
    const auto r = quad::integrate(f, a, b, opts);
    if (!(r.error < 1e-9)) fail(ErrorKind::numerical, "c_tau quadrature did not reach tolerance");
    return r.value;
}

}  // namespace

double c_tau(double tau, double alpha) {
    check_alpha(alpha);
    if (!(tau > -1.0 && tau < 0.0)) {
        std::ostringstream os;
        os << "c_tau requires tau in (-1,0), got " << tau;
        fail(ErrorKind::domain, os.str());
    }
    const double two_a = 2.0 * alpha;

    // (0, 1/2]: t = w^{1/(2-2a)} turns t^{-1-2a} dt into t^{-2} dw / (2-2a).
    const double e0 = 2.0 - two_a;
    const double near_zero = piece(
        [&](double w) {
            const double t = std::pow(w, 1.0 / e0);
            const double c2 = tau * (tau - 1.0);
            if (t < 1e-4) return (c2 + c2 * (tau - 2.0) * (tau - 3.0) / 12.0 * t * t) / e0;
            const double g = std::expm1(tau * std::log1p(-t)) + std::expm1(tau * std::log1p(t));
            return g / (t * t) / e0;
        },
        0.0, std::pow(0.5, e0));

    // [1/2, 1): the spike (1-t)^tau with s = 1 - t = w^{1/(1+tau)}.
    const double e1 = 1.0 + tau;
    const double spike = piece(
        [&](double w) {
            const double s = std::pow(w, 1.0 / e1);
            return std::pow(1.0 - s, -1.0 - two_a) / e1;
        },
        0.0, std::pow(0.5, e1));
    const double smooth_mid =
        piece([&](double t) { return (std::pow(1.0 + t, tau) - 2.0) * std::pow(t, -1.0 - two_a); }, 0.5, 2.0);

    // [2, inf): t = 2 w^{-1/(2a)} makes the kernel weight uniform; the -2 part is exact.
    const double far_scale = std::pow(2.0, -two_a) / two_a;
    const double far = far_scale * (piece(
                                        [&](double w) {
                                            const double t = 2.0 * std::pow(w, -1.0 / two_a);
                                            return std::pow(1.0 + t, tau);
                                        },
                                        0.0, 1.0) -
                                    2.0);
    return near_zero + spike + smooth_mid + far;
}

double tau0(double alpha) {
    check_alpha(alpha);
    double lo = -1.0 + 1e-6;
    double hi = -1e-6;
    double flo = c_tau(lo, alpha);
    const double fhi = c_tau(hi, alpha);
    if (!(flo > 0.0 && fhi < 0.0)) fail(ErrorKind::numerical, "c_tau has no sign change on the tau0 bracket");
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = c_tau(mid, alpha);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

bool admissible_p(double p, double alpha) {
    return alpha > 0.0 && alpha < 1.0 && 1.0 + 2.0 * alpha < p && p < (1.0 + alpha) / (1.0 - alpha);
}

double blowup_exponent(double p, double alpha) {
    if (!admissible_p(p, alpha)) {
        std::ostringstream os;
        os << "p=" << p << " is outside the admissible window (" << 1.0 + 2.0 * alpha << ", "
           << (1.0 + alpha) / (1.0 - alpha) << ") for alpha=" << alpha;
        fail(ErrorKind::domain, os.str());
    }
    return -2.0 * alpha / (p - 1.0);
}

double picone_form(double ux, double uy, double vx, double vy) {
    if (!(vx > 0.0 && vy > 0.0)) fail(ErrorKind::domain, "picone_form requires vx > 0 and vy > 0");
    const double du = ux - uy;
    return du * du - (vy - vx) * (uy * uy / vy - ux * ux / vx);
}

double remark11_gap(int N, double alpha) {
    const double n = static_cast<double>(N);
    if (!(n - 2.0 * alpha > 0.0)) {
        std::ostringstream os;
        os << "remark11_gap requires N > 2 alpha, got N=" << N << ", alpha=" << alpha;
        fail(ErrorKind::domain, os.str());
    }
    return (1.0 + alpha) / (1.0 - alpha) - (n + 2.0 * alpha) / (n - 2.0 * alpha);
}

ExponentBundle exponents(double alpha, double p, bool fast) {
    check_alpha(alpha);
    if (!(p > 1.0)) fail(ErrorKind::domain, "p must exceed 1");
    ExponentBundle e;
    e.alpha = alpha;
    e.p = p;
    e.tau = -2.0 * alpha / (p - 1.0);
    e.tau0 = fast ? alpha - 1.0 : tau0(alpha);
    e.admissible = admissible_p(p, alpha);
    return e;
}

double blowup_amplitude(double p, double alpha, double mu, double b) {
    const double tau = blowup_exponent(p, alpha);
    if (!(mu > 0.0 && b > 0.0)) fail(ErrorKind::domain, "blow-up amplitude needs mu > 0 and b > 0");
    return std::pow(2.0 * c_tau(tau, alpha) / (mu * b), 1.0 / (p - 1.0));
}

}  // namespace fraclog
