#pragma once

#include <functional>

namespace fraclog::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_subdivisions = 2000;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 15-point Gauss-Kronrod quadrature on a finite interval.
/// Integrands may have integrable endpoint singularities; the rule never samples
/// the endpoints themselves.
Result integrate(const Integrand& f, double a, double b, const Options& opts = {});

/// Integral over [a, +inf) via the map x = a + t/(1-t).
Result integrate_to_infinity(const Integrand& f, double a, const Options& opts = {});

/// Fixed 10-point Gauss-Legendre rule on [a, b].
double gauss_legendre10(const Integrand& f, double a, double b);

}  // namespace fraclog::quad
