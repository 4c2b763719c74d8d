#pragma once

namespace fraclog {

/**
 * Barrier integral
 *
 *     C(tau) = \int_0^inf [ chi_{(0,1)}(t) |1-t|^tau + (1+t)^tau - 2 ] / t^{1+2 alpha} dt
 *
 * for tau in (-1, 0). On the half line, (-Delta)^alpha of x_+^tau equals -2 C(tau) x^{tau-2 alpha}
 * in the unnormalized convention, so C > 0 means the power profile is a barrier.
 *
 * Evaluated on (0,1/2] u [1/2,1] u [1,2] u [2,inf) with power substitutions that remove
 * the t^{1-2 alpha} behaviour at 0, the |1-t|^tau spike at 1, and the t^{-1-2 alpha} tail.
 * Absolute error is below 1e-8. Throws a domain error outside tau in (-1,0), alpha in (0,1).
 */
double c_tau(double tau, double alpha);

/// Root of c_tau(., alpha) on [-1+1e-6, -1e-6] by bisection. Equals alpha - 1.
double tau0(double alpha);

/// Strict window 1 + 2 alpha < p < (1 + alpha) / (1 - alpha).
bool admissible_p(double p, double alpha);

/// -2 alpha / (p - 1); lies in (-1, alpha - 1) for admissible p. Throws a domain error otherwise.
double blowup_exponent(double p, double alpha);

/// (ux - uy)^2 - (vy - vx) (uy^2/vy - ux^2/vx), nonnegative for u >= 0, v > 0.
double picone_form(double ux, double uy, double vx, double vy);

/// (1 + alpha)/(1 - alpha) - (N + 2 alpha)/(N - 2 alpha); vanishes exactly at N = 2.
double remark11_gap(int N, double alpha);

struct ExponentBundle {
    double alpha = 0.0;
    double p = 0.0;
    double tau = 0.0;
    double tau0 = 0.0;
    bool admissible = false;
};

/// Collects tau, tau0 and admissibility for (alpha, p). tau0 is alpha - 1 when fast is set,
/// otherwise the bisection root.
ExponentBundle exponents(double alpha, double p, bool fast = false);

/// Leading amplitude kappa of a boundary blow-up profile kappa d^tau for
/// (-Delta)^alpha u = -mu b u^p near the boundary: kappa^{p-1} = 2 C(tau) / (mu b).
double blowup_amplitude(double p, double alpha, double mu, double b);

}  // namespace fraclog
