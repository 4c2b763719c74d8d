#include <cmath>
#include <random>

#include "doctest.h"
#include "fraclog/spectral.hpp"
#include "oracles.hpp"

using namespace fraclog;

TEST_CASE("first eigenpair on the unit interval") {
    const Grid g = build_grid(1.0, 0.01);
    const EigenPair e = first_eigenpair(g, Coefficient::constant(1.0), 0.5);
    CHECK(e.mu1 > 0.0);
    CHECK(e.residual_inf < 1e-8);
    CHECK(e.asymmetry < 1e-12);
    double top = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (g.is_interior(j))
            CHECK(e.phi1.values[j] > 0.0);
        else
            CHECK(e.phi1.values[j] == 0.0);
        top = std::max(top, e.phi1.values[j]);
    }
    CHECK(top == doctest::Approx(1.0));
}

TEST_CASE("extrapolated eigenvalue matches the known half-Laplacian value") {
    // O(h) convergence: Richardson on h and h/2.
    const double a = first_eigenpair(build_grid(1.0, 0.02), Coefficient::constant(1.0), 0.5).mu1;
    const double b = first_eigenpair(build_grid(1.0, 0.01), Coefficient::constant(1.0), 0.5).mu1;
    const double extrapolated = 2.0 * b - a;
    CHECK(extrapolated == doctest::Approx(2.0 * oracle::pi * oracle::half_laplacian_mu1_normalized).epsilon(0.002));
    CHECK(a < b);
}

TEST_CASE("Rayleigh quotient is minimized by phi") {
    const Grid g = build_grid(1.0, 0.02);
    const std::vector<double> a = sample_interior(Coefficient::bump(1.0, 0.5), g);
    const EigenPair e = first_eigenpair(g, a, 0.4);
    std::vector<double> phi;
    for (std::size_t j : g.interior) phi.push_back(e.phi1.values[j]);
    CHECK(rayleigh_quotient(g, a, 0.4, phi) == doctest::Approx(e.mu1).epsilon(1e-10));

    std::mt19937_64 rng(2);
    std::normal_distribution<double> N(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        std::vector<double> v(phi);
        const double eps = i < 25 ? 0.05 : 1.0;
        for (double& x : v) x += eps * N(rng);
        CHECK(rayleigh_quotient(g, a, 0.4, v) >= e.mu1 * (1.0 - 1e-12));
    }
}

TEST_CASE("weight scaling") {
    const Grid g = build_grid(1.0, 0.02);
    const double m1 = first_eigenpair(g, Coefficient::constant(1.0), 0.3).mu1;
    const double m3 = first_eigenpair(g, Coefficient::constant(3.0), 0.3).mu1;
    CHECK(m3 == doctest::Approx(m1 / 3.0).epsilon(1e-9));
}

TEST_CASE("self-similar scaling") {
    for (double alpha : {0.25, 0.5, 0.75}) {
        const auto rows = eigen_scaling_curve({1.0, 2.0, 4.0, 8.0}, alpha, 1.0 / 50.0);
        REQUIRE(rows.size() == 4);
        for (std::size_t k = 1; k < rows.size(); ++k) {
            CHECK(rows[k].mu1 < rows[k - 1].mu1);
            CHECK(rows[k].mu1_r2alpha == doctest::Approx(rows[0].mu1_r2alpha).epsilon(1e-9));
        }
    }
}

TEST_CASE("bump moving away recovers the constant-weight eigenvalue") {
    const Grid g = build_grid(1.0, 0.02);
    const double base = first_eigenpair(g, Coefficient::constant(1.0), 0.5).mu1;
    double prev = 0.0;
    for (double xn : {0.0, 1.0, 2.0, 5.0, 10.0}) {
        const double m = first_eigenpair(g, Coefficient::bump(1.0, 1.0, xn), 0.5).mu1;
        CHECK(m > prev);
        CHECK(m <= base * (1.0 + 1e-12));
        prev = m;
    }
    CHECK(prev == doctest::Approx(base).epsilon(0.01));
}
