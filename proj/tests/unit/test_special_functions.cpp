#include <chrono>
#include <cmath>
#include <random>

#include "doctest.h"
#include "fraclog/errors.hpp"
#include "fraclog/special_functions.hpp"
#include "oracles.hpp"

using namespace fraclog;

namespace {

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected a fraclog::Error");
    return ErrorKind::io;
}

}  // namespace

TEST_CASE("c_tau matches an independent quadrature") {
    for (double alpha : {0.25, 0.5, 0.75})
        for (double tau : {-0.95, -0.8, -0.6, -0.4, -0.2, -0.05}) {
            CAPTURE(alpha);
            CAPTURE(tau);
            CHECK(c_tau(tau, alpha) == doctest::Approx(oracle::c_tau(tau, alpha)).epsilon(1e-8));
        }
}

TEST_CASE("c_tau anchors") {
    CHECK(c_tau(-1e-6, 0.5) == doctest::Approx(-1.0).epsilon(1e-3));
    for (double alpha : {0.25, 0.5, 0.75}) {
        CHECK(std::abs(c_tau(-1e-6, alpha) + 0.5 / alpha) < 1e-3);
        CHECK(std::abs(c_tau(alpha - 1.0, alpha)) < 1e-6);
    }
    CHECK(c_tau(-0.9, 0.5) > 0.0);
}

TEST_CASE("c_tau is decreasing up to its root") {
    // Beyond the root, C is monotone only for alpha >= 1/2: dC/dtau at 0- is positive for alpha < 1/2.
    for (double alpha : {0.25, 0.5, 0.75}) {
        const double lo = -1.0 + 1e-3, hi = alpha >= 0.5 ? -1e-3 : alpha - 1.0;
        double prev = c_tau(lo, alpha);
        for (int k = 1; k < 50; ++k) {
            const double tau = lo + (hi - lo) * k / 49.0;
            const double c = c_tau(tau, alpha);
            CHECK(c < prev);
            prev = c;
        }
    }
    CHECK(c_tau(-0.01, 0.25) > c_tau(-0.1, 0.25));
}

TEST_CASE("c_tau domain") {
    CHECK(kind_of([] { c_tau(-1.0, 0.5); }) == ErrorKind::domain);
    CHECK(kind_of([] { c_tau(0.0, 0.5); }) == ErrorKind::domain);
    CHECK(kind_of([] { c_tau(-0.5, 1.0); }) == ErrorKind::domain);
}

TEST_CASE("tau0 is alpha - 1") {
    const auto start = std::chrono::steady_clock::now();
    for (int k = 1; k <= 9; ++k) {
        const double alpha = 0.1 * k;
        const double t = tau0(alpha);
        CHECK(std::abs(t - (alpha - 1.0)) < 1e-4);
        CHECK(std::abs(c_tau(t, alpha)) < 1e-8);
    }
    CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() < 10.0);
}

TEST_CASE("admissible window is strict") {
    CHECK(admissible_p(2.5, 0.5));
    CHECK_FALSE(admissible_p(2.0, 0.5));
    CHECK_FALSE(admissible_p(3.0, 0.5));
    CHECK_FALSE(admissible_p(1.7, 0.25));
    CHECK(admissible_p(1.6, 0.25));
}

TEST_CASE("blowup exponent") {
    CHECK(blowup_exponent(2.5, 0.5) == doctest::Approx(-2.0 / 3.0));
    CHECK(blowup_exponent(4.0, 0.75) == doctest::Approx(-0.5));
    CHECK(blowup_exponent(1.6, 0.25) == doctest::Approx(-5.0 / 6.0));
    CHECK(kind_of([] { blowup_exponent(2.0, 0.5); }) == ErrorKind::domain);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ua(0.05, 0.95), ut(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double alpha = ua(rng);
        const double lo = 1.0 + 2.0 * alpha, hi = (1.0 + alpha) / (1.0 - alpha);
        const double p = lo + (hi - lo) * (0.01 + 0.98 * ut(rng));
        const ExponentBundle e = exponents(alpha, p, true);
        CHECK(e.admissible);
        CHECK(e.tau * p == doctest::Approx(e.tau - 2.0 * alpha).epsilon(1e-12));
        CHECK(e.tau > -1.0);
        CHECK(e.tau < e.tau0);
    }
}

TEST_CASE("picone form") {
    CHECK(std::abs(picone_form(0.7, 2.1, 1.0, 3.0)) < 1e-12);
    CHECK(picone_form(1.0, 0.0, 1.0, 1.0) == doctest::Approx(1.0));
    CHECK(picone_form(2.0, 1.0, 1.0, 2.0) == doctest::Approx(4.5));
    CHECK(kind_of([] { picone_form(1.0, 1.0, 0.0, 1.0); }) == ErrorKind::domain);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0), v(0.1, 1.0);
    for (int i = 0; i < 100000; ++i) {
        const double ux = u(rng), uy = u(rng), vx = v(rng), vy = v(rng);
        REQUIRE(picone_form(ux, uy, vx, vy) >= -1e-12);
        const double k = u(rng) * 3.0;
        REQUIRE(std::abs(picone_form(k * vx, k * vy, vx, vy)) < 1e-12);
    }
}

TEST_CASE("critical dimension gap") {
    CHECK(std::abs(remark11_gap(2, 0.9)) < 1e-12);
    CHECK(remark11_gap(3, 0.5) == doctest::Approx(1.0));
    CHECK(remark11_gap(10, 0.5) == doctest::Approx(16.0 / 9.0));
    CHECK(kind_of([] { remark11_gap(1, 0.5); }) == ErrorKind::domain);
    for (int N = 2; N <= 20; ++N)
        for (int j = 1; j <= 19; ++j) {
            const double g = remark11_gap(N, 0.05 * j);
            if (N == 2)
                CHECK(std::abs(g) < 1e-10);
            else
                CHECK(g > 0.0);
        }
}

TEST_CASE("blow-up amplitude balances the barrier constant") {
    const double tau = blowup_exponent(2.5, 0.5);
    const double kappa = blowup_amplitude(2.5, 0.5, 3.0, 2.0);
    CHECK(std::pow(kappa, 1.5) * 6.0 == doctest::Approx(2.0 * oracle::c_tau(tau, 0.5)).epsilon(1e-7));
}
