#include <cmath>

#include "doctest.h"
#include "fraclog/errors.hpp"
#include "fraclog/experiments.hpp"

using namespace fraclog;

TEST_CASE("squeeze brackets the constant solution") {
    const SqueezeTable t = run_squeeze(16.0, 2.5, 0.5, {2.0, 4.0, 8.0}, 1.0 / 100.0);
    REQUIRE(t.rows.size() == 3);
    double prev_gap = INFINITY;
    for (const SqueezeRow& r : t.rows) {
        CAPTURE(r.R);
        CHECK_FALSE(r.failed);
        CHECK(r.target == doctest::Approx(std::pow(16.0, 1.0 / 1.5)));
        CHECK(r.v_positive);
        CHECK(r.v_center <= r.target);
        CHECK(r.target <= r.w_center);
        CHECK(r.gap < prev_gap);
        prev_gap = r.gap;
        // v <= w everywhere in the ball
        for (std::size_t j : r.grid.interior) CHECK(r.v.values[j] <= r.w.values[j] + 1e-10);
    }
}

TEST_CASE("squeeze flags a vanishing Dirichlet solution") {
    const SqueezeTable t = run_squeeze(1.0, 2.5, 0.5, {2.0, 8.0}, 1.0 / 100.0);
    CHECK_FALSE(t.rows[0].v_positive);
    CHECK(t.rows[0].mu1 > 1.0);
    CHECK(!t.rows[0].diagnostic.empty());
    CHECK(t.rows[1].v_positive);
    CHECK(t.rows[1].v_center <= 1.0);
    CHECK(t.rows[1].w_center >= 1.0);
}

TEST_CASE("squeeze keeps going past a failed row") {
    const SqueezeTable t = run_squeeze(16.0, 2.5, 0.5, {-1.0, 2.0}, 1.0 / 50.0);
    CHECK(t.rows[0].failed);
    CHECK(std::isnan(t.rows[0].gap));
    CHECK(!t.rows[0].diagnostic.empty());
    CHECK_FALSE(t.rows[1].failed);
}

TEST_CASE("squeeze rejects inadmissible p") {
    try {
        run_squeeze(1.0, 2.0, 0.5, {2.0}, 0.01);
        FAIL("expected an admissibility error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::admissibility);
        CHECK(std::string(e.what()).find("admissible window") != std::string::npos);
    }
}

TEST_CASE("zero exterior pulls w below the constant") {
    SqueezeOptions opts;
    opts.w_zero_exterior = true;
    const SqueezeTable zero = run_squeeze(16.0, 2.5, 0.5, {4.0}, 1.0 / 100.0, opts);
    const SqueezeTable full = run_squeeze(16.0, 2.5, 0.5, {4.0}, 1.0 / 100.0);
    CHECK(zero.rows[0].w_center < full.rows[0].w_center);
}

TEST_CASE("increasing balls") {
    const BallsResult r =
        run_increasing_balls(Coefficient::bump(1.0, 1.0), Coefficient::constant(1.0), 1.0, 2.5, 0.5, {2.0, 4.0, 8.0}, 0.02);
    CHECK(r.M0 == doctest::Approx(std::pow(2.0, 1.0 / 1.5)));
    REQUIRE(r.rows.size() == 3);
    for (std::size_t k = 0; k < r.rows.size(); ++k) {
        CHECK(r.rows[k].max <= r.M0);
        if (k > 0) CHECK(r.rows[k].center >= r.rows[k - 1].center - 1e-9);
    }
    CHECK(r.rows.back().center > 0.0);
}

TEST_CASE("swapping the bump between a and b flips the center against the plateau") {
    const double lambda = 16.0, target = std::pow(lambda, 1.0 / 1.5);
    const auto a_bump =
        run_increasing_balls(Coefficient::bump(1.0, 1.0), Coefficient::constant(1.0), lambda, 2.5, 0.5, {4.0, 8.0}, 0.04);
    const auto b_bump =
        run_increasing_balls(Coefficient::constant(1.0), Coefficient::bump(1.0, 1.0), lambda, 2.5, 0.5, {4.0, 8.0}, 0.04);
    CHECK(a_bump.rows.back().center > target);
    CHECK(b_bump.rows.back().center < target);
}

TEST_CASE("nested grids must share nodes") {
    try {
        run_increasing_balls(Coefficient::constant(1.0), Coefficient::constant(1.0), 1.0, 2.5, 0.5, {1.005, 2.0}, 0.01);
        FAIL("expected a configuration error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::configuration);
    }
}

TEST_CASE("tail profile") {
    const Grid g = build_grid(16.0, 0.5);
    Field u{std::vector<double>(g.size(), 0.0), ZeroExterior{}};
    const double target = std::pow(2.0 * 3.0 / 1.5, 1.0 / 1.5);
    for (std::size_t j : g.interior) u.values[j] = target;
    const TailTable t = tail_profile(u, g, 3.0, 1.5, 2.5, 2.0);
    CHECK(t.target == doctest::Approx(target));
    REQUIRE(!t.rows.empty());
    for (const TailRow& r : t.rows) {
        CHECK(r.r >= 4.0);
        CHECK(r.r <= 8.0);
        CHECK(r.deviation == doctest::Approx(0.0));
    }
    CHECK(t.deviation_at_max == t.rows.back().deviation);
}

TEST_CASE("squeeze gap closes at the rescaled radius") {
    // With the unnormalized kernel at alpha = 1/2, lengths stretch by 2 pi relative to the
    // normalized operator, so R = 16 there corresponds to R = 32 pi here.
    const double R = 32.0 * M_PI;
    const SqueezeTable t = run_squeeze(1.0, 2.5, 0.5, {R}, 1.0 / 200.0);
    CHECK(t.rows[0].v_center <= 1.0);
    CHECK(t.rows[0].w_center >= 1.0);
    CHECK(t.rows[0].gap < 0.05);
}
