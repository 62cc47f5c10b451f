#include "cvop/metrics.hpp"

#include <cmath>

#include "doctest.h"
#include "test_util.hpp"

using namespace cvop;
using cvop::testing::Rng;

namespace {

Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

VRep square_vrep() {
    HPolytope p;
    p.append(Halfspace(v2(1, 0), 0.0));
    p.append(Halfspace(v2(0, 1), 0.0));
    p.append(Halfspace(v2(-1, 0), -1.0));
    p.append(Halfspace(v2(0, -1), -1.0));
    return enumerate_brute(p);
}

std::vector<IterationRecord> synthetic_log(int n, double c, double expnt, double noise_pct,
                                           Rng* rng) {
    std::vector<IterationRecord> log;
    for (int k = 1; k <= n; ++k) {
        IterationRecord r;
        r.k = k;
        double d = c * std::pow(k, expnt);
        if (rng) d *= 1.0 + noise_pct * testing::uniform(*rng, -1.0, 1.0);
        r.max_dist = d;
        r.hausdorff_outer_to_upper = d;
        log.push_back(r);
    }
    return log;
}

}  // namespace

TEST_CASE("hausdorff between nested vertex sets") {
    VRep square = square_vrep();

    SUBCASE("identical sets") {
        CHECK(hausdorff_consecutive(square, square, Norm::L2) == doctest::Approx(0.0));
    }
    SUBCASE("diagonal cut") {
        HPolytope p;
        p.append(Halfspace(v2(1, 0), 0.0));
        p.append(Halfspace(v2(0, 1), 0.0));
        p.append(Halfspace(v2(-1, 0), -1.0));
        p.append(Halfspace(v2(0, -1), -1.0));
        p.append(Halfspace(v2(1, 1), 0.5));
        VRep cut = enumerate_brute(p);
        CHECK(hausdorff_consecutive(square, cut, Norm::L2) ==
              doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(1e-6));
    }
    SUBCASE("axis cut") {
        HPolytope p;
        p.append(Halfspace(v2(1, 0), 0.25));
        p.append(Halfspace(v2(0, 1), 0.0));
        p.append(Halfspace(v2(-1, 0), -1.0));
        p.append(Halfspace(v2(0, -1), -1.0));
        VRep cut = enumerate_brute(p);
        CHECK(hausdorff_consecutive(square, cut, Norm::L2) == doctest::Approx(0.25).epsilon(1e-6));
    }
    SUBCASE("non-nested inputs rejected") {
        VRep big;
        big.vertices = {v2(-1, -1), v2(2, -1), v2(-1, 2), v2(2, 2)};
        big.incidence.resize(4);
        CHECK_THROWS_AS(hausdorff_consecutive(square, big, Norm::L2), ValidationError);
    }
}

TEST_CASE("minimum enclosing ball") {
    SUBCASE("two points") {
        auto [c, r] = min_enclosing_ball({v2(0, 0), v2(2, 0)});
        CHECK(r == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(c[0] == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(std::abs(c[1]) <= 1e-6);
    }
    SUBCASE("unit square") {
        auto [c, r] = min_enclosing_ball(square_vrep().vertices);
        CHECK(r == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-8));
        CHECK(c[0] == doctest::Approx(0.5).epsilon(1e-6));
    }
    SUBCASE("single point") {
        auto [c, r] = min_enclosing_ball({v2(3, 4)});
        CHECK(r == 0.0);
        CHECK(c == v2(3, 4));
    }
    SUBCASE("covering is tight on random clouds") {
        Rng rng(53);
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<Vec> pts;
            for (int i = 0; i < 40; ++i) pts.push_back(testing::random_vec(rng, 3, -2, 2));
            auto [c, r] = min_enclosing_ball(pts);
            double worst = 0.0;
            for (const auto& p : pts) worst = std::max(worst, (p - c).norm());
            CHECK(worst <= r + 1e-12);
            // No single point may be further than r, and shrinking the radius
            // by 1e-6 must lose at least one point.
            int outside = 0;
            for (const auto& p : pts)
                if ((p - c).norm() > r - 1e-6) ++outside;
            CHECK(outside >= 1);
        }
    }
}

TEST_CASE("slope fitting") {
    SUBCASE("exact power law") {
        auto log = synthetic_log(60, 1.5, -2.0, 0.0, nullptr);
        SlopeFit f = fit_slope(log);
        CHECK(f.slope == doctest::Approx(-2.0).epsilon(1e-9));
        CHECK(f.intercept == doctest::Approx(std::log(1.5)).epsilon(1e-9));
        CHECK(f.r2 == doctest::Approx(1.0));
    }
    SUBCASE("noisy power law") {
        Rng rng(59);
        auto log = synthetic_log(300, 25.0, -1.0, 0.01, &rng);
        SlopeFit f = fit_slope(log);
        CHECK(f.slope == doctest::Approx(-1.0).epsilon(0.02));
    }
    SUBCASE("all-zero distances is an error") {
        auto log = synthetic_log(30, 0.0, -1.0, 0.0, nullptr);
        CHECK_THROWS_AS(fit_slope(log), Error);
    }
    SUBCASE("too few records is an error") {
        auto log = synthetic_log(8, 1.0, -1.0, 0.0, nullptr);
        CHECK_THROWS_AS(fit_slope(log), Error);
    }
}

TEST_CASE("theoretical reference curve") {
    CHECK(theoretical_curve(2, true, 1.5, 2.0) == doctest::Approx(0.375));
    CHECK(theoretical_curve(3, true, 2.5, 5.0) == doctest::Approx(0.5));
    CHECK(theoretical_curve(4, true, 4.0, 8.0) == doctest::Approx(1.0));
    CHECK(theoretical_exponent(3, false) == doctest::Approx(-0.5));
    CHECK_THROWS_AS(theoretical_curve(1, true, 1.0, 1.0), ValidationError);
}

TEST_CASE("rate constants") {
    CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
    CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0));

    RateConstants rc = rate_constants(square_vrep().vertices, 2, true);
    CHECK(rc.R == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-7));
    // lambda_bar = 16 R (q pi_q / pi_{q-1})^{2/(q-1)} with q = 2.
    double expect = 16.0 * rc.R * std::pow(2.0 * std::numbers::pi / 2.0, 2.0);
    CHECK(rc.lambda_bar == doctest::Approx(expect).epsilon(1e-9));
    CHECK(rc.theoretical_exponent == doctest::Approx(-2.0));
}

TEST_CASE("log csv round-trip") {
    std::vector<IterationRecord> log;
    IterationRecord a;
    a.k = 0;
    a.max_dist = 0.4142135623730951;
    a.n_vertices = 3;
    a.n_solves = 3;
    a.n_cache_hits = 0;
    a.hausdorff_consecutive = 0.414;
    a.wall_ms = 1.25;
    IterationRecord b;
    b.k = 1;
    b.max_dist = 0.2;
    b.n_vertices = 4;
    b.n_solves = 2;
    b.n_cache_hits = 2;
    b.wall_ms = 0.5;
    log = {a, b};
    std::string csv = log_csv(log);
    CHECK(csv.rfind("k,max_dist,hausdorff_consecutive,n_vertices,n_solves,n_cache_hits,wall_ms\n",
                    0) == 0);
    auto back = parse_log_csv(csv);
    REQUIRE(back.size() == 2);
    CHECK(back[0].max_dist == a.max_dist);
    CHECK(back[0].hausdorff_consecutive.has_value());
    CHECK(!back[1].hausdorff_consecutive.has_value());
    CHECK(back[1].n_cache_hits == 2);

    CHECK_THROWS_AS(parse_log_csv(""), Error);
    CHECK_THROWS_AS(parse_log_csv("nope\n1,2\n"), Error);
    CHECK_THROWS_AS(parse_log_csv("k,max_dist,hausdorff_consecutive,n_vertices,n_solves,n_"
                                  "cache_hits,wall_ms\n1,xyz,,1,1,1,1\n"),
                    Error);
}
