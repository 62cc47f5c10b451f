#include "cvop/vertex_enum.hpp"

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

HPolytope unit_square() {
    HPolytope p;
    p.append(Halfspace(v2(1, 0), 0.0));
    p.append(Halfspace(v2(0, 1), 0.0));
    p.append(Halfspace(v2(-1, 0), -1.0));
    p.append(Halfspace(v2(0, -1), -1.0));
    return p;
}

bool has_vertex(const VRep& v, const Vec& target, double tol = 1e-9) {
    for (const auto& y : v.vertices)
        if ((y - target).lpNorm<Eigen::Infinity>() <= tol) return true;
    return false;
}

}  // namespace

TEST_CASE("brute enumeration of the unit square") {
    VRep v = enumerate_brute(unit_square());
    REQUIRE(v.size() == 4);
    for (auto target : {v2(0, 0), v2(1, 0), v2(0, 1), v2(1, 1)}) CHECK(has_vertex(v, target));
    for (const auto& inc : v.incidence) CHECK(inc.size() >= 2);
}

TEST_CASE("square cut by y1+y2 >= 0.5") {
    HPolytope p = unit_square();
    p.append(Halfspace(v2(1, 1), 0.5));
    VRep v = enumerate_brute(p);
    REQUIRE(v.size() == 5);
    for (auto target : {v2(0.5, 0), v2(1, 0), v2(1, 1), v2(0, 1), v2(0, 0.5)})
        CHECK(has_vertex(v, target));
}

TEST_CASE("infeasible system reports empty") {
    HPolytope p;
    Vec e1 = v2(1, 0);
    p.append(Halfspace(e1, 1.0));
    p.append(Halfspace(-e1, 0.0));
    p.append(Halfspace(v2(0, 1), 0.0));
    p.append(Halfspace(v2(0, -1), -1.0));
    CHECK_THROWS_AS(enumerate_brute(p), EmptyPolytopeError);
}

TEST_CASE("unbounded polyhedron detected") {
    HPolytope p;
    p.append(Halfspace(v2(1, 0), 0.0));
    CHECK(!is_bounded(p));
    CHECK_THROWS_AS(enumerate_brute(p), UnboundedPolytopeError);

    HPolytope orthant;
    orthant.append(Halfspace(v2(1, 0), 0.0));
    orthant.append(Halfspace(v2(0, 1), 0.0));
    CHECK(!is_bounded(orthant));
    CHECK(is_bounded(unit_square()));

    // Triangle: bounded without any box rows.
    HPolytope tri;
    tri.append(Halfspace(v2(1, 0), 0.0));
    tri.append(Halfspace(v2(0, 1), 0.0));
    tri.append(Halfspace(v2(-1, -1), -1.0));
    CHECK(is_bounded(tri));
}

TEST_CASE("cut_update matches the spec examples") {
    SUBCASE("regular cut") {
        HPolytope p = unit_square();
        VRep v = enumerate_brute(p);
        cut_update(v, p, Halfspace(v2(1, 1), 0.5));
        REQUIRE(v.size() == 5);
        CHECK(has_vertex(v, v2(0.5, 0)));
        CHECK(has_vertex(v, v2(0, 0.5)));
        CHECK(!has_vertex(v, v2(0, 0)));
        CHECK(p.halfspaces.size() == 5);
    }
    SUBCASE("redundant cut leaves vertices unchanged") {
        HPolytope p = unit_square();
        VRep v = enumerate_brute(p);
        cut_update(v, p, Halfspace(v2(1, 0), -1.0));
        CHECK(v.size() == 4);
    }
    SUBCASE("touching cut keeps the single contact vertex") {
        HPolytope p = unit_square();
        VRep v = enumerate_brute(p);
        cut_update(v, p, Halfspace(v2(1, 1), 2.0));
        REQUIRE(v.size() == 1);
        CHECK(has_vertex(v, v2(1, 1)));
    }
    SUBCASE("cut eliminating everything is an error") {
        HPolytope p = unit_square();
        VRep v = enumerate_brute(p);
        CHECK_THROWS_AS(cut_update(v, p, Halfspace(v2(1, 1), 3.0)), EmptyPolytopeError);
    }
}

TEST_CASE("incremental cutting equals brute enumeration") {
    Rng rng(101);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        int q = 2 + static_cast<int>(rng() % 3);
        int extra = 1 + static_cast<int>(rng() % (12 - 2 * q));
        HPolytope full = testing::random_bounded_polytope(rng, q, extra);

        HPolytope inc;
        inc.halfspaces.assign(full.halfspaces.begin(), full.halfspaces.begin() + 2 * q);
        VRep v = enumerate_brute(inc);
        bool emptied = false;
        for (size_t r = 2 * q; r < full.halfspaces.size(); ++r) {
            try {
                cut_update(v, inc, full.halfspaces[r]);
            } catch (const EmptyPolytopeError&) {
                emptied = true;
                break;
            }
        }
        if (emptied) continue;
        VRep brute = enumerate_brute(full);
        CAPTURE(trial);
        CHECK(testing::vertex_set_distance(v.vertices, brute.vertices) <= 1e-8);
        ++checked;

        // Monotonicity: every incremental vertex satisfies all rows.
        for (const auto& y : v.vertices)
            for (const auto& h : full.halfspaces) CHECK(h.slack(y) >= -1e-7 * (1 + std::abs(h.offset)));
    }
    CHECK(checked >= 40);
}

TEST_CASE("vertex_candidates works on unbounded polyhedra") {
    HPolytope orthant;
    orthant.append(Halfspace(v2(1, 0), 0.25));
    orthant.append(Halfspace(v2(0, 1), -0.5));
    auto pts = vertex_candidates(orthant);
    REQUIRE(pts.size() == 1);
    CHECK((pts[0] - v2(0.25, -0.5)).lpNorm<Eigen::Infinity>() <= 1e-12);
}
