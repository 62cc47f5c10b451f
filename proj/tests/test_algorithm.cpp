#include "cvop/algorithm.hpp"

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

bool has_vertex(const VRep& v, const Vec& target, double tol) {
    for (const auto& y : v.vertices)
        if ((y - target).lpNorm<Eigen::Infinity>() <= tol) return true;
    return false;
}

}  // namespace

TEST_CASE("initialization on the ball instance") {
    CvopInstance inst = builtin("example1_q2");
    RunConfig cfg;
    cfg.epsilon = 0.01;
    AlgoState st = initialize(inst, cfg);

    // w_bar = (1,1)/sqrt(2), gamma = beta + d((0,0),P) + margin.
    double r = 1.0 / std::sqrt(2.0);
    CHECK(st.w_bar[0] == doctest::Approx(r));
    CHECK(st.w_bar[1] == doctest::Approx(r));
    double beta = inst.beta_eff;
    CHECK(beta == doctest::Approx(2.0 * std::sqrt(2.0)));
    CHECK(st.gamma == doctest::Approx(beta + std::sqrt(2.0) - 1.0).epsilon(1e-4));

    // Rows: the two weighted-sum supports plus S(gamma); vertices: the
    // origin and the two S-corners.
    REQUIRE(st.outer.h.halfspaces.size() == 3);
    CHECK(std::abs(st.outer.h.halfspaces[0].offset) <= 1e-6);
    CHECK(std::abs(st.outer.h.halfspaces[1].offset) <= 1e-6);
    REQUIRE(st.outer.v.size() == 3);
    CHECK(has_vertex(st.outer.v, v2(0, 0), 1e-6));
    CHECK(has_vertex(st.outer.v, v2(st.gamma * std::sqrt(2.0), 0), 1e-5));

    CHECK(st.minimizers.size() == 2);
}

TEST_CASE("initialization in q = 3") {
    CvopInstance inst = builtin("example1_q3");
    RunConfig cfg;
    cfg.epsilon = 0.1;
    AlgoState st = initialize(inst, cfg);
    CHECK(st.outer.h.halfspaces.size() == 4);
    CHECK(has_vertex(st.outer.v, Vec::Zero(3), 1e-6));
    CHECK(is_bounded(st.outer.h));
}

TEST_CASE("first cut on the ball instance") {
    CvopInstance inst = builtin("example1_q2");
    RunConfig cfg;
    cfg.epsilon = 0.01;
    AlgoState st = initialize(inst, cfg);
    StepOutcome out = step(st, inst, cfg);

    REQUIRE(out.status == StepStatus::CutApplied);
    // Farthest vertex is the origin at distance sqrt(2)-1; the cut normal is
    // the diagonal and passes through y = (1 - 1/sqrt(2)) * (1,1).
    double r = 1.0 / std::sqrt(2.0);
    CHECK((out.chosen_vertex - v2(0, 0)).lpNorm<Eigen::Infinity>() <= 1e-6);
    CHECK(out.max_dist == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-6));
    CHECK(out.cut.normal[0] == doctest::Approx(r).epsilon(1e-6));
    CHECK(out.cut.normal[1] == doctest::Approx(r).epsilon(1e-6));
    CHECK(out.cut.offset == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-5));

    // The diagonal cut crosses the axes at 2 - sqrt(2).
    CHECK(has_vertex(st.outer.v, v2(2.0 - std::sqrt(2.0), 0), 1e-5));
    CHECK(has_vertex(st.outer.v, v2(0, 2.0 - std::sqrt(2.0)), 1e-5));
    CHECK(!has_vertex(st.outer.v, v2(0, 0), 1e-6));

    REQUIRE(st.log.size() == 1);
    CHECK(st.log[0].n_solves == 3);
    CHECK(st.log[0].n_cache_hits == 0);
    REQUIRE(st.log[0].hausdorff_consecutive.has_value());
    CHECK(*st.log[0].hausdorff_consecutive ==
          doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-4));

    // Second step: the surviving S-corner solutions come from the cache.
    StepOutcome out2 = step(st, inst, cfg);
    CHECK(out2.status == StepStatus::CutApplied);
    CHECK(st.log[1].n_cache_hits >= 2);
    CHECK(st.log[1].n_solves <= 2);
}

TEST_CASE("epsilon larger than every distance stops before any cut") {
    CvopInstance inst = builtin("example1_q2");
    RunConfig cfg;
    cfg.epsilon = 1.0;  // d((0,0), P) = sqrt(2)-1 < 1
    SolveResult res = run(inst, cfg);
    CHECK(res.final_status == StepStatus::Converged);
    CHECK(res.state.k == 0);
    CHECK(res.state.outer.v.size() == 3);
    CHECK(res.state.minimizers.size() >= 2);
}

TEST_CASE("run to convergence and verify the sandwich") {
    CvopInstance inst = builtin("example1_q2");
    RunConfig cfg;
    cfg.epsilon = 0.05;
    SolveResult res = run(inst, cfg);
    REQUIRE(res.final_status == StepStatus::Converged);
    CHECK(!res.hit_safety_cap);
    CHECK(res.state.k > 2);

    // Def. 2.3: every outer vertex within epsilon of conv(Gamma(Xbar)) + C.
    std::vector<Vec> images;
    for (const auto& [x, y] : res.state.minimizers) images.push_back(y);
    Mat gens = inst.cone.generators();
    for (const auto& v : res.state.outer.v.vertices) {
        auto pr = project_onto_polytope(v, images, &gens, inst.norm);
        CHECK(pr.dist <= cfg.epsilon + 1e-6);
    }

    // Outer validity: sampled images satisfy every halfspace.
    Rng rng(61);
    int kept = 0;
    for (int it = 0; it < 300 && kept < 100; ++it) {
        Vec x = testing::random_vec(rng, 2, 0, 2);
        if (!inst.feasible(x, 0.0)) continue;
        ++kept;
        Vec img = objective_image(inst, x);
        for (const auto& h : res.state.outer.h.halfspaces)
            CHECK(h.slack(img) >= -1e-6 * (1.0 + std::abs(h.offset)));
    }
    CHECK(kept == 100);

    // gamma sanity: images stay strictly inside S(gamma).
    for (const auto& [x, y] : res.state.minimizers)
        CHECK(res.state.w_bar.dot(y) < res.state.gamma - 1e-9);
}

TEST_CASE("indefinite mode performs exactly K cuts") {
    CvopInstance inst = builtin("example1_q2");
    RunConfig cfg;
    cfg.epsilon = 0.01;
    cfg.mode = RunMode::Indefinite;
    cfg.indefinite_cuts = 25;
    SolveResult res = run(inst, cfg);
    CHECK(res.state.k == 25);
    REQUIRE(res.state.log.size() == 25);

    // Theorem 6.3 preview: consecutive Hausdorff equals the max distance.
    for (const auto& rec : res.state.log) {
        REQUIRE(rec.hausdorff_consecutive.has_value());
        CHECK(std::abs(*rec.hausdorff_consecutive - rec.max_dist) <=
              1e-5 * (1.0 + rec.max_dist));
    }

    // Nested outer sets: recorded distances never increase... and the final
    // vertex set satisfies every accumulated halfspace.
    for (size_t i = 1; i < res.state.log.size(); ++i)
        CHECK(res.state.log[i].max_dist <= res.state.log[i - 1].max_dist + 1e-9);
    for (const auto& v : res.state.outer.v.vertices)
        for (const auto& h : res.state.outer.h.halfspaces)
            CHECK(h.slack(v) >= -1e-6 * (1.0 + std::abs(h.offset)));
}

TEST_CASE("safety cap reports partial results") {
    CvopInstance inst = builtin("example1_q2");
    RunConfig cfg;
    cfg.epsilon = 1e-5;
    cfg.max_iters = 3;
    SolveResult res = run(inst, cfg);
    CHECK(res.hit_safety_cap);
    CHECK(res.state.k == 3);
}

TEST_CASE("config validation") {
    CvopInstance inst = builtin("example1_q2");
    RunConfig cfg;
    cfg.epsilon = -1.0;
    CHECK_THROWS_AS(initialize(inst, cfg), ValidationError);
    cfg.epsilon = 0.1;
    cfg.mode = RunMode::Indefinite;
    cfg.indefinite_cuts = 0;
    CHECK_THROWS_AS(initialize(inst, cfg), ValidationError);
}

TEST_CASE("threaded solves match the serial order") {
    CvopInstance inst = builtin("example2");
    RunConfig serial, parallel;
    serial.epsilon = parallel.epsilon = 0.5;
    serial.threads = 1;
    parallel.threads = 4;
    SolveResult a = run(inst, serial);
    SolveResult b = run(inst, parallel);
    REQUIRE(a.state.log.size() == b.state.log.size());
    for (size_t i = 0; i < a.state.log.size(); ++i) {
        CHECK(a.state.log[i].max_dist == b.state.log[i].max_dist);
        CHECK(a.state.log[i].n_vertices == b.state.log[i].n_vertices);
    }
    CHECK(a.state.k == b.state.k);
}
