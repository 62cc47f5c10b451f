#include "cvop/problem.hpp"

#include <cmath>

#include "doctest.h"
#include "test_util.hpp"

using namespace cvop;
using cvop::testing::Rng;

TEST_CASE("builtin example1_q2 matches its definition") {
    CvopInstance inst = builtin("example1_q2");
    CHECK(inst.n == 2);
    CHECK(inst.q == 2);
    CHECK(inst.norm == Norm::L2);
    REQUIRE(inst.objective.size() == 2);
    CHECK(inst.objective[0].kind() == ConvexExpr::Kind::Affine);
    CHECK(inst.objective[0].lin_coeff()[0] == 1.0);
    CHECK(inst.objective[0].lin_coeff()[1] == 0.0);
    REQUIRE(inst.constraints.size() == 1);
    CHECK(inst.constraints[0].kind() == ConvexExpr::Kind::Norm2);
    CHECK(inst.constraints[0].center()[0] == 1.0);
    CHECK(inst.constraints[0].rhs() == 1.0);
    // Ball constraint certifies the box [0,2]^2.
    CHECK(inst.tight_lower[0] == doctest::Approx(0.0));
    CHECK(inst.tight_upper[1] == doctest::Approx(2.0));
    // Interval beta dominates sup w_bar' Gamma = sqrt(2)+1.
    CHECK(inst.beta_eff >= std::sqrt(2.0) + 1.0);
}

TEST_CASE("builtin example2 matches its definition") {
    CvopInstance inst = builtin("example2");
    CHECK(inst.n == 2);
    CHECK(inst.q == 3);
    REQUIRE(inst.objective.size() == 3);
    CHECK(inst.objective[1].center()[0] == 2.0);
    CHECK(inst.objective[1].center()[1] == 3.0);
    CHECK(inst.objective[2].center()[0] == 4.0);
    REQUIRE(inst.constraints.size() == 1);
    CHECK(inst.constraints[0].lin_coeff()[1] == 2.0);
    CHECK(inst.constraints[0].constant() == -10.0);
    CHECK(inst.box_upper[1] == 4.0);
}

TEST_CASE("builtin example3 matches its definition") {
    CvopInstance inst = builtin("example3");
    CHECK(inst.n == 3);
    CHECK(inst.q == 3);
    CHECK(inst.objective[0].quad_lin()[2] == -120.0);
    CHECK(inst.objective[1].quad_lin()[1] == -448.0);
    CHECK(inst.objective[2].quad_lin()[0] == -448.0);
    CHECK(inst.constraints[0].kind() == ConvexExpr::Kind::SqDist);
    CHECK(inst.constraints[0].rhs() == 100.0);
    CHECK(inst.box_upper[0] == 10.0);
}

TEST_CASE("unknown builtin name") {
    CHECK_THROWS_AS(builtin("nope"), ValidationError);
}

TEST_CASE("PSD violation is rejected") {
    std::string text = R"(
n = 2
q = 1
norm = "l2"
objective = [{kind = "quadratic", Q = [[-0.1, 0], [0, 1]], b = [0, 0], d = 0}]
[cone]
dual_generators = [[1]]
generators = [[1]]
[box]
lower = [0, 0]
upper = [1, 1]
)";
    CHECK_THROWS_WITH_AS(parse_problem(text),
                         doctest::Contains("positive semidefinite"), ValidationError);
}

TEST_CASE("validation failures") {
    SUBCASE("unbounded feasible set") {
        std::string text = R"(
n = 1
q = 1
norm = "l2"
objective = [{kind = "affine", c = [1], d = 0}]
[cone]
dual_generators = [[1]]
generators = [[1]]
)";
        CHECK_THROWS_WITH_AS(parse_problem(text), doctest::Contains("bounded"), ValidationError);
    }
    SUBCASE("collapsed box has no interior") {
        std::string text = R"(
n = 1
q = 1
norm = "l2"
objective = [{kind = "affine", c = [1], d = 0}]
[cone]
dual_generators = [[1]]
generators = [[1]]
[box]
lower = [1]
upper = [1]
)";
        CHECK_THROWS_AS(parse_problem(text), ValidationError);
    }
    SUBCASE("declared slater point must be strictly feasible") {
        std::string text = R"(
n = 2
q = 2
norm = "l2"
objective = [{kind = "affine", c = [1, 0], d = 0}, {kind = "affine", c = [0, 1], d = 0}]
constraints = [{kind = "norm2", center = [1, 1], rhs = 1}]
slater_point = [3, 3]
[cone]
dual_generators = [[1, 0], [0, 1]]
generators = [[1, 0], [0, 1]]
)";
        CHECK_THROWS_AS(parse_problem(text), ValidationError);
    }
    SUBCASE("mixed-sign dual generators are rejected") {
        std::string text = R"(
n = 2
q = 2
norm = "l2"
objective = [{kind = "sq_dist", center = [0, 0]}, {kind = "sq_dist", center = [1, 1]}]
[cone]
dual_generators = [[0, 1], [1, -1]]
generators = [[1, 0], [1, 1]]
[box]
lower = [0, 0]
upper = [1, 1]
)";
        CHECK_THROWS_WITH_AS(parse_problem(text), doctest::Contains("C-convexity"),
                             ValidationError);
    }
}

TEST_CASE("parse and serialize round-trip") {
    for (const auto& name : builtin_names()) {
        CAPTURE(name);
        CvopInstance a = builtin(name);
        CvopInstance b = parse_problem(serialize_problem(a));
        CHECK(a.n == b.n);
        CHECK(a.q == b.q);
        CHECK(a.norm == b.norm);
        REQUIRE(a.objective.size() == b.objective.size());
        for (size_t i = 0; i < a.objective.size(); ++i) CHECK(a.objective[i] == b.objective[i]);
        REQUIRE(a.constraints.size() == b.constraints.size());
        for (size_t i = 0; i < a.constraints.size(); ++i)
            CHECK(a.constraints[i] == b.constraints[i]);
        CHECK(a.box_lower == b.box_lower);
        CHECK(a.box_upper == b.box_upper);
        CHECK((a.cone.dual_generators() - b.cone.dual_generators()).cwiseAbs().maxCoeff() <=
              1e-15);
        CHECK(a.beta_eff == doctest::Approx(b.beta_eff));
    }
}

TEST_CASE("objective evaluation") {
    CvopInstance ex2 = builtin("example2");
    Vec x(2);
    x << 1, 1;
    OracleEval e = eval_objective(ex2, 0, x);
    CHECK(e.value == doctest::Approx(0.0));
    CHECK(e.gradient.norm() == doctest::Approx(0.0));

    x << 0, 0;
    e = eval_objective(ex2, 1, x);
    CHECK(e.value == doctest::Approx(13.0));
    CHECK(e.gradient[0] == doctest::Approx(-4.0));
    CHECK(e.gradient[1] == doctest::Approx(-6.0));

    CvopInstance ex1 = builtin("example1_q2");
    x << 0.3, 0.9;
    e = eval_objective(ex1, 0, x);
    CHECK(e.value == doctest::Approx(0.3));
    CHECK(e.gradient[0] == doctest::Approx(1.0));
    CHECK(e.gradient[1] == doctest::Approx(0.0));

    CHECK_THROWS_AS(eval_objective(ex1, 5, x), Error);
}

TEST_CASE("scalarized evaluation") {
    CvopInstance ex1 = builtin("example1_q2");
    Vec w(2), x(2);
    w << 1, 0;
    x << 0, 1;
    CHECK(eval_scalarized(ex1, w, x).value == doctest::Approx(0.0));

    CvopInstance ex2 = builtin("example2");
    Vec w3(3), x2(2);
    w3 << 1, 1, 1;
    x2 << 1, 1;
    CHECK(eval_scalarized(ex2, w3, x2).value == doctest::Approx(15.0));

    CvopInstance ex3 = builtin("example3");
    Vec x3 = Vec::Zero(3);
    Vec e1(3);
    e1 << 1, 0, 0;
    CHECK(eval_scalarized(ex3, e1, x3).value == doctest::Approx(0.0));

    Vec bad(2);
    bad << -1, 0;
    CHECK_THROWS_AS(eval_scalarized(ex1, bad, x), ValidationError);
}

TEST_CASE("analytic gradients match central differences") {
    Rng rng(17);
    const int n = 3;
    Mat Q(n, n);
    Q << 2, 0.5, 0, 0.5, 1.5, 0.2, 0, 0.2, 1.0;
    std::vector<ConvexExpr> exprs;
    exprs.push_back(ConvexExpr::affine(testing::random_vec(rng, n), 0.7));
    exprs.push_back(ConvexExpr::quadratic(Q, testing::random_vec(rng, n), -1.0));
    exprs.push_back(ConvexExpr::sq_dist(testing::random_vec(rng, n), 2.0));
    exprs.push_back(ConvexExpr::norm2(testing::random_vec(rng, n), 0.5));
    exprs.push_back(ConvexExpr::weighted_sum({0.3, 1.7}, {exprs[0], exprs[2]}));

    for (const auto& e : exprs) {
        for (int probe = 0; probe < 50; ++probe) {
            Vec x = testing::random_vec(rng, n, -2, 2);
            if (e.kind() == ConvexExpr::Kind::Norm2 && (x - e.center()).norm() < 1e-3) continue;
            Vec g;
            double v = e.value_grad(x, g);
            CHECK(v == doctest::Approx(e.value(x)));
            const double h = 1e-6;
            for (int i = 0; i < n; ++i) {
                Vec xp = x, xm = x;
                xp[i] += h;
                xm[i] -= h;
                double fd = (e.value(xp) - e.value(xm)) / (2 * h);
                CHECK(g[i] == doctest::Approx(fd).epsilon(1e-5));
            }
        }
    }
}

TEST_CASE("convexity probe") {
    Rng rng(19);
    CvopInstance ex3 = builtin("example3");
    for (int it = 0; it < 100; ++it) {
        Vec x = testing::random_vec(rng, 3, 0, 10);
        Vec y = testing::random_vec(rng, 3, 0, 10);
        double lam = testing::uniform(rng, 0, 1);
        for (const auto& e : ex3.objective) {
            double lhs = e.value(lam * x + (1 - lam) * y);
            double rhs = lam * e.value(x) + (1 - lam) * e.value(y);
            CHECK(lhs <= rhs + 1e-9 * (1 + std::abs(rhs)));
        }
    }
}

TEST_CASE("interval bounds contain sampled values") {
    Rng rng(23);
    CvopInstance ex3 = builtin("example3");
    Vec lo = ex3.tight_lower, hi = ex3.tight_upper;
    for (const auto& e : ex3.objective) {
        Interval b = e.bounds(lo, hi);
        for (int it = 0; it < 200; ++it) {
            Vec x(3);
            for (int i = 0; i < 3; ++i) x[i] = testing::uniform(rng, lo[i], hi[i]);
            double v = e.value(x);
            CHECK(v >= b.lo - 1e-9);
            CHECK(v <= b.hi + 1e-9);
        }
    }
}
