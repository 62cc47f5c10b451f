#pragma once

#include <vector>

#include "cvop/expr.hpp"

namespace cvop {

struct SolveError : Error {
    using Error::Error;
};

struct SolverConfig {
    double tol_gap = 1e-7;       // certified duality gap target (relative)
    double tol_feas = 1e-8;
    int max_barrier_iters = 60;  // outer barrier rounds
    double barrier_mu = 10.0;    // barrier parameter multiplier
    double smooth_delta = 1e-9;  // epigraph smoothing for norm2 kinks
    double tol_zero = 1e-7;      // ||z|| below this counts as membership
    int max_newton = 120;        // Newton steps per centering
};

/// Nonlinear part of a constraint row: sum_k coeff_k * expr_k applied to the
/// x block of the variable vector.
struct ScalarizedPart {
    std::vector<const ConvexExpr*> exprs;
    std::vector<double> coeffs;

    bool empty() const { return exprs.empty(); }
    double value(const Vec& x) const;
    double value_grad_hess(const Vec& x, Vec& grad, Mat& hess, double delta) const;
};

/// Inequality row sc(x(u)) + a^T u + b <= 0 with log barrier.
struct BarrierRow {
    ScalarizedPart sc;
    Vec a;
    double b = 0.0;
};

/// Second-order-cone block t(u) >= ||z(u)||_2 with z = A u + bz and
/// t = c^T u + d, handled by the barrier -log(t^2 - ||z||^2).
struct SocBlock {
    Mat A;
    Vec bz;
    Vec c;
    double d = 0.0;
};

struct BarrierProblem {
    int dim = 0;
    int x_offset = 0;
    int x_dim = 0;
    Vec objective;  // minimize objective . u
    std::vector<BarrierRow> rows;
    std::vector<SocBlock> socs;
    Mat eq_A;  // optional affine equality eq_A u = eq_b (0 rows for none)
    Vec eq_b;
    Vec start;  // strictly feasible, satisfies the equality exactly
};

struct BarrierResult {
    Vec u;
    std::vector<double> row_mult;  // multiplier per inequality row
    double tau = 0.0;
    double nu = 0.0;  // total self-concordance parameter
    double objective_value = 0.0;
    int newton_steps = 0;
    /// Certified bound: objective_value - nu / tau <= true optimum.
    double lower_bound() const { return objective_value - nu / tau; }
};

/// Path-following log-barrier method with damped Newton centering.
/// Throws SolveError when the start is infeasible or centering fails.
BarrierResult solve_barrier(const BarrierProblem& p, const SolverConfig& cfg);

}  // namespace cvop
