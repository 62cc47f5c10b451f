#include "cvop/solver.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace cvop {

double ScalarizedPart::value(const Vec& x) const {
    double s = 0.0;
    for (size_t k = 0; k < exprs.size(); ++k) s += coeffs[k] * exprs[k]->value(x);
    return s;
}

double ScalarizedPart::value_grad_hess(const Vec& x, Vec& grad, Mat& hess, double delta) const {
    const int n = static_cast<int>(x.size());
    grad = Vec::Zero(n);
    hess = Mat::Zero(n, n);
    double s = 0.0;
    Vec g;
    Mat h;
    for (size_t k = 0; k < exprs.size(); ++k) {
        if (coeffs[k] == 0.0) continue;
        s += coeffs[k] * exprs[k]->value_grad_hess(x, g, h, delta);
        grad += coeffs[k] * g;
        hess += coeffs[k] * h;
    }
    return s;
}

namespace {

struct Evaluation {
    bool feasible = false;
    double barrier = 0.0;  // sum of -log terms (no objective)
    std::vector<double> row_vals;
    std::vector<double> soc_s;  // t^2 - ||z||^2 per block
};

Evaluation evaluate(const BarrierProblem& p, const Vec& u, double delta) {
    Evaluation ev;
    ev.row_vals.resize(p.rows.size());
    ev.soc_s.resize(p.socs.size());
    Vec x;
    if (p.x_dim > 0) x = u.segment(p.x_offset, p.x_dim);
    for (size_t i = 0; i < p.rows.size(); ++i) {
        const auto& r = p.rows[i];
        double v = r.b + (r.a.size() ? r.a.dot(u) : 0.0);
        if (!r.sc.empty()) v += r.sc.value(x);
        ev.row_vals[i] = v;
        if (!(v < 0.0)) return ev;  // also catches NaN
        ev.barrier -= std::log(-v);
    }
    for (size_t i = 0; i < p.socs.size(); ++i) {
        const auto& s = p.socs[i];
        double t = s.c.dot(u) + s.d;
        Vec z = s.A * u + s.bz;
        double sv = t * t - z.squaredNorm();
        ev.soc_s[i] = sv;
        if (!(t > 0.0) || !(sv > 0.0)) return ev;
        ev.barrier -= std::log(sv);
    }
    ev.feasible = true;
    (void)delta;
    return ev;
}

// Gradient and Hessian of tau * obj . u + barrier(u).
void assemble(const BarrierProblem& p, const Vec& u, double tau, double delta, Vec& grad,
              Mat& hess) {
    const int n = p.dim;
    grad = tau * p.objective;
    hess = Mat::Zero(n, n);
    Vec x;
    if (p.x_dim > 0) x = u.segment(p.x_offset, p.x_dim);
    Vec g_full(n);
    for (const auto& r : p.rows) {
        double v = r.b + (r.a.size() ? r.a.dot(u) : 0.0);
        g_full.setZero();
        if (r.a.size()) g_full = r.a;
        if (!r.sc.empty()) {
            Vec gx;
            Mat hx;
            v += r.sc.value_grad_hess(x, gx, hx, delta);
            g_full.segment(p.x_offset, p.x_dim) += gx;
            hess.block(p.x_offset, p.x_offset, p.x_dim, p.x_dim) += hx / (-v);
        }
        grad += g_full / (-v);
        hess += (g_full * g_full.transpose()) / (v * v);
    }
    for (const auto& s : p.socs) {
        double t = s.c.dot(u) + s.d;
        Vec z = s.A * u + s.bz;
        double sv = t * t - z.squaredNorm();
        Vec grad_s = 2.0 * t * s.c - 2.0 * (s.A.transpose() * z);
        grad -= grad_s / sv;
        hess += (grad_s * grad_s.transpose()) / (sv * sv);
        hess += (2.0 * (s.A.transpose() * s.A) - 2.0 * (s.c * s.c.transpose())) / sv;
    }
}

// Newton step for the centering problem, respecting equality constraints.
Vec newton_direction(const BarrierProblem& p, const Mat& hess, const Vec& grad) {
    const int n = p.dim;
    const int m = static_cast<int>(p.eq_A.rows());
    if (m == 0) {
        Eigen::LDLT<Mat> ldlt(hess);
        if (ldlt.info() == Eigen::Success) {
            Vec d = ldlt.solve(-grad);
            if (d.allFinite()) return d;
        }
        Eigen::FullPivLU<Mat> lu(hess);
        return lu.solve(-grad);
    }
    Mat kkt = Mat::Zero(n + m, n + m);
    kkt.topLeftCorner(n, n) = hess;
    kkt.topRightCorner(n, m) = p.eq_A.transpose();
    kkt.bottomLeftCorner(m, n) = p.eq_A;
    Vec rhs = Vec::Zero(n + m);
    rhs.head(n) = -grad;
    Eigen::FullPivLU<Mat> lu(kkt);
    Vec sol = lu.solve(rhs);
    return sol.head(n);
}

}  // namespace

BarrierResult solve_barrier(const BarrierProblem& p, const SolverConfig& cfg) {
    const double delta = cfg.smooth_delta;
    Vec u = p.start;
    {
        Evaluation ev = evaluate(p, u, delta);
        if (!ev.feasible) {
            std::string which = "start point infeasible";
            for (size_t i = 0; i < ev.row_vals.size(); ++i)
                if (!(ev.row_vals[i] < 0.0)) which += " (row " + std::to_string(i) + ")";
            throw SolveError(which);
        }
    }

    const double nu = static_cast<double>(p.rows.size()) + 2.0 * static_cast<double>(p.socs.size());
    // Scale-aware start: keeps the first centering close to the analytic
    // center even when the objective is numerically large.
    double tau = std::min(1.0, 1.0 / (1.0 + std::abs(p.objective.dot(u))));
    BarrierResult res;
    res.nu = nu;

    Vec grad;
    Mat hess;
    int total_newton = 0;
    for (int round = 0; round < cfg.max_barrier_iters; ++round) {
        for (int it = 0; it < cfg.max_newton; ++it) {
            assemble(p, u, tau, delta, grad, hess);
            Vec d = newton_direction(p, hess, grad);
            if (!d.allFinite()) throw SolveError("Newton direction is not finite");
            double decrement2 = d.dot(hess * d);
            if (decrement2 <= 1e-11) break;
            ++total_newton;
            bool trace2 = std::getenv("CVOP_SOLVER_TRACE2") != nullptr;

            double f0 = tau * p.objective.dot(u) + evaluate(p, u, delta).barrier;
            double gd = grad.dot(d);
            double step = 1.0;
            bool moved = false;
            while (step > 1e-16) {
                Vec cand = u + step * d;
                Evaluation ev = evaluate(p, cand, delta);
                if (ev.feasible) {
                    double f1 = tau * p.objective.dot(cand) + ev.barrier;
                    if (f1 <= f0 + 0.25 * step * gd || f1 <= f0) {
                        u = cand;
                        moved = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if (trace2)
                fprintf(stderr, "[newton] it=%d dec2=%.3e gd=%.3e step=%.3e moved=%d f0=%.10g\n",
                        it, decrement2, gd, step, (int)moved, f0);
            if (!moved) break;  // stalled at float precision; accept the center
        }
        double obj = p.objective.dot(u);
        if (std::getenv("CVOP_SOLVER_TRACE"))
            fprintf(stderr, "[barrier] round=%d tau=%.1e obj=%.8g newton_total=%d\n", round, tau,
                    obj, total_newton);
        if (nu / tau <= 0.5 * cfg.tol_gap * (1.0 + std::abs(obj))) break;
        tau *= cfg.barrier_mu;
    }

    res.u = u;
    res.tau = tau;
    res.objective_value = p.objective.dot(u);
    res.newton_steps = total_newton;
    Evaluation ev = evaluate(p, u, delta);
    res.row_mult.resize(p.rows.size());
    for (size_t i = 0; i < p.rows.size(); ++i) res.row_mult[i] = 1.0 / (tau * (-ev.row_vals[i]));
    return res;
}

}  // namespace cvop
