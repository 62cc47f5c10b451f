#include "cvop/scalarization.hpp"

#include <cmath>

namespace cvop {

namespace {

void add_box_rows(BarrierProblem& bp, const CvopInstance& inst) {
    for (int i = 0; i < inst.n; ++i) {
        if (std::isfinite(inst.box_lower[i])) {
            BarrierRow r;
            r.a = Vec::Zero(bp.dim);
            r.a[i] = -1.0;
            r.b = inst.box_lower[i];
            bp.rows.push_back(std::move(r));
        }
        if (std::isfinite(inst.box_upper[i])) {
            BarrierRow r;
            r.a = Vec::Zero(bp.dim);
            r.a[i] = 1.0;
            r.b = -inst.box_upper[i];
            bp.rows.push_back(std::move(r));
        }
    }
}

void add_constraint_rows(BarrierProblem& bp, const CvopInstance& inst) {
    for (const auto& g : inst.constraints) {
        BarrierRow r;
        r.sc.exprs = {&g};
        r.sc.coeffs = {1.0};
        r.a = Vec();
        bp.rows.push_back(std::move(r));
    }
}

Vec gamma_at(const CvopInstance& inst, const Vec& x) {
    Vec y(inst.q);
    for (int i = 0; i < inst.q; ++i) y[i] = inst.objective[i].value(x);
    return y;
}

// Indices of the J cone rows inside bp.rows, in generator order.
struct ScalarizationLayout {
    std::vector<int> cone_rows;
    int s_row = -1;  // compactifying row, -1 when absent
};

// Shared construction of NM(v) / P(v): variables (x, z, t[, s]) minimizing t
// over the epigraph of the chosen norm.
BarrierProblem build_norm_min(const CvopInstance& inst, const Vec& v, const double* gamma,
                              const Vec* w_bar, ScalarizationLayout& layout) {
    const int n = inst.n, q = inst.q;
    const bool l1 = inst.norm == Norm::L1;
    BarrierProblem bp;
    bp.dim = n + q + 1 + (l1 ? q : 0);
    bp.x_offset = 0;
    bp.x_dim = n;
    const int zo = n;       // z block offset
    const int to = n + q;   // t index
    const int so = n + q + 1;  // L1 lift block

    bp.objective = Vec::Zero(bp.dim);
    bp.objective[to] = 1.0;

    add_box_rows(bp, inst);
    add_constraint_rows(bp, inst);

    // Cone rows: (w^j)^T (Gamma(x) - z - v) <= 0.
    for (int j = 0; j < inst.cone.num_dual_generators(); ++j) {
        Vec wj = inst.cone.dual_generator(j);
        BarrierRow r;
        r.sc.exprs.reserve(q);
        r.sc.coeffs.reserve(q);
        for (int i = 0; i < q; ++i) {
            if (wj[i] == 0.0) continue;
            r.sc.exprs.push_back(&inst.objective[i]);
            r.sc.coeffs.push_back(wj[i]);
        }
        r.a = Vec::Zero(bp.dim);
        r.a.segment(zo, q) = -wj;
        r.b = -wj.dot(v);
        layout.cone_rows.push_back(static_cast<int>(bp.rows.size()));
        bp.rows.push_back(std::move(r));
    }

    if (gamma) {
        BarrierRow r;
        r.a = Vec::Zero(bp.dim);
        r.a.segment(zo, q) = *w_bar;
        r.b = w_bar->dot(v) - *gamma;
        layout.s_row = static_cast<int>(bp.rows.size());
        bp.rows.push_back(std::move(r));
    }

    // Norm epigraph.
    switch (inst.norm) {
        case Norm::L2: {
            SocBlock s;
            s.A = Mat::Zero(q, bp.dim);
            s.A.block(0, zo, q, q) = Mat::Identity(q, q);
            s.bz = Vec::Zero(q);
            s.c = Vec::Zero(bp.dim);
            s.c[to] = 1.0;
            bp.socs.push_back(std::move(s));
            break;
        }
        case Norm::LInf: {
            for (int i = 0; i < q; ++i)
                for (int sign : {+1, -1}) {
                    BarrierRow r;
                    r.a = Vec::Zero(bp.dim);
                    r.a[zo + i] = sign;
                    r.a[to] = -1.0;
                    bp.rows.push_back(std::move(r));
                }
            break;
        }
        case Norm::L1: {
            for (int i = 0; i < q; ++i)
                for (int sign : {+1, -1}) {
                    BarrierRow r;
                    r.a = Vec::Zero(bp.dim);
                    r.a[zo + i] = sign;
                    r.a[so + i] = -1.0;
                    bp.rows.push_back(std::move(r));
                }
            BarrierRow sum;
            sum.a = Vec::Zero(bp.dim);
            sum.a.segment(so, q).setOnes();
            sum.a[to] = -1.0;
            bp.rows.push_back(std::move(sum));
            break;
        }
    }

    // Strictly feasible start: shift Gamma(x0) - v into the cone interior.
    // The shift that minimizes ||z0|| keeps the start near the optimum's
    // scale; a margin proportional to that scale keeps the rows strict.
    const Vec& x0 = inst.interior_point;
    Vec g0 = gamma_at(inst, x0);
    Vec cbar = inst.cone.interior_direction();
    Vec base = g0 - v;
    double min_wc = std::numeric_limits<double>::infinity();
    for (int j = 0; j < inst.cone.num_dual_generators(); ++j)
        min_wc = std::min(min_wc, inst.cone.dual_generator(j).dot(cbar));
    double s_opt = std::max(0.0, -base.dot(cbar));
    double margin = 0.1 * (1.0 + (base + s_opt * cbar).norm());
    double shift = s_opt + margin / min_wc;
    if (gamma) {
        double room = (*gamma - w_bar->dot(g0)) / w_bar->dot(cbar);
        if (room <= 0.0)
            throw SolveError("gamma too small: Gamma(X) is not interior to S(gamma)");
        shift = std::min(shift, 0.9 * room);
    }
    Vec z0 = base + shift * cbar;
    bp.start = Vec::Zero(bp.dim);
    bp.start.head(n) = x0;
    bp.start.segment(zo, q) = z0;
    if (l1) {
        for (int i = 0; i < q; ++i) bp.start[so + i] = std::abs(z0[i]) + 1.0;
        bp.start[to] = bp.start.segment(so, q).sum() + 1.0;
    } else {
        bp.start[to] = norm_eval(inst.norm, z0) + 1.0;
    }
    return bp;
}

PrimalDualSolution finish_solve(const CvopInstance& inst, const Vec& v, const double* gamma,
                                const Vec* w_bar, const SolverConfig& cfg) {
    ScalarizationLayout layout;
    BarrierProblem bp = build_norm_min(inst, v, gamma, w_bar, layout);
    BarrierResult br = solve_barrier(bp, cfg);

    PrimalDualSolution sol;
    sol.x = br.u.head(inst.n);
    sol.z = br.u.segment(inst.n, inst.q);
    sol.v = v;
    sol.objective_value = norm_eval(inst.norm, sol.z);

    sol.w = Vec::Zero(inst.q);
    for (int j = 0; j < inst.cone.num_dual_generators(); ++j)
        sol.w += br.row_mult[layout.cone_rows[j]] * inst.cone.dual_generator(j);
    sol.lambda = layout.s_row >= 0 ? br.row_mult[layout.s_row] : 0.0;
    sol.w_tilde = gamma ? Vec(sol.w - sol.lambda * (*w_bar)) : sol.w;

    // Lemma 5.1(b) holds at the exact optimum; rescaling the dual variables
    // jointly removes the solver's O(1/tau) deviation without leaving the
    // dual feasible set.
    if (sol.objective_value > cfg.tol_zero) {
        double k = dual_norm_eval(inst.norm, sol.w_tilde);
        if (k < 0.2)
            throw SolveError("dual extraction failed: w_tilde nearly vanished at ||z|| = " +
                             std::to_string(sol.objective_value));
        sol.w /= k;
        sol.lambda /= k;
        sol.w_tilde /= k;
    }

    // Certified gap: evaluate the dual objective at (w, lambda) with the
    // inner infimum bounded from below by a weighted-sum solve.
    double phi_lb;
    double wn = sol.w.lpNorm<Eigen::Infinity>();
    double stail = sol.lambda * ((w_bar ? w_bar->dot(v) : 0.0) - (gamma ? *gamma : 0.0));
    if (wn < 1e-12) {
        phi_lb = stail;
    } else {
        phi_lb = weighted_sum_lower_bound(inst, sol.w, cfg) - sol.w.dot(v) + stail;
    }
    sol.gap = sol.objective_value - phi_lb;
    return sol;
}

BarrierProblem build_weighted_sum(const CvopInstance& inst, const Vec& w) {
    // Epigraph form: minimize t subject to w^T Gamma(x) - t <= 0.
    BarrierProblem bp;
    bp.dim = inst.n + 1;
    bp.x_offset = 0;
    bp.x_dim = inst.n;
    bp.objective = Vec::Zero(bp.dim);
    bp.objective[inst.n] = 1.0;
    add_box_rows(bp, inst);
    add_constraint_rows(bp, inst);
    BarrierRow epi;
    epi.sc.exprs.reserve(inst.q);
    epi.sc.coeffs.reserve(inst.q);
    for (int i = 0; i < inst.q; ++i) {
        if (w[i] == 0.0) continue;
        epi.sc.exprs.push_back(&inst.objective[i]);
        epi.sc.coeffs.push_back(w[i]);
    }
    epi.a = Vec::Zero(bp.dim);
    epi.a[inst.n] = -1.0;
    bp.rows.push_back(std::move(epi));

    bp.start = Vec::Zero(bp.dim);
    bp.start.head(inst.n) = inst.interior_point;
    double f0 = 0.0;
    for (int i = 0; i < inst.q; ++i)
        if (w[i] != 0.0) f0 += w[i] * inst.objective[i].value(inst.interior_point);
    bp.start[inst.n] = f0 + 1.0 + 0.1 * std::abs(f0);
    return bp;
}

}  // namespace

std::pair<Vec, double> solve_weighted_sum(const CvopInstance& inst, const Vec& w,
                                          const SolverConfig& cfg) {
    if (w.size() != inst.q) throw ValidationError("weighted sum: w has wrong dimension");
    if (w.lpNorm<Eigen::Infinity>() == 0.0)
        throw ValidationError("weighted sum: w must be nonzero");
    if (!inst.cone.dual_contains(w, 1e-9 * (1.0 + w.lpNorm<Eigen::Infinity>())))
        throw ValidationError("weighted sum: w is not in the dual cone");
    BarrierProblem bp = build_weighted_sum(inst, w);
    BarrierResult br = solve_barrier(bp, cfg);
    Vec x = br.u.head(inst.n);
    double value = 0.0;
    for (int i = 0; i < inst.q; ++i)
        if (w[i] != 0.0) value += w[i] * inst.objective[i].value(x);
    return {std::move(x), value};
}

double weighted_sum_lower_bound(const CvopInstance& inst, const Vec& w, const SolverConfig& cfg) {
    if (w.lpNorm<Eigen::Infinity>() == 0.0) return 0.0;
    BarrierProblem bp = build_weighted_sum(inst, w);
    BarrierResult br = solve_barrier(bp, cfg);
    Vec x = br.u.head(inst.n);
    double value = 0.0;
    for (int i = 0; i < inst.q; ++i)
        if (w[i] != 0.0) value += w[i] * inst.objective[i].value(x);
    return value - br.nu / br.tau;
}

PrimalDualSolution solve_norm_min(const CvopInstance& inst, const Vec& v,
                                  const SolverConfig& cfg) {
    if (v.size() != inst.q) throw ValidationError("norm-min: v has wrong dimension");
    return finish_solve(inst, v, nullptr, nullptr, cfg);
}

PrimalDualSolution solve_modified(const CvopInstance& inst, const Vec& v, double gamma,
                                  const Vec& w_bar, const SolverConfig& cfg) {
    if (v.size() != inst.q) throw ValidationError("modified scalarization: v has wrong dimension");
    if (w_bar.size() != inst.q)
        throw ValidationError("modified scalarization: w_bar has wrong dimension");
    return finish_solve(inst, v, &gamma, &w_bar, cfg);
}

}  // namespace cvop
