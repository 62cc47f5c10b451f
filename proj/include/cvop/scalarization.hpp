#pragma once

#include "cvop/problem.hpp"
#include "cvop/solver.hpp"

namespace cvop {

/// Primal and dual data of one norm-minimizing scalarization solve.
/// y^v = v + z is the boundary point, w_tilde = w - lambda * w_bar the cut
/// normal (rescaled to dual norm 1 whenever ||z|| is nonzero).
struct PrimalDualSolution {
    Vec x;
    Vec z;
    Vec v;
    double objective_value = 0.0;  // ||z|| in the instance norm
    Vec w;
    double lambda = 0.0;
    Vec w_tilde;
    double gap = 0.0;  // certified duality gap

    Vec y() const { return v + z; }
};

/// WS(w): minimize w^T Gamma(x) over X. Requires w in C+ \ {0}.
std::pair<Vec, double> solve_weighted_sum(const CvopInstance& inst, const Vec& w,
                                          const SolverConfig& cfg = {});

/// Certified lower bound on inf_x w^T Gamma(x); used for duality gaps.
double weighted_sum_lower_bound(const CvopInstance& inst, const Vec& w,
                                const SolverConfig& cfg = {});

/// NM(v): minimize ||z|| subject to Gamma(x) - z - v <=_C 0. Always feasible;
/// the optimal value is the distance d(v, P).
PrimalDualSolution solve_norm_min(const CvopInstance& inst, const Vec& v,
                                  const SolverConfig& cfg = {});

/// P(v): NM(v) with the compactifying row w_bar^T (v + z) <= gamma. The
/// optimal value is d(v, P intersect S(gamma)).
PrimalDualSolution solve_modified(const CvopInstance& inst, const Vec& v, double gamma,
                                  const Vec& w_bar, const SolverConfig& cfg = {});

}  // namespace cvop
