#pragma once

#include <vector>

#include "cvop/metrics.hpp"
#include "cvop/problem.hpp"
#include "cvop/scalarization.hpp"
#include "cvop/vertex_enum.hpp"

namespace cvop {

enum class RunMode { Terminate, Indefinite };

struct RunConfig {
    double epsilon = 1e-2;
    long max_iters = 100000;  // safety cap on cuts
    RunMode mode = RunMode::Terminate;
    long indefinite_cuts = 0;  // K in indefinite mode
    SolverConfig solver;
    std::uint64_t seed = 0;  // used by sampling-based verification only
    int threads = 0;         // 0: hardware concurrency
    bool record_consecutive = true;

    void validate() const;
};

struct OuterPoly {
    HPolytope h;
    VRep v;
};

/// One solved vertex: the vertex itself, its scalarization output, and
/// whether it entered the accepted pool (||z|| <= epsilon).
struct VertexCacheEntry {
    Vec vertex;
    PrimalDualSolution sol;
    bool accepted = false;
};

struct AlgoState {
    long k = 0;
    OuterPoly outer;
    std::vector<std::pair<Vec, Vec>> minimizers;  // (x, Gamma(x)) pool
    std::vector<VertexCacheEntry> cache;          // V_known + V_known2
    double gamma = 0.0;
    Vec w_bar;
    double coord_scale = 1.0;  // fixed at initialization, frames dedup tols
    std::vector<IterationRecord> log;
    long total_solves = 0;
    long total_cache_hits = 0;

    const VertexCacheEntry* find_cached(const Vec& v) const;
};

enum class StepStatus {
    CutApplied,
    Converged,          // every vertex within epsilon
    PolyhedralReached,  // indefinite mode found an exact polyhedral upper image
};

struct StepOutcome {
    StepStatus status = StepStatus::CutApplied;
    Vec chosen_vertex;
    Halfspace cut;
    double max_dist = 0.0;
};

/// Lines 1-6 of the cutting loop: weighted-sum solves along the dual
/// generators, the initial outer polyhedron, gamma, and the compactified
/// initial outer polytope with its vertex set.
AlgoState initialize(const CvopInstance& inst, const RunConfig& cfg);

/// One pass of lines 8-25: solve every uncached vertex, pick the farthest
/// one, and cut (or report convergence).
StepOutcome step(AlgoState& state, const CvopInstance& inst, const RunConfig& cfg);

struct SolveResult {
    AlgoState state;
    StepStatus final_status = StepStatus::Converged;
    bool hit_safety_cap = false;

    Vec gamma_at(const CvopInstance& inst, const Vec& x) const;
};

SolveResult run(const CvopInstance& inst, const RunConfig& cfg);

/// Objective image Gamma(x).
Vec objective_image(const CvopInstance& inst, const Vec& x);

}  // namespace cvop
