#pragma once

#include "cvop/solver.hpp"
#include "cvop/vertex_enum.hpp"

namespace cvop {

struct ProjectionResult {
    Vec nearest;
    double dist = 0.0;
};

/// Distance from a point to conv(vertices) + cone(generator rows) in the
/// given norm: minimizes ||point - (V^T lambda + C^T mu)|| over the simplex
/// lambda and mu >= 0. Pass cone_generators = nullptr for a plain hull.
/// Scales to thousands of vertices (diagonal-plus-low-rank Newton).
ProjectionResult project_onto_polytope(const Vec& point, const std::vector<Vec>& vertices,
                                       const Mat* cone_generators, Norm norm,
                                       const SolverConfig& cfg = {});

/// Distance from a point to an H-polytope; `interior` must be strictly
/// feasible (a vertex centroid works for full-dimensional polytopes).
ProjectionResult project_to_hpolytope(const Vec& point, const HPolytope& p, const Vec& interior,
                                      Norm norm, const SolverConfig& cfg = {});

/// Strictly interior point of a full-dimensional polytope (vertex centroid).
Vec vertex_centroid(const VRep& v);

}  // namespace cvop
