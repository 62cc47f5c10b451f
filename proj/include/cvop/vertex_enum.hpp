#pragma once

#include <optional>
#include <vector>

#include "cvop/geometry.hpp"

namespace cvop {

struct EmptyPolytopeError : Error {
    using Error::Error;
};
struct UnboundedPolytopeError : Error {
    using Error::Error;
};

/// Polyhedron as an ordered intersection of halfspaces {y : w^T y >= b}.
struct HPolytope {
    std::vector<Halfspace> halfspaces;

    int dim() const { return halfspaces.empty() ? 0 : static_cast<int>(halfspaces[0].normal.size()); }
    void append(Halfspace h) { halfspaces.push_back(std::move(h)); }
};

/// Vertex representation kept in sync with an HPolytope. `incidence[i]` holds
/// the sorted indices of the halfspaces active at vertex i (at least q of
/// them for a nondegenerate vertex). Vertices are kept in lexicographic
/// order so that downstream iteration is deterministic.
struct VRep {
    std::vector<Vec> vertices;
    std::vector<std::vector<int>> incidence;

    int size() const { return static_cast<int>(vertices.size()); }
    bool empty() const { return vertices.empty(); }
};

struct EnumTols {
    double feas = 1e-8;    // feasibility slack, relative to row scale
    double act = 1e-9;     // activity classification band
    double dedup = 1e-8;   // duplicate-vertex distance in the scaled frame
    double pivot = 1e-10;  // Gaussian elimination pivot threshold
};

/// Vertices of a (possibly unbounded) polyhedron by brute force over all
/// q-subsets of boundary equations. No boundedness or nonemptiness check.
std::vector<Vec> vertex_candidates(const HPolytope& p, const EnumTols& tols = {});

/// Exact vertex set of a bounded polytope; throws UnboundedPolytopeError or
/// EmptyPolytopeError. Intended for small systems (<= ~25 halfspaces, q <= 5).
VRep enumerate_brute(const HPolytope& p, const EnumTols& tols = {});

/// True iff the recession cone {d : w^T d >= 0 for all halfspaces} is {0}.
bool is_bounded(const HPolytope& p, const EnumTols& tols = {});

/// Intersect (p, v) with one more halfspace, updating the vertex set
/// incrementally: vertices inside are kept, crossing edges contribute new
/// vertices, vertices outside are dropped. Throws EmptyPolytopeError when the
/// cut eliminates every vertex.
void cut_update(VRep& v, HPolytope& p, const Halfspace& h, const EnumTols& tols = {});

/// Rebuild the incidence of a vertex against all halfspaces of p.
std::vector<int> active_set(const HPolytope& p, const Vec& y, double act_tol);

namespace detail {
bool lex_less(const Vec& a, const Vec& b);
void sort_vrep(VRep& v);
int row_rank(const std::vector<Vec>& rows, double pivot_tol);
}  // namespace detail

}  // namespace cvop
