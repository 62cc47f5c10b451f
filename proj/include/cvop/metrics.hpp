#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cvop/projection.hpp"
#include "cvop/vertex_enum.hpp"

namespace cvop {

/// Per-iteration measurements of the cutting loop. `hausdorff_outer_to_upper`
/// equals the largest scalarization distance over the current vertices, which
/// is the Hausdorff distance between the outer polytope and the compactified
/// upper image.
struct IterationRecord {
    long k = 0;
    double max_dist = 0.0;
    int n_vertices = 0;
    int n_solves = 0;
    int n_cache_hits = 0;
    double hausdorff_outer_to_upper = 0.0;
    std::optional<double> hausdorff_consecutive;
    double wall_ms = 0.0;
};

/// Constants of the improved-rate bound.
struct RateConstants {
    double R = 0.0;  // circumradius of the final outer vertex set (upper bound)
    double pi_q = 0.0;
    double pi_qminus1 = 0.0;
    double lambda_bar = 0.0;
    double theoretical_exponent = 0.0;
};

/// Hausdorff distance between nested polytopes given by vertex sets,
/// delta^H(prev, cur) with cur inside prev: the maximum over vertices of prev
/// of the distance to conv(cur). Rejects non-nested inputs.
double hausdorff_consecutive(const VRep& prev, const VRep& cur, Norm norm,
                             const SolverConfig& cfg = {});

/// Smallest euclidean ball containing the points.
std::pair<Vec, double> min_enclosing_ball(const std::vector<Vec>& points,
                                          const SolverConfig& cfg = {});

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    int n_used = 0;
};

/// OLS of log(hausdorff_outer_to_upper) against log k over the records after
/// the burn-in fraction, skipping k = 0 and distances below tol_zero.
/// Throws when fewer than 10 usable records remain.
SlopeFit fit_slope(const std::vector<IterationRecord>& log, double burn_in = 0.2,
                   double tol_zero = 1e-12);

/// Reference curve c * k^e with e = 2/(1-q) (euclidean) or 1/(1-q).
double theoretical_exponent(int q, bool euclidean);
double theoretical_curve(int q, bool euclidean, double c, double k);

double unit_ball_volume(int q);
RateConstants rate_constants(const std::vector<Vec>& final_vertices, int q, bool euclidean,
                             const SolverConfig& cfg = {});

/// CSV log schema: k,max_dist,hausdorff_consecutive,n_vertices,n_solves,
/// n_cache_hits,wall_ms with 17-significant-digit floats.
std::string log_csv(const std::vector<IterationRecord>& records);
std::vector<IterationRecord> parse_log_csv(const std::string& text);

/// Fixed float format used by every CSV/report writer.
std::string format_float(double v);

}  // namespace cvop
