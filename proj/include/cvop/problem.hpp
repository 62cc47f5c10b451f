#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cvop/expr.hpp"
#include "cvop/geometry.hpp"

namespace cvop {

struct OracleEval {
    double value = 0.0;
    Vec gradient;
};

/// A bounded convex vector optimization instance: minimize the q objective
/// expressions with respect to the cone order over
/// X = box  intersect  {g_i(x) <= 0}.
struct CvopInstance {
    int n = 0;
    int q = 0;
    std::vector<ConvexExpr> objective;    // size q
    std::vector<ConvexExpr> constraints;  // each g_i <= 0
    Vec box_lower, box_upper;             // entries may be +-inf
    PolyCone cone;
    Norm norm = Norm::L2;
    std::optional<double> beta;        // user bound on sup w_bar^T Gamma
    std::optional<Vec> slater_point;   // declared strictly feasible point

    // Derived by validate():
    Vec tight_lower, tight_upper;  // finite box certified to contain X
    Vec interior_point;            // validated strictly feasible point
    double beta_eff = 0.0;         // declared beta or interval bound

    /// Validates all fields, certifies boundedness via constraint-derived box
    /// tightening, finds/validates the strictly feasible point and computes
    /// beta_eff. Throws ValidationError.
    void validate();

    bool feasible(const Vec& x, double tol) const;
};

/// Parse the problem-file format; throws on syntax or validation problems.
CvopInstance parse_problem(const std::string& text);
/// Emit a problem file that parses back to an equal instance.
std::string serialize_problem(const CvopInstance& inst);

/// The built-in instances: example1_q2, example1_q3, example1_q4, example2,
/// example3.
CvopInstance builtin(const std::string& name);
const std::vector<std::string>& builtin_names();
/// Problem-file text of a builtin (what builtin() parses).
std::string builtin_text(const std::string& name);

/// Copy of the instance under a different scalarization norm. Re-normalizes
/// the cone's dual generators and revalidates.
CvopInstance with_norm(const CvopInstance& inst, Norm norm);

/// Gamma_i(x) with gradient; i is zero-based.
OracleEval eval_objective(const CvopInstance& inst, int i, const Vec& x);
/// w^T Gamma(x) with gradient; requires w in C+.
OracleEval eval_scalarized(const CvopInstance& inst, const Vec& w, const Vec& x);

}  // namespace cvop
