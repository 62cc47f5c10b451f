#pragma once

#include <optional>
#include <vector>

#include "cvop/geometry.hpp"

namespace cvop {

/// Closed interval used for box bounds of expressions; ends may be infinite.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// A structured convex function of x in R^n. The structure doubles as the
/// convexity certificate: each kind is convex by construction once its data
/// passes validation (Q positive semidefinite, weights nonnegative).
class ConvexExpr {
  public:
    enum class Kind { Affine, Quadratic, SqDist, Norm2, WeightedSum };

    static ConvexExpr affine(Vec c, double d);
    // x^T Q x + b^T x + d
    static ConvexExpr quadratic(Mat Q, Vec b, double d);
    // ||x - center||_2^2 - rhs
    static ConvexExpr sq_dist(Vec center, double rhs = 0.0);
    // ||x - center||_2 - rhs
    static ConvexExpr norm2(Vec center, double rhs = 0.0);
    static ConvexExpr weighted_sum(std::vector<double> weights, std::vector<ConvexExpr> terms);

    Kind kind() const { return kind_; }
    int dim() const;

    /// Validate data against the decision dimension; throws ValidationError.
    void validate(int n) const;

    double value(const Vec& x) const;
    /// Value and analytic gradient. Norm2 gradients are exact (undefined at
    /// the kink itself).
    double value_grad(const Vec& x, Vec& grad) const;
    /// Value, gradient and Hessian with the norm2 kink smoothed as
    /// sqrt(||x-a||^2 + delta^2); pass delta = 0 for exact evaluation.
    double value_grad_hess(const Vec& x, Vec& grad, Mat& hess, double smooth_delta) const;

    /// Interval bound of the expression over the box [lo, hi].
    Interval bounds(const Vec& lo, const Vec& hi) const;

    bool operator==(const ConvexExpr& other) const;

    // Data access for serialization and bindings.
    const Vec& lin_coeff() const { return c_; }
    double constant() const { return d_; }
    const Mat& quad_matrix() const { return Q_; }
    const Vec& quad_lin() const { return b_; }
    const Vec& center() const { return center_; }
    double rhs() const { return rhs_; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<ConvexExpr>& terms() const { return terms_; }

  private:
    Kind kind_ = Kind::Affine;
    Vec c_;
    double d_ = 0.0;
    Mat Q_;
    Vec b_;
    Vec center_;
    double rhs_ = 0.0;
    std::vector<double> weights_;
    std::vector<ConvexExpr> terms_;
};

}  // namespace cvop
