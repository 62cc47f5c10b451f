#include "cvop/expr.hpp"

#include <cmath>

namespace cvop {

namespace {

Interval iv(double a, double b) { return {std::min(a, b), std::max(a, b)}; }

Interval iv_add(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }

Interval iv_scale(Interval a, double s) {
    if (s == 0.0) return {0.0, 0.0};
    return s > 0 ? Interval{a.lo * s, a.hi * s} : Interval{a.hi * s, a.lo * s};
}

Interval iv_mul(Interval a, Interval b) {
    double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return {std::min(std::min(p1, p2), std::min(p3, p4)),
            std::max(std::max(p1, p2), std::max(p3, p4))};
}

Interval iv_square(Interval a) {
    double lo = (a.lo <= 0.0 && a.hi >= 0.0) ? 0.0 : std::min(a.lo * a.lo, a.hi * a.hi);
    return {lo, std::max(a.lo * a.lo, a.hi * a.hi)};
}

}  // namespace

ConvexExpr ConvexExpr::affine(Vec c, double d) {
    ConvexExpr e;
    e.kind_ = Kind::Affine;
    e.c_ = std::move(c);
    e.d_ = d;
    return e;
}

ConvexExpr ConvexExpr::quadratic(Mat Q, Vec b, double d) {
    ConvexExpr e;
    e.kind_ = Kind::Quadratic;
    e.Q_ = std::move(Q);
    e.b_ = std::move(b);
    e.d_ = d;
    return e;
}

ConvexExpr ConvexExpr::sq_dist(Vec center, double rhs) {
    ConvexExpr e;
    e.kind_ = Kind::SqDist;
    e.center_ = std::move(center);
    e.rhs_ = rhs;
    return e;
}

ConvexExpr ConvexExpr::norm2(Vec center, double rhs) {
    ConvexExpr e;
    e.kind_ = Kind::Norm2;
    e.center_ = std::move(center);
    e.rhs_ = rhs;
    return e;
}

ConvexExpr ConvexExpr::weighted_sum(std::vector<double> weights, std::vector<ConvexExpr> terms) {
    ConvexExpr e;
    e.kind_ = Kind::WeightedSum;
    e.weights_ = std::move(weights);
    e.terms_ = std::move(terms);
    return e;
}

int ConvexExpr::dim() const {
    switch (kind_) {
        case Kind::Affine: return static_cast<int>(c_.size());
        case Kind::Quadratic: return static_cast<int>(b_.size());
        case Kind::SqDist:
        case Kind::Norm2: return static_cast<int>(center_.size());
        case Kind::WeightedSum: return terms_.empty() ? 0 : terms_[0].dim();
    }
    return 0;
}

void ConvexExpr::validate(int n) const {
    switch (kind_) {
        case Kind::Affine:
            if (c_.size() != n) throw ValidationError("affine: coefficient size != n");
            return;
        case Kind::Quadratic: {
            if (Q_.rows() != n || Q_.cols() != n) throw ValidationError("quadratic: Q is not n x n");
            if (b_.size() != n) throw ValidationError("quadratic: b size != n");
            double scale = 1.0 + Q_.cwiseAbs().maxCoeff();
            if ((Q_ - Q_.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
                throw ValidationError("quadratic: Q is not symmetric");
            Eigen::SelfAdjointEigenSolver<Mat> eig(Q_, Eigen::EigenvaluesOnly);
            if (eig.eigenvalues().minCoeff() < -1e-9 * scale)
                throw ValidationError("quadratic: Q is not positive semidefinite (min eigenvalue " +
                                      std::to_string(eig.eigenvalues().minCoeff()) + ")");
            return;
        }
        case Kind::SqDist:
        case Kind::Norm2:
            if (center_.size() != n) throw ValidationError("distance expression: center size != n");
            return;
        case Kind::WeightedSum: {
            if (weights_.size() != terms_.size())
                throw ValidationError("weighted_sum: weights/terms size mismatch");
            if (terms_.empty()) throw ValidationError("weighted_sum: no terms");
            for (double w : weights_)
                if (w < 0.0) throw ValidationError("weighted_sum: negative weight");
            for (const auto& t : terms_) t.validate(n);
            return;
        }
    }
}

double ConvexExpr::value(const Vec& x) const {
    switch (kind_) {
        case Kind::Affine: return c_.dot(x) + d_;
        case Kind::Quadratic: return x.dot(Q_ * x) + b_.dot(x) + d_;
        case Kind::SqDist: return (x - center_).squaredNorm() - rhs_;
        case Kind::Norm2: return (x - center_).norm() - rhs_;
        case Kind::WeightedSum: {
            double s = 0.0;
            for (size_t i = 0; i < terms_.size(); ++i) s += weights_[i] * terms_[i].value(x);
            return s;
        }
    }
    return 0.0;
}

double ConvexExpr::value_grad(const Vec& x, Vec& grad) const {
    switch (kind_) {
        case Kind::Affine:
            grad = c_;
            return value(x);
        case Kind::Quadratic:
            grad = 2.0 * (Q_ * x) + b_;
            return value(x);
        case Kind::SqDist:
            grad = 2.0 * (x - center_);
            return value(x);
        case Kind::Norm2: {
            Vec d = x - center_;
            double r = d.norm();
            grad = r > 0 ? Vec(d / r) : Vec(Vec::Zero(x.size()));
            return r - rhs_;
        }
        case Kind::WeightedSum: {
            grad = Vec::Zero(x.size());
            double s = 0.0;
            Vec g;
            for (size_t i = 0; i < terms_.size(); ++i) {
                s += weights_[i] * terms_[i].value_grad(x, g);
                grad += weights_[i] * g;
            }
            return s;
        }
    }
    return 0.0;
}

double ConvexExpr::value_grad_hess(const Vec& x, Vec& grad, Mat& hess, double smooth_delta) const {
    const int n = static_cast<int>(x.size());
    switch (kind_) {
        case Kind::Affine:
            grad = c_;
            hess = Mat::Zero(n, n);
            return value(x);
        case Kind::Quadratic:
            grad = 2.0 * (Q_ * x) + b_;
            hess = 2.0 * Q_;
            return value(x);
        case Kind::SqDist:
            grad = 2.0 * (x - center_);
            hess = 2.0 * Mat::Identity(n, n);
            return value(x);
        case Kind::Norm2: {
            Vec d = x - center_;
            double r = std::sqrt(d.squaredNorm() + smooth_delta * smooth_delta);
            if (r == 0.0) {
                grad = Vec::Zero(n);
                hess = Mat::Zero(n, n);
                return -rhs_;
            }
            grad = d / r;
            hess = (Mat::Identity(n, n) - (d * d.transpose()) / (r * r)) / r;
            return r - rhs_;
        }
        case Kind::WeightedSum: {
            grad = Vec::Zero(n);
            hess = Mat::Zero(n, n);
            double s = 0.0;
            Vec g;
            Mat h;
            for (size_t i = 0; i < terms_.size(); ++i) {
                s += weights_[i] * terms_[i].value_grad_hess(x, g, h, smooth_delta);
                grad += weights_[i] * g;
                hess += weights_[i] * h;
            }
            return s;
        }
    }
    return 0.0;
}

Interval ConvexExpr::bounds(const Vec& lo, const Vec& hi) const {
    const int n = static_cast<int>(lo.size());
    switch (kind_) {
        case Kind::Affine: {
            Interval r{d_, d_};
            for (int i = 0; i < n; ++i) r = iv_add(r, iv_scale(iv(lo[i], hi[i]), c_[i]));
            return r;
        }
        case Kind::Quadratic: {
            Interval r{d_, d_};
            for (int i = 0; i < n; ++i) {
                r = iv_add(r, iv_scale(iv(lo[i], hi[i]), b_[i]));
                for (int j = 0; j < n; ++j) {
                    if (Q_(i, j) == 0.0) continue;
                    Interval p = (i == j) ? iv_square(iv(lo[i], hi[i]))
                                          : iv_mul(iv(lo[i], hi[i]), iv(lo[j], hi[j]));
                    r = iv_add(r, iv_scale(p, Q_(i, j)));
                }
            }
            return r;
        }
        case Kind::SqDist: {
            Interval r{-rhs_, -rhs_};
            for (int i = 0; i < n; ++i)
                r = iv_add(r, iv_square(iv(lo[i] - center_[i], hi[i] - center_[i])));
            return r;
        }
        case Kind::Norm2: {
            Interval sq{0.0, 0.0};
            for (int i = 0; i < n; ++i)
                sq = iv_add(sq, iv_square(iv(lo[i] - center_[i], hi[i] - center_[i])));
            return {std::sqrt(std::max(0.0, sq.lo)) - rhs_, std::sqrt(sq.hi) - rhs_};
        }
        case Kind::WeightedSum: {
            Interval r{0.0, 0.0};
            for (size_t i = 0; i < terms_.size(); ++i) {
                if (weights_[i] == 0.0) continue;
                r = iv_add(r, iv_scale(terms_[i].bounds(lo, hi), weights_[i]));
            }
            return r;
        }
    }
    return {0.0, 0.0};
}

bool ConvexExpr::operator==(const ConvexExpr& other) const {
    if (kind_ != other.kind_) return false;
    switch (kind_) {
        case Kind::Affine: return c_ == other.c_ && d_ == other.d_;
        case Kind::Quadratic: return Q_ == other.Q_ && b_ == other.b_ && d_ == other.d_;
        case Kind::SqDist:
        case Kind::Norm2: return center_ == other.center_ && rhs_ == other.rhs_;
        case Kind::WeightedSum: return weights_ == other.weights_ && terms_ == other.terms_;
    }
    return false;
}

}  // namespace cvop
