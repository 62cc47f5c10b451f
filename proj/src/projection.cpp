#include "cvop/projection.hpp"

#include <algorithm>

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace cvop {

namespace {

// Solves (diag(D) + F diag(sigma) F^T) x = b by the Woodbury identity. The
// capacitance matrix mixes row weights spanning many decades, so it is
// symmetrically equilibrated before factorization and the solution is
// polished by iterative refinement against the exactly-applied operator.
class RankSolver {
  public:
    RankSolver(const Vec& D, const Mat& F, const Vec& sigma) : D_(D), F_(F), sigma_(sigma) {
        const int r = static_cast<int>(F.cols());
        W_ = F;
        for (int j = 0; j < r; ++j) W_.col(j) = F.col(j).cwiseQuotient(D_);
        Mat K = (Mat(sigma.cwiseInverse().asDiagonal()) + F.transpose() * W_);
        equil_ = K.diagonal().cwiseAbs().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
        lu_.compute(equil_.asDiagonal() * K * equil_.asDiagonal());
    }

    Vec apply(const Vec& x) const {
        if (F_.cols() == 0) return D_.cwiseProduct(x);
        return D_.cwiseProduct(x) + F_ * sigma_.cwiseProduct(F_.transpose() * x);
    }

    Vec solve(const Vec& b) const {
        Vec x = solve_once(b);
        for (int pass = 0; pass < 2; ++pass) {
            Vec r = b - apply(x);
            double rn = r.lpNorm<Eigen::Infinity>();
            if (!(rn > 1e-14 * (1.0 + b.lpNorm<Eigen::Infinity>()))) break;
            x += solve_once(r);
        }
        return x;
    }

  private:
    Vec solve_once(const Vec& b) const {
        Vec y = b.cwiseQuotient(D_);
        if (F_.cols() == 0) return y;
        Vec rhs = equil_.cwiseProduct(F_.transpose() * y);
        return y - W_ * equil_.cwiseProduct(lu_.solve(rhs));
    }

    Vec D_;
    Mat F_;
    Vec sigma_;
    Mat W_;
    Vec equil_;
    Eigen::FullPivLU<Mat> lu_;
};

// Projection onto conv(V) + cone(C) as a barrier method. The last simplex
// weight is substituted out (lambda_last = 1 - sum lambda_i), so every
// constraint is an inequality and iterates cannot leave the simplex:
//   bulk variables u >= 0  (nv-1 simplex weights, then cone weights)
//   small variables v      (epigraph lift for L1 / LInf; empty for L2)
//   dense row sum(lambda) - 1 <= 0.
// The L2 case minimizes 1/2 ||z(u)||^2 directly; L1/LInf minimize t over
// dense epigraph rows. Newton systems are diagonal-plus-low-rank over the
// bulk block and solved by block Schur elimination onto the small variables.
class PolytopeProjector {
  public:
    PolytopeProjector(const Vec& point, const std::vector<Vec>& vertices, const Mat* cone_gens,
                      Norm norm, const SolverConfig& cfg)
        : norm_(norm), cfg_(cfg) {
        q_ = static_cast<int>(point.size());
        nv_ = static_cast<int>(vertices.size());
        nc_ = cone_gens ? static_cast<int>(cone_gens->rows()) : 0;
        N_ = (nv_ - 1) + nc_;
        base_ = vertices.back();
        p_ = point - base_;  // z(u) = p_ - G u
        G_.resize(q_, std::max(N_, 1));
        for (int i = 0; i < nv_ - 1; ++i) G_.col(i) = vertices[i] - base_;
        for (int m = 0; m < nc_; ++m) G_.col(nv_ - 1 + m) = cone_gens->row(m).transpose();

        if (nv_ > 1) {
            DenseRow simplex;
            simplex.au = Vec::Zero(N_);
            simplex.au.head(nv_ - 1).setOnes();
            simplex.av = Vec();
            simplex.b = -1.0;
            rows_.push_back(std::move(simplex));
        }

        if (norm_ == Norm::L2) {
            m_ = 0;
        } else if (norm_ == Norm::LInf) {
            m_ = 1;  // t
        } else {
            m_ = q_ + 1;  // s_1..s_q, t
        }
        if (norm_ != Norm::L2) {
            for (int i = 0; i < q_; ++i)
                for (int sign : {+1, -1}) {
                    DenseRow r;
                    r.au = -sign * G_.row(i).transpose();
                    r.av = Vec::Zero(m_);
                    r.av[norm_ == Norm::LInf ? 0 : i] = -1.0;
                    r.b = sign * p_[i];
                    rows_.push_back(std::move(r));
                }
            if (norm_ == Norm::L1) {
                DenseRow sum;
                sum.au = Vec::Zero(N_);
                sum.av = Vec::Zero(m_);
                sum.av.head(q_).setOnes();
                sum.av[q_] = -1.0;
                sum.b = 0.0;
                rows_.push_back(std::move(sum));
            }
        }
    }

    ProjectionResult run() {
        Vec u = Vec::Constant(N_, 0.0);
        for (int i = 0; i < nv_ - 1; ++i) u[i] = 1.0 / (nv_ + 1);
        for (int m = 0; m < nc_; ++m) u[nv_ - 1 + m] = 0.01;
        Vec v(m_);
        Vec z0 = residual(u);
        if (norm_ == Norm::L1) {
            for (int i = 0; i < q_; ++i) v[i] = std::abs(z0[i]) + 1.0;
            v[q_] = v.head(q_).sum() + 1.0;
        } else if (norm_ == Norm::LInf) {
            v[0] = z0.lpNorm<Eigen::Infinity>() + 1.0;
        }

        const double nu = static_cast<double>(N_ + rows_.size());
        double obj0 = norm_ == Norm::L2 ? 0.5 * residual(u).squaredNorm() : v[m_ - 1];
        double tau = std::min(1.0, 1.0 / (1.0 + std::abs(obj0)));
        for (int round = 0; round < 2 * cfg_.max_barrier_iters; ++round) {
            bool ok = center(u, v, tau);
            if (std::getenv("CVOP_PROJ_TRACE"))
                fprintf(stderr, "[proj] round=%d tau=%.1e dist=%.8g ok=%d\n", round, tau,
                        norm_eval(norm_, residual(u)), (int)ok);
            if (!ok) break;  // precision wall
            double dist = norm_eval(norm_, residual(u));
            double target = norm_ == Norm::L2 ? 0.5e-8 * (1e-6 + dist * dist)
                                              : 0.5e-8 * (1.0 + dist);
            if (nu / tau <= target || tau >= 1e14) break;
            tau *= cfg_.barrier_mu;
        }
        ProjectionResult res;
        res.nearest = point_minus(residual(u));
        res.dist = norm_eval(norm_, residual(u));
        final_weights_.assign(static_cast<size_t>(nv_ + nc_), 0.0);
        double lam_sum = 0.0;
        for (int i = 0; i < nv_ - 1; ++i) {
            final_weights_[i] = u[i];
            lam_sum += u[i];
        }
        final_weights_[nv_ - 1] = 1.0 - lam_sum;
        for (int m = 0; m < nc_; ++m) final_weights_[nv_ + m] = u[nv_ - 1 + m];
        return res;
    }

    const std::vector<double>& final_weights() const { return final_weights_; }

  private:
    struct DenseRow {
        Vec au;  // bulk coefficients
        Vec av;  // small coefficients (empty or m_)
        double b = 0.0;
    };

    Vec p_;
    Vec base_;
    std::vector<double> final_weights_;
    Norm norm_;
    SolverConfig cfg_;
    int q_ = 0, nv_ = 0, nc_ = 0, N_ = 0, m_ = 0;
    Mat G_;
    std::vector<DenseRow> rows_;

    Vec residual(const Vec& u) const { return N_ ? Vec(p_ - G_ * u) : p_; }
    Vec point_minus(const Vec& z) const { return base_ + (p_ - z); }

    double row_value(const DenseRow& r, const Vec& u, const Vec& v) const {
        double x = r.b + (N_ ? r.au.dot(u) : 0.0);
        if (r.av.size()) x += r.av.dot(v);
        return x;
    }

    bool feasible(const Vec& u, const Vec& v) const {
        if ((u.array() <= 0.0).any()) return false;
        for (const auto& r : rows_)
            if (!(row_value(r, u, v) < 0.0)) return false;
        return true;
    }

    double merit(const Vec& u, const Vec& v, double tau) const {
        double f = 0.0;
        if (norm_ == Norm::L2)
            f = 0.5 * tau * residual(u).squaredNorm();
        else
            f = tau * v[m_ - 1];
        f -= u.array().log().sum();
        for (const auto& r : rows_) f -= std::log(-row_value(r, u, v));
        return f;
    }

    // Returns false on numerical breakdown (direction unusable).
    bool center(Vec& u, Vec& v, double tau) {
        for (int it = 0; it < cfg_.max_newton; ++it) {
            Vec gu = -u.cwiseInverse();
            Vec gv = Vec::Zero(m_);
            if (norm_ == Norm::L2)
                gu += tau * (G_.transpose() * (G_ * u - p_));
            else
                gv[m_ - 1] += tau;

            const int r_rows = static_cast<int>(rows_.size());
            const int r_qp = norm_ == Norm::L2 ? q_ : 0;
            Mat F(N_, r_rows + r_qp);
            Vec sigma(r_rows + r_qp);
            Mat Fv(m_, r_rows);
            for (int k = 0; k < r_rows; ++k) {
                double val = row_value(rows_[k], u, v);
                gu += rows_[k].au / (-val);
                if (rows_[k].av.size()) gv += rows_[k].av / (-val);
                F.col(k) = rows_[k].au;
                if (m_) Fv.col(k) = rows_[k].av.size() ? rows_[k].av : Vec(Vec::Zero(m_));
                sigma[k] = 1.0 / (val * val);
            }
            for (int k = 0; k < r_qp; ++k) {
                F.col(r_rows + k) = G_.row(k).transpose();
                sigma[r_rows + k] = tau;
            }

            Vec D = u.array().square().inverse();
            RankSolver hs(D, F, sigma);

            Vec du;
            Vec dv(m_);
            if (m_ == 0) {
                du = hs.solve(-gu);
            } else {
                Mat Hvv = Mat::Zero(m_, m_);
                Mat Huv = Mat::Zero(N_, m_);
                for (int k = 0; k < r_rows; ++k) {
                    Hvv += sigma[k] * (Fv.col(k) * Fv.col(k).transpose());
                    Huv += sigma[k] * (F.col(k) * Fv.col(k).transpose());
                }
                Vec sol0 = hs.solve(-gu);
                Mat solH(N_, m_);
                for (int j = 0; j < m_; ++j) solH.col(j) = hs.solve(Huv.col(j));
                Mat S = Hvv - Huv.transpose() * solH;
                Vec srhs = -gv - Huv.transpose() * sol0;
                dv = S.fullPivLu().solve(srhs);
                du = sol0 - solH * dv;
            }
            if (!du.allFinite() || !dv.allFinite()) return false;

            double decrement2 = -(gu.dot(du) + (m_ ? gv.dot(dv) : 0.0));
            if (std::isnan(decrement2) || decrement2 < -1e-6) return false;
            if (decrement2 <= 1e-11) return true;  // centered

            double f0 = merit(u, v, tau);
            double step = 1.0;
            bool moved = false;
            while (step > 1e-16) {
                Vec uu = u + step * du;
                Vec vv = m_ ? Vec(v + step * dv) : v;
                if (feasible(uu, vv)) {
                    double f1 = merit(uu, vv, tau);
                    if (f1 <= f0 - 0.25 * step * decrement2 || f1 < f0) {
                        u = uu;
                        v = vv;
                        moved = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if (!moved) return false;  // stalled at float precision
        }
        return true;
    }
};

}  // namespace

ProjectionResult project_onto_polytope(const Vec& point, const std::vector<Vec>& vertices,
                                       const Mat* cone_generators, Norm norm,
                                       const SolverConfig& cfg) {
    if (vertices.empty()) throw ValidationError("projection target has no vertices");
    if (vertices.size() == 1 && (!cone_generators || cone_generators->rows() == 0)) {
        ProjectionResult r;
        r.nearest = vertices[0];
        r.dist = norm_eval(norm, point - vertices[0]);
        return r;
    }
    // Work in a unit-scale frame; conditioning of the Newton systems would
    // otherwise degrade with the coordinate magnitude.
    double scale = point.lpNorm<Eigen::Infinity>();
    for (const auto& v : vertices) scale = std::max(scale, v.lpNorm<Eigen::Infinity>());
    scale = std::max(scale, 1.0);
    std::vector<Vec> scaled;
    scaled.reserve(vertices.size());
    for (const auto& v : vertices) scaled.push_back(v / scale);
    PolytopeProjector proj(point / scale, scaled, cone_generators, norm, cfg);
    ProjectionResult r = proj.run();
    r.nearest *= scale;
    r.dist *= scale;

    // The piecewise-linear norms stall earlier than the euclidean path, so
    // re-solve over the heavy support columns; both distances are upper
    // bounds and the small solve centers much deeper.
    const int q = static_cast<int>(point.size());
    const int nv = static_cast<int>(vertices.size());
    const int nc = cone_generators ? static_cast<int>(cone_generators->rows()) : 0;
    const int keep = 3 * (q + 1);
    if (norm != Norm::L2 && nv > 2) {
        const auto& wts = proj.final_weights();
        std::vector<int> order(nv);
        for (int i = 0; i < nv; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) { return wts[a] > wts[b]; });
        int take = std::min(nv, keep);
        std::vector<Vec> sub;
        sub.reserve(take);
        for (int i = 0; i < take; ++i) sub.push_back(scaled[order[i]]);
        PolytopeProjector small(point / scale, sub, cone_generators, norm, cfg);
        ProjectionResult rs = small.run();
        if (rs.dist * scale < r.dist) {
            r.dist = rs.dist * scale;
            r.nearest = rs.nearest * scale;
        }
    }
    (void)nc;
    return r;
}

ProjectionResult project_to_hpolytope(const Vec& point, const HPolytope& p, const Vec& interior,
                                      Norm norm, const SolverConfig& cfg) {
    double scale = std::max(1.0, std::max(point.lpNorm<Eigen::Infinity>(),
                                          interior.lpNorm<Eigen::Infinity>()));
    if (scale > 1.0) {
        HPolytope ps;
        ps.halfspaces.reserve(p.halfspaces.size());
        for (const auto& h : p.halfspaces) ps.append(Halfspace(h.normal, h.offset / scale));
        ProjectionResult r = project_to_hpolytope(point / scale, ps, interior / scale, norm, cfg);
        r.nearest *= scale;
        r.dist *= scale;
        return r;
    }
    const int q = static_cast<int>(point.size());
    const bool l1 = norm == Norm::L1;
    BarrierProblem bp;
    bp.dim = q + 1 + (l1 ? q : 0);
    bp.objective = Vec::Zero(bp.dim);
    bp.objective[q] = 1.0;
    for (const auto& h : p.halfspaces) {
        BarrierRow r;
        r.a = Vec::Zero(bp.dim);
        r.a.head(q) = -h.normal;
        r.b = h.offset;
        bp.rows.push_back(std::move(r));
    }
    // Norm epigraph over z = point - y.
    switch (norm) {
        case Norm::L2: {
            SocBlock s;
            s.A = Mat::Zero(q, bp.dim);
            s.A.topLeftCorner(q, q) = -Mat::Identity(q, q);
            s.bz = point;
            s.c = Vec::Zero(bp.dim);
            s.c[q] = 1.0;
            bp.socs.push_back(std::move(s));
            break;
        }
        case Norm::LInf:
            for (int i = 0; i < q; ++i)
                for (int sign : {+1, -1}) {
                    BarrierRow r;
                    r.a = Vec::Zero(bp.dim);
                    r.a[i] = -sign;
                    r.a[q] = -1.0;
                    r.b = sign * point[i];
                    bp.rows.push_back(std::move(r));
                }
            break;
        case Norm::L1: {
            for (int i = 0; i < q; ++i)
                for (int sign : {+1, -1}) {
                    BarrierRow r;
                    r.a = Vec::Zero(bp.dim);
                    r.a[i] = -sign;
                    r.a[q + 1 + i] = -1.0;
                    r.b = sign * point[i];
                    bp.rows.push_back(std::move(r));
                }
            BarrierRow sum;
            sum.a = Vec::Zero(bp.dim);
            sum.a.segment(q + 1, q).setOnes();
            sum.a[q] = -1.0;
            bp.rows.push_back(std::move(sum));
            break;
        }
    }
    bp.start = Vec::Zero(bp.dim);
    bp.start.head(q) = interior;
    Vec z0 = point - interior;
    if (l1) {
        for (int i = 0; i < q; ++i) bp.start[q + 1 + i] = std::abs(z0[i]) + 1.0;
        bp.start[q] = bp.start.segment(q + 1, q).sum() + 1.0;
    } else {
        bp.start[q] = norm_eval(norm, z0) + 1.0;
    }
    BarrierResult br = solve_barrier(bp, cfg);
    ProjectionResult res;
    res.nearest = br.u.head(q);
    res.dist = norm_eval(norm, point - res.nearest);
    return res;
}

Vec vertex_centroid(const VRep& v) {
    if (v.empty()) throw ValidationError("vertex centroid of an empty vertex set");
    Vec c = Vec::Zero(v.vertices[0].size());
    for (const auto& y : v.vertices) c += y;
    return c / static_cast<double>(v.size());
}

}  // namespace cvop
