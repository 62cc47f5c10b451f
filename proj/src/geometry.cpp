#include "cvop/geometry.hpp"

namespace cvop {

Norm dual_norm(Norm n) {
    switch (n) {
        case Norm::L1: return Norm::LInf;
        case Norm::L2: return Norm::L2;
        case Norm::LInf: return Norm::L1;
    }
    throw Error("unknown norm kind");
}

double norm_eval(Norm n, const Vec& z) {
    switch (n) {
        case Norm::L1: return z.lpNorm<1>();
        case Norm::L2: return z.norm();
        case Norm::LInf: return z.size() == 0 ? 0.0 : z.lpNorm<Eigen::Infinity>();
    }
    throw Error("unknown norm kind");
}

double dual_norm_eval(Norm n, const Vec& w) { return norm_eval(dual_norm(n), w); }

std::string norm_name(Norm n) {
    switch (n) {
        case Norm::L1: return "l1";
        case Norm::L2: return "l2";
        case Norm::LInf: return "linf";
    }
    throw Error("unknown norm kind");
}

Norm norm_from_name(const std::string& s) {
    if (s == "l1") return Norm::L1;
    if (s == "l2") return Norm::L2;
    if (s == "linf") return Norm::LInf;
    throw ValidationError("unknown norm name: '" + s + "' (expected l1, l2 or linf)");
}

Halfspace::Halfspace(Vec n, double b) : normal(std::move(n)), offset(b) {
    if (normal.size() == 0 || normal.lpNorm<Eigen::Infinity>() == 0.0)
        throw ValidationError("halfspace normal must be nonzero");
}

Halfspace shifted_halfspace(const Halfspace& h, double eps, Norm norm) {
    if (eps <= 0.0) throw ValidationError("shifted halfspace needs eps > 0");
    double wn = dual_norm_eval(norm, h.normal);
    if (wn == 0.0) throw ValidationError("shifted halfspace needs a nonzero normal");
    if (wn > 1.0 + 1e-9)
        throw ValidationError("shifted halfspace needs dual norm of the normal <= 1");
    return Halfspace(h.normal, h.offset - eps / 2.0);
}

PolyCone PolyCone::make(Mat dual_gens, Mat gens, Norm norm, double tol) {
    const int q = static_cast<int>(dual_gens.cols());
    if (q < 1) throw ValidationError("cone: empty dual generator rows");
    if (gens.cols() != q)
        throw ValidationError("cone: generator dimension mismatch");
    const int J = static_cast<int>(dual_gens.rows());
    const int M = static_cast<int>(gens.rows());
    if (J < q)
        throw ValidationError("cone: needs at least q dual generators (C+ must be solid)");
    if (M < 1) throw ValidationError("cone: needs at least one primal generator");

    // Normalize each w^j to dual norm 1 rather than rejecting.
    for (int j = 0; j < J; ++j) {
        double s = dual_norm_eval(norm, dual_gens.row(j).transpose());
        if (s <= tol) throw ValidationError("cone: dual generator " + std::to_string(j) + " is zero");
        dual_gens.row(j) /= s;
    }

    // Cross-consistency: every primal generator lies in (C+)+.
    for (int j = 0; j < J; ++j)
        for (int m = 0; m < M; ++m)
            if (dual_gens.row(j).dot(gens.row(m)) < -tol)
                throw ValidationError("cone: generator " + std::to_string(m) +
                                      " violates dual generator " + std::to_string(j));

    PolyCone c;
    c.dual_gens_ = std::move(dual_gens);
    c.gens_ = std::move(gens);

    Vec wsum = c.dual_gens_.colwise().sum().transpose();
    double wsum_norm = dual_norm_eval(norm, wsum);
    if (wsum_norm <= tol) throw ValidationError("cone: dual generators sum to zero");
    c.w_bar_ = wsum / wsum_norm;

    // Pointedness witness: w_bar strictly positive on every generator.
    for (int m = 0; m < M; ++m)
        if (c.w_bar_.dot(c.gens_.row(m)) <= tol)
            throw ValidationError("cone: not pointed (w_bar^T c^" + std::to_string(m) +
                                  " is not positive)");

    Vec csum = c.gens_.colwise().sum().transpose();
    double cn = csum.norm();
    if (cn <= tol) throw ValidationError("cone: generators sum to zero");
    c.interior_dir_ = csum / cn;
    // Solidity witness: the summed generator direction must be strictly
    // interior, i.e. strictly positive against every dual generator.
    for (int j = 0; j < J; ++j)
        if (c.dual_gens_.row(j).dot(c.interior_dir_) <= tol)
            throw ValidationError("cone: not solid (interior direction fails dual generator " +
                                  std::to_string(j) + ")");
    return c;
}

bool PolyCone::contains(const Vec& y, double tol) const {
    for (int j = 0; j < dual_gens_.rows(); ++j)
        if (dual_gens_.row(j).dot(y) < -tol) return false;
    return true;
}

bool PolyCone::dual_contains(const Vec& w, double tol) const {
    for (int m = 0; m < gens_.rows(); ++m)
        if (gens_.row(m).dot(w) < -tol) return false;
    return true;
}

}  // namespace cvop
