#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvop {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : Error {
    using Error::Error;
};

enum class Norm { L1, L2, LInf };

Norm dual_norm(Norm n);
double norm_eval(Norm n, const Vec& z);
double dual_norm_eval(Norm n, const Vec& w);
std::string norm_name(Norm n);
Norm norm_from_name(const std::string& s);

/// Closed halfspace {y : normal^T y >= offset}.
struct Halfspace {
    Vec normal;
    double offset = 0.0;

    Halfspace() = default;
    Halfspace(Vec n, double b);

    // Signed slack; nonnegative inside the halfspace.
    double slack(const Vec& y) const { return normal.dot(y) - offset; }
    bool contains(const Vec& y, double tol = 0.0) const { return slack(y) >= -tol; }
};

/// H(w, y, eps) = {z : w^T z >= w^T y - eps/2} for a halfspace anchored at y
/// (offset == w^T y). Requires a nonzero normal with dual norm <= 1.
Halfspace shifted_halfspace(const Halfspace& h, double eps, Norm norm);

/// Polyhedral ordering cone, described from both sides: C = cone{c^1..c^M}
/// and C+ = cone{w^1..w^J}. Dual generators are renormalized to dual norm 1
/// on construction.
class PolyCone {
  public:
    // Rows of `dual_gens` are the w^j, rows of `gens` are the c^m.
    static PolyCone make(Mat dual_gens, Mat gens, Norm norm, double tol = kDefaultTol);

    int dim() const { return static_cast<int>(dual_gens_.cols()); }
    int num_dual_generators() const { return static_cast<int>(dual_gens_.rows()); }
    int num_generators() const { return static_cast<int>(gens_.rows()); }

    const Mat& dual_generators() const { return dual_gens_; }
    const Mat& generators() const { return gens_; }
    Vec dual_generator(int j) const { return dual_gens_.row(j); }
    Vec generator(int m) const { return gens_.row(m); }

    /// Normalized sum of the dual generators (dual norm 1); lies in Int C+.
    const Vec& w_bar() const { return w_bar_; }
    /// A direction in Int C (normalized sum of the generators).
    const Vec& interior_direction() const { return interior_dir_; }

    /// y in C within tolerance: (w^j)^T y >= -tol for all j.
    bool contains(const Vec& y, double tol) const;
    /// w in C+ within tolerance: w^T c^m >= -tol for all m.
    bool dual_contains(const Vec& w, double tol) const;

    static constexpr double kDefaultTol = 1e-9;

  private:
    Mat dual_gens_;
    Mat gens_;
    Vec w_bar_;
    Vec interior_dir_;
};

/// Cone membership as a free function, mirroring PolyCone::contains.
inline bool cone_contains(const PolyCone& cone, const Vec& y, double tol) {
    return cone.contains(y, tol);
}

}  // namespace cvop
