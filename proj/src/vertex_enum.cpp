#include "cvop/vertex_enum.hpp"

#include <algorithm>
#include <cmath>

namespace cvop {

namespace detail {

bool lex_less(const Vec& a, const Vec& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}

void sort_vrep(VRep& v) {
    const int n = v.size();
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return lex_less(v.vertices[i], v.vertices[j]); });
    VRep out;
    out.vertices.reserve(n);
    out.incidence.reserve(n);
    for (int i : order) {
        out.vertices.push_back(std::move(v.vertices[i]));
        out.incidence.push_back(std::move(v.incidence[i]));
    }
    v = std::move(out);
}

// Rank by Gaussian elimination with full pivoting and an absolute pivot
// threshold (rows are unit-scale normals here).
int row_rank(const std::vector<Vec>& rows, double pivot_tol) {
    if (rows.empty()) return 0;
    const int m = static_cast<int>(rows.size());
    const int n = static_cast<int>(rows[0].size());
    Mat a(m, n);
    for (int i = 0; i < m; ++i) a.row(i) = rows[i];
    int rank = 0;
    std::vector<bool> used_col(n, false);
    for (int step = 0; step < std::min(m, n); ++step) {
        int pi = -1, pj = -1;
        double best = pivot_tol;
        for (int i = rank; i < m; ++i)
            for (int j = 0; j < n; ++j)
                if (!used_col[j] && std::abs(a(i, j)) > best) {
                    best = std::abs(a(i, j));
                    pi = i;
                    pj = j;
                }
        if (pi < 0) break;
        a.row(pi).swap(a.row(rank));
        used_col[pj] = true;
        for (int i = rank + 1; i < m; ++i) {
            double f = a(i, pj) / a(rank, pj);
            a.row(i) -= f * a.row(rank);
        }
        ++rank;
    }
    return rank;
}

}  // namespace detail

namespace {

double row_scale(const Halfspace& h, const Vec& y) {
    return 1.0 + std::abs(h.offset) + h.normal.norm() * y.norm();
}

bool feasible_point(const HPolytope& p, const Vec& y, double tol) {
    for (const auto& h : p.halfspaces)
        if (h.slack(y) < -tol * row_scale(h, y)) return false;
    return true;
}

// Solve the q x q system formed by the selected rows; empty when singular.
std::optional<Vec> solve_subset(const HPolytope& p, const std::vector<int>& idx,
                                double pivot_tol) {
    const int q = p.dim();
    Mat a(q, q);
    Vec b(q);
    for (int i = 0; i < q; ++i) {
        a.row(i) = p.halfspaces[idx[i]].normal;
        b[i] = p.halfspaces[idx[i]].offset;
    }
    Eigen::FullPivLU<Mat> lu(a);
    lu.setThreshold(pivot_tol);
    if (lu.rank() < q) return std::nullopt;
    Vec y = lu.solve(b);
    if (!y.allFinite()) return std::nullopt;
    return y;
}

void dedup_sorted(std::vector<Vec>& pts, double dedup_tol) {
    if (pts.empty()) return;
    double maxc = 0.0;
    for (const auto& v : pts) maxc = std::max(maxc, v.lpNorm<Eigen::Infinity>());
    const double tol = dedup_tol * (1.0 + maxc);
    std::sort(pts.begin(), pts.end(), detail::lex_less);
    std::vector<Vec> out;
    for (auto& v : pts) {
        bool dup = false;
        // Sorted order keeps near-duplicates adjacent except across ties in
        // leading coordinates, so scan back over the recent tail.
        for (auto it = out.rbegin(); it != out.rend(); ++it) {
            if ((*it - v).lpNorm<Eigen::Infinity>() <= tol) {
                dup = true;
                break;
            }
            if (v[0] - (*it)[0] > tol) break;
        }
        if (!dup) out.push_back(std::move(v));
    }
    pts = std::move(out);
}

}  // namespace

std::vector<int> active_set(const HPolytope& p, const Vec& y, double act_tol) {
    std::vector<int> act;
    for (int i = 0; i < static_cast<int>(p.halfspaces.size()); ++i)
        if (std::abs(p.halfspaces[i].slack(y)) <= act_tol * row_scale(p.halfspaces[i], y))
            act.push_back(i);
    return act;
}

std::vector<Vec> vertex_candidates(const HPolytope& p, const EnumTols& tols) {
    const int q = p.dim();
    const int m = static_cast<int>(p.halfspaces.size());
    std::vector<Vec> found;
    if (m < q || q == 0) return found;

    std::vector<int> idx(q);
    // Iterate over all q-subsets of rows in lexicographic order.
    for (int i = 0; i < q; ++i) idx[i] = i;
    while (true) {
        if (auto y = solve_subset(p, idx, tols.pivot)) {
            if (feasible_point(p, *y, tols.feas)) found.push_back(std::move(*y));
        }
        int i = q - 1;
        while (i >= 0 && idx[i] == m - q + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < q; ++j) idx[j] = idx[j - 1] + 1;
    }
    dedup_sorted(found, tols.dedup);
    return found;
}

bool is_bounded(const HPolytope& p, const EnumTols& tols) {
    const int q = p.dim();
    const int m = static_cast<int>(p.halfspaces.size());
    if (q == 0) return true;

    std::vector<Vec> rows;
    rows.reserve(m);
    for (const auto& h : p.halfspaces) rows.push_back(h.normal.normalized());
    if (detail::row_rank(rows, tols.pivot) < q) return false;  // lineality direction

    auto admits_direction = [&](const Vec& d) {
        for (const auto& h : p.halfspaces)
            if (h.normal.normalized().dot(d) < -tols.feas) return false;
        return true;
    };

    if (q == 1) {
        // Rank-q with q == 1 means both directions are blocked already.
        Vec d(1);
        d[0] = 1.0;
        return !(admits_direction(d) || admits_direction(-d));
    }

    // A pointed nontrivial recession cone has an extreme ray supported by
    // q-1 linearly independent active rows; enumerate all (q-1)-subsets.
    std::vector<int> idx(q - 1);
    for (int i = 0; i < q - 1; ++i) idx[i] = i;
    while (true) {
        Mat a(q - 1, q);
        for (int i = 0; i < q - 1; ++i) a.row(i) = rows[idx[i]];
        Eigen::FullPivLU<Mat> lu(a);
        lu.setThreshold(tols.pivot);
        if (lu.rank() == q - 1) {
            Mat ns = lu.kernel();
            if (ns.cols() >= 1) {
                Vec d = ns.col(0).normalized();
                if (admits_direction(d) || admits_direction(-d)) return false;
            }
        }
        int i = q - 2;
        while (i >= 0 && idx[i] == m - (q - 1) + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < q - 1; ++j) idx[j] = idx[j - 1] + 1;
    }
    return true;
}

VRep enumerate_brute(const HPolytope& p, const EnumTols& tols) {
    if (!is_bounded(p, tols)) throw UnboundedPolytopeError("polytope is unbounded");
    auto pts = vertex_candidates(p, tols);
    if (pts.empty()) throw EmptyPolytopeError("polytope is empty");
    VRep out;
    double maxc = 0.0;
    for (const auto& v : pts) maxc = std::max(maxc, v.lpNorm<Eigen::Infinity>());
    for (auto& v : pts) {
        out.incidence.push_back(active_set(p, v, tols.act));
        out.vertices.push_back(std::move(v));
    }
    return out;
}

void cut_update(VRep& v, HPolytope& p, const Halfspace& h, const EnumTols& tols) {
    const int q = p.dim();
    const int nv = v.size();
    std::vector<double> slack(nv);
    std::vector<int> cls(nv);  // 1 strictly inside, 0 on, -1 outside
    for (int i = 0; i < nv; ++i) {
        slack[i] = h.slack(v.vertices[i]);
        double band = tols.act * row_scale(h, v.vertices[i]);
        cls[i] = slack[i] > band ? 1 : (slack[i] < -band ? -1 : 0);
    }

    const int new_row = static_cast<int>(p.halfspaces.size());
    p.append(h);

    VRep next;
    for (int i = 0; i < nv; ++i) {
        if (cls[i] < 0) continue;
        next.vertices.push_back(v.vertices[i]);
        auto inc = v.incidence[i];
        if (cls[i] == 0) inc.push_back(new_row);
        next.incidence.push_back(std::move(inc));
    }

    // Crossing edges: a strictly-inside / strictly-outside pair whose shared
    // active set spans a (q-1)-dimensional face.
    std::vector<Vec> new_pts;
    for (int a = 0; a < nv; ++a) {
        if (cls[a] != 1) continue;
        for (int b = 0; b < nv; ++b) {
            if (cls[b] != -1) continue;
            std::vector<int> shared;
            std::set_intersection(v.incidence[a].begin(), v.incidence[a].end(),
                                  v.incidence[b].begin(), v.incidence[b].end(),
                                  std::back_inserter(shared));
            if (static_cast<int>(shared.size()) < q - 1) continue;
            std::vector<Vec> rows;
            rows.reserve(shared.size());
            for (int r : shared) rows.push_back(p.halfspaces[r].normal.normalized());
            if (detail::row_rank(rows, tols.pivot) != q - 1) continue;
            double theta = slack[a] / (slack[a] - slack[b]);
            new_pts.push_back(v.vertices[a] + theta * (v.vertices[b] - v.vertices[a]));
        }
    }

    if (!new_pts.empty()) {
        dedup_sorted(new_pts, tols.dedup);
        double maxc = 0.0;
        for (const auto& y : next.vertices) maxc = std::max(maxc, y.lpNorm<Eigen::Infinity>());
        for (const auto& y : new_pts) maxc = std::max(maxc, y.lpNorm<Eigen::Infinity>());
        const double dd = tols.dedup * (1.0 + maxc);
        for (auto& y : new_pts) {
            bool dup = false;
            for (const auto& kept : next.vertices)
                if ((kept - y).lpNorm<Eigen::Infinity>() <= dd) {
                    dup = true;
                    break;
                }
            if (dup) continue;
            next.incidence.push_back(active_set(p, y, tols.act));
            next.vertices.push_back(std::move(y));
        }
    }

    if (next.empty()) {
        p.halfspaces.pop_back();
        throw EmptyPolytopeError("cut eliminates every vertex");
    }
    detail::sort_vrep(next);
    v = std::move(next);
}

}  // namespace cvop
