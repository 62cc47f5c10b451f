#include "cvop/metrics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace cvop {

std::string format_float(double v) {
    char buf[40];
    snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double hausdorff_consecutive(const VRep& prev, const VRep& cur, Norm norm,
                             const SolverConfig& cfg) {
    if (prev.empty() || cur.empty()) throw ValidationError("hausdorff: empty vertex set");

    double scale = 0.0;
    for (const auto& y : prev.vertices) scale = std::max(scale, y.lpNorm<Eigen::Infinity>());
    const double same_tol = 1e-9 * (1.0 + scale);

    // Vertices shared with prev are trivially inside; check the rest.
    auto in_prev = [&](const Vec& y) {
        for (const auto& z : prev.vertices)
            if ((y - z).lpNorm<Eigen::Infinity>() <= same_tol) return true;
        return false;
    };
    for (const auto& y : cur.vertices) {
        if (in_prev(y)) continue;
        auto pr = project_onto_polytope(y, prev.vertices, nullptr, norm, cfg);
        if (pr.dist > 1e-6 * (1.0 + scale))
            throw ValidationError("hausdorff: inputs are not nested (cur not inside prev)");
    }

    auto in_cur = [&](const Vec& y) {
        for (const auto& z : cur.vertices)
            if ((y - z).lpNorm<Eigen::Infinity>() <= same_tol) return true;
        return false;
    };
    double best = 0.0;
    for (const auto& y : prev.vertices) {
        if (in_cur(y)) continue;
        auto pr = project_onto_polytope(y, cur.vertices, nullptr, norm, cfg);
        best = std::max(best, pr.dist);
    }
    return best;
}

std::pair<Vec, double> min_enclosing_ball(const std::vector<Vec>& points,
                                          const SolverConfig& cfg) {
    if (points.empty()) throw ValidationError("min_enclosing_ball: no points");
    const int q = static_cast<int>(points[0].size());
    Vec centroid = Vec::Zero(q);
    for (const auto& p : points) centroid += p;
    centroid /= static_cast<double>(points.size());
    double rmax = 0.0;
    for (const auto& p : points) rmax = std::max(rmax, (p - centroid).norm());
    if (points.size() == 1) return {points[0], 0.0};

    // minimize r subject to ||p_i - c|| <= r; variables (c, r).
    BarrierProblem bp;
    bp.dim = q + 1;
    bp.objective = Vec::Zero(bp.dim);
    bp.objective[q] = 1.0;
    for (const auto& p : points) {
        SocBlock s;
        s.A = Mat::Zero(q, bp.dim);
        s.A.topLeftCorner(q, q) = -Mat::Identity(q, q);
        s.bz = p;
        s.c = Vec::Zero(bp.dim);
        s.c[q] = 1.0;
        bp.socs.push_back(std::move(s));
    }
    bp.start = Vec::Zero(bp.dim);
    bp.start.head(q) = centroid;
    bp.start[q] = rmax * 1.5 + 1.0;

    SolverConfig tight = cfg;
    tight.tol_gap = 1e-11;
    tight.max_barrier_iters = std::max(cfg.max_barrier_iters, 80);
    BarrierResult br = solve_barrier(bp, tight);
    Vec center = br.u.head(q);
    double r = 0.0;
    for (const auto& p : points) r = std::max(r, (p - center).norm());
    return {std::move(center), r};
}

SlopeFit fit_slope(const std::vector<IterationRecord>& log, double burn_in, double tol_zero) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& rec : log) {
        if (rec.k < 1) continue;
        if (!(rec.hausdorff_outer_to_upper > tol_zero)) continue;
        pts.emplace_back(std::log(static_cast<double>(rec.k)),
                         std::log(rec.hausdorff_outer_to_upper));
    }
    size_t skip = static_cast<size_t>(burn_in * static_cast<double>(pts.size()));
    if (pts.size() < 10 || pts.size() - skip < 10)
        throw Error("fit_slope: fewer than 10 usable records");
    pts.erase(pts.begin(), pts.begin() + static_cast<long>(skip));

    double n = static_cast<double>(pts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    double den = n * sxx - sx * sx;
    if (den <= 0.0) throw Error("fit_slope: degenerate abscissae");
    SlopeFit f;
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (auto [x, y] : pts) {
        double e = y - (f.slope * x + f.intercept);
        ss_res += e * e;
    }
    f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    f.n_used = static_cast<int>(pts.size());
    return f;
}

double theoretical_exponent(int q, bool euclidean) {
    if (q < 2) throw ValidationError("theoretical rate needs q >= 2");
    return (euclidean ? 2.0 : 1.0) / (1.0 - static_cast<double>(q));
}

double theoretical_curve(int q, bool euclidean, double c, double k) {
    return c * std::pow(k, theoretical_exponent(q, euclidean));
}

double unit_ball_volume(int q) {
    return std::pow(std::numbers::pi, q / 2.0) / std::tgamma(q / 2.0 + 1.0);
}

RateConstants rate_constants(const std::vector<Vec>& final_vertices, int q, bool euclidean,
                             const SolverConfig& cfg) {
    RateConstants rc;
    auto [center, R] = min_enclosing_ball(final_vertices, cfg);
    rc.R = R;
    rc.pi_q = unit_ball_volume(q);
    rc.pi_qminus1 = unit_ball_volume(q - 1);
    rc.lambda_bar =
        16.0 * R * std::pow(q * rc.pi_q / rc.pi_qminus1, 2.0 / (static_cast<double>(q) - 1.0));
    rc.theoretical_exponent = theoretical_exponent(q, euclidean);
    return rc;
}

std::string log_csv(const std::vector<IterationRecord>& records) {
    std::ostringstream os;
    os << "k,max_dist,hausdorff_consecutive,n_vertices,n_solves,n_cache_hits,wall_ms\n";
    for (const auto& r : records) {
        os << r.k << ',' << format_float(r.max_dist) << ',';
        if (r.hausdorff_consecutive) os << format_float(*r.hausdorff_consecutive);
        os << ',' << r.n_vertices << ',' << r.n_solves << ',' << r.n_cache_hits << ','
           << format_float(r.wall_ms) << '\n';
    }
    return os.str();
}

std::vector<IterationRecord> parse_log_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw Error("log csv: empty file");
    if (line.rfind("k,max_dist", 0) != 0) throw Error("log csv: missing header row");
    std::vector<IterationRecord> out;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.push_back("");
        if (cells.size() != 7)
            throw Error("log csv: line " + std::to_string(lineno) + " has " +
                        std::to_string(cells.size()) + " cells, expected 7");
        try {
            IterationRecord r;
            r.k = std::stol(cells[0]);
            r.max_dist = std::stod(cells[1]);
            r.hausdorff_outer_to_upper = r.max_dist;
            if (!cells[2].empty()) r.hausdorff_consecutive = std::stod(cells[2]);
            r.n_vertices = std::stoi(cells[3]);
            r.n_solves = std::stoi(cells[4]);
            r.n_cache_hits = std::stoi(cells[5]);
            r.wall_ms = std::stod(cells[6]);
            out.push_back(r);
        } catch (const std::exception&) {
            throw Error("log csv: malformed number on line " + std::to_string(lineno));
        }
    }
    return out;
}

}  // namespace cvop
