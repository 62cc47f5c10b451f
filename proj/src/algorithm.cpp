#include "cvop/algorithm.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "cvop/projection.hpp"

namespace cvop {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

constexpr double kCacheMatchTol = 1e-8;  // tol_dedup, in the scaled frame

}  // namespace

void RunConfig::validate() const {
    if (!(epsilon > 0.0)) throw ValidationError("run config: epsilon must be positive");
    if (mode == RunMode::Indefinite && indefinite_cuts < 1)
        throw ValidationError("run config: indefinite mode needs at least one cut");
    if (max_iters < 1) throw ValidationError("run config: max_iters must be positive");
}

Vec objective_image(const CvopInstance& inst, const Vec& x) {
    Vec y(inst.q);
    for (int i = 0; i < inst.q; ++i) y[i] = inst.objective[i].value(x);
    return y;
}

const VertexCacheEntry* AlgoState::find_cached(const Vec& v) const {
    const double tol = kCacheMatchTol * coord_scale;
    for (const auto& e : cache)
        if ((e.vertex - v).lpNorm<Eigen::Infinity>() <= tol) return &e;
    return nullptr;
}

AlgoState initialize(const CvopInstance& inst, const RunConfig& cfg) {
    cfg.validate();
    AlgoState st;
    st.w_bar = inst.cone.w_bar();

    // Weighted-sum solves along the dual generators give the initial
    // minimizer pool and the supporting rows of the initial outer set.
    HPolytope p0;
    for (int j = 0; j < inst.cone.num_dual_generators(); ++j) {
        Vec wj = inst.cone.dual_generator(j);
        auto [xj, valj] = solve_weighted_sum(inst, wj, cfg.solver);
        p0.append(Halfspace(wj, valj));
        Vec img = objective_image(inst, xj);
        bool dup = false;
        for (const auto& [mx, my] : st.minimizers)
            if ((mx - xj).lpNorm<Eigen::Infinity>() <= 1e-10 * (1.0 + mx.lpNorm<Eigen::Infinity>())) {
                dup = true;
                break;
            }
        if (!dup) st.minimizers.emplace_back(std::move(xj), std::move(img));
    }

    // gamma = beta + max(w_bar^T v - beta)^+ + max d(v, P) + margin over the
    // vertices of the (typically unbounded) initial outer polyhedron.
    auto verts0 = vertex_candidates(p0);
    if (verts0.empty())
        throw SolveError("initial outer polyhedron has no vertices; problem not bounded");
    double excess = 0.0;
    double max_dist = 0.0;
    for (const auto& v : verts0) {
        excess = std::max(excess, st.w_bar.dot(v) - inst.beta_eff);
        max_dist = std::max(max_dist, solve_norm_min(inst, v, cfg.solver).objective_value);
    }
    const double scale = 1.0 + std::abs(inst.beta_eff);
    st.gamma = inst.beta_eff + std::max(excess, 0.0) + max_dist + std::max(1e-6 * scale, 1e-9);

    st.outer.h = p0;
    st.outer.h.append(Halfspace(-st.w_bar, -st.gamma));  // S(gamma) row
    st.outer.v = enumerate_brute(st.outer.h);

    double maxc = 0.0;
    for (const auto& v : st.outer.v.vertices) maxc = std::max(maxc, v.lpNorm<Eigen::Infinity>());
    st.coord_scale = 1.0 + maxc;
    return st;
}

namespace {

// Solve every vertex that is in neither cache, in parallel, and append the
// results to the cache in deterministic (lexicographic) vertex order.
void solve_pending(AlgoState& st, const CvopInstance& inst, const RunConfig& cfg,
                   int& solves, int& hits) {
    std::vector<const Vec*> pending;
    for (const auto& v : st.outer.v.vertices) {
        if (st.find_cached(v))
            ++hits;
        else
            pending.push_back(&v);
    }
    solves = static_cast<int>(pending.size());
    if (pending.empty()) return;

    std::vector<PrimalDualSolution> sols(pending.size());
    std::vector<std::string> errors(pending.size());
    unsigned hw = std::thread::hardware_concurrency();
    int want = cfg.threads > 0 ? cfg.threads : (hw ? static_cast<int>(hw) : 1);
    int nthreads = std::min<int>(want, static_cast<int>(pending.size()));

    auto work = [&](std::atomic<size_t>& next) {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= pending.size()) return;
            try {
                sols[i] = solve_modified(inst, *pending[i], st.gamma, st.w_bar, cfg.solver);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    if (nthreads <= 1) {
        std::atomic<size_t> next{0};
        work(next);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t) pool.emplace_back([&] { work(next); });
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (!e.empty()) throw SolveError("vertex scalarization failed: " + e);

    for (size_t i = 0; i < pending.size(); ++i) {
        VertexCacheEntry entry;
        entry.vertex = *pending[i];
        entry.sol = std::move(sols[i]);
        entry.accepted = false;
        st.cache.push_back(std::move(entry));
    }
    st.total_solves += solves;
}

}  // namespace

StepOutcome step(AlgoState& st, const CvopInstance& inst, const RunConfig& cfg) {
    auto t0 = Clock::now();
    int solves = 0, hits = 0;
    solve_pending(st, inst, cfg, solves, hits);
    st.total_cache_hits += hits;

    // Acceptance pass: vertices within epsilon contribute their minimizers.
    const double tol = kCacheMatchTol * st.coord_scale;
    VertexCacheEntry* argmax = nullptr;
    for (const auto& v : st.outer.v.vertices) {
        for (auto& e : st.cache) {
            if ((e.vertex - v).lpNorm<Eigen::Infinity>() > tol) continue;
            if (!e.accepted && e.sol.objective_value <= cfg.epsilon) {
                e.accepted = true;
                st.minimizers.emplace_back(e.sol.x, objective_image(inst, e.sol.x));
            }
            if (!argmax || e.sol.objective_value > argmax->sol.objective_value ||
                (e.sol.objective_value == argmax->sol.objective_value &&
                 detail::lex_less(e.vertex, argmax->vertex)))
                argmax = &e;
            break;
        }
    }
    if (!argmax) throw SolveError("no cached solution for any current vertex");

    StepOutcome out;
    out.chosen_vertex = argmax->vertex;
    out.max_dist = argmax->sol.objective_value;

    IterationRecord rec;
    rec.k = st.k;
    rec.max_dist = out.max_dist;
    rec.hausdorff_outer_to_upper = out.max_dist;
    rec.n_vertices = st.outer.v.size();
    rec.n_solves = solves;
    rec.n_cache_hits = hits;

    const bool should_cut = cfg.mode == RunMode::Terminate
                                ? out.max_dist > cfg.epsilon
                                : out.max_dist > cfg.solver.tol_zero;
    if (!should_cut) {
        out.status = cfg.mode == RunMode::Terminate ? StepStatus::Converged
                                                    : StepStatus::PolyhedralReached;
        rec.wall_ms = ms_since(t0);
        st.log.push_back(rec);
        return out;
    }

    out.status = StepStatus::CutApplied;
    out.cut = Halfspace(argmax->sol.w_tilde, argmax->sol.w_tilde.dot(argmax->sol.y()));

    VRep before = st.outer.v;
    cut_update(st.outer.v, st.outer.h, out.cut);

    if (cfg.record_consecutive) {
        // delta^H(P_k, P_{k+1}) = max over removed vertices of the distance
        // to the cut polytope (retained vertices contribute zero).
        Vec inner = vertex_centroid(st.outer.v);
        double h = 0.0;
        const double match = 1e-9 * st.coord_scale;
        for (const auto& v : before.vertices) {
            bool kept = false;
            for (const auto& w : st.outer.v.vertices)
                if ((v - w).lpNorm<Eigen::Infinity>() <= match) {
                    kept = true;
                    break;
                }
            if (kept) continue;
            double d;
            try {
                d = project_to_hpolytope(v, st.outer.h, inner, inst.norm, cfg.solver).dist;
            } catch (const SolveError&) {
                // Degenerate (flat) polytope: fall back to the vertex hull.
                d = project_onto_polytope(v, st.outer.v.vertices, nullptr, inst.norm,
                                          cfg.solver)
                        .dist;
            }
            h = std::max(h, d);
        }
        rec.hausdorff_consecutive = h;
    }

    ++st.k;
    rec.wall_ms = ms_since(t0);
    st.log.push_back(rec);
    return out;
}

SolveResult run(const CvopInstance& inst, const RunConfig& cfg) {
    SolveResult res;
    res.state = initialize(inst, cfg);
    for (;;) {
        if (cfg.mode == RunMode::Indefinite && res.state.k >= cfg.indefinite_cuts) {
            res.final_status = StepStatus::Converged;
            break;
        }
        if (res.state.k >= cfg.max_iters) {
            res.hit_safety_cap = true;
            res.final_status = StepStatus::CutApplied;
            break;
        }
        StepOutcome out = step(res.state, inst, cfg);
        if (out.status != StepStatus::CutApplied) {
            res.final_status = out.status;
            break;
        }
    }
    return res;
}

Vec SolveResult::gamma_at(const CvopInstance& inst, const Vec& x) const {
    return objective_image(inst, x);
}

}  // namespace cvop
