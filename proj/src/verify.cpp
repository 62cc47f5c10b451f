#include "cvop/verify.hpp"

#include <cmath>
#include <random>

#include "cvop/projection.hpp"
#include "cvop/scalarization.hpp"

namespace cvop {

std::vector<Vec> sample_feasible(const CvopInstance& inst, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Vec> out;
    out.reserve(count);
    long attempts = 0;
    const long cap = 10000L * count + 10000L;
    while (static_cast<int>(out.size()) < count && attempts < cap) {
        ++attempts;
        Vec x(inst.n);
        for (int i = 0; i < inst.n; ++i)
            x[i] = inst.tight_lower[i] +
                   (inst.tight_upper[i] - inst.tight_lower[i]) * unit(rng);
        if (inst.feasible(x, 0.0)) out.push_back(std::move(x));
    }
    if (static_cast<int>(out.size()) < count)
        throw SolveError("feasible-point sampling failed (acceptance rate too low)");
    return out;
}

std::vector<CheckResult> run_verification(const CvopInstance& inst, const SolveResult& result,
                                          const RunConfig& cfg, int samples, std::uint64_t seed) {
    std::vector<CheckResult> checks;
    const AlgoState& st = result.state;

    {  // Certified duality gaps and the Lemma 5.1 identities.
        CheckResult c;
        c.name = "duality-gap";
        c.pass = true;
        for (const auto& e : st.cache) {
            const auto& s = e.sol;
            double rel = s.gap / (1.0 + std::abs(s.objective_value));
            c.measure = std::max(c.measure, rel);
            if (rel > 1e-6) c.pass = false;
            if (s.objective_value > 1e-5) {
                double dn = dual_norm_eval(inst.norm, s.w_tilde);
                if (std::abs(dn - 1.0) > 1e-6) c.pass = false;
                if (std::abs(s.objective_value - s.w_tilde.dot(s.z)) >
                    1e-6 * (1.0 + s.objective_value))
                    c.pass = false;
            }
        }
        c.detail = "max relative gap " + format_float(c.measure) + " over " +
                   std::to_string(st.cache.size()) + " scalarization solves";
        checks.push_back(std::move(c));
    }

    std::vector<Vec> xs = sample_feasible(inst, samples, seed);

    {  // Every accumulated halfspace supports the sampled images.
        CheckResult c;
        c.name = "cut-validity";
        c.pass = true;
        c.measure = 0.0;
        for (const auto& x : xs) {
            Vec img = objective_image(inst, x);
            for (size_t r = 0; r < st.outer.h.halfspaces.size(); ++r) {
                const auto& h = st.outer.h.halfspaces[r];
                double scale = 1.0 + std::abs(h.offset);
                double viol = -h.slack(img) / scale;
                c.measure = std::max(c.measure, viol);
                if (viol > 1e-6) {
                    c.pass = false;
                    c.offending_k = static_cast<long>(r);
                }
            }
        }
        c.detail = "max relative violation " + format_float(c.measure) + " over " +
                   std::to_string(xs.size()) + " sampled images";
        checks.push_back(std::move(c));
    }

    {  // Theorem 6.3: consecutive Hausdorff distance equals max ||z||.
        CheckResult c;
        c.name = "h-sequence-equality";
        c.pass = true;
        for (const auto& rec : st.log) {
            if (!rec.hausdorff_consecutive) continue;
            double dev = std::abs(*rec.hausdorff_consecutive - rec.max_dist) /
                         (1.0 + rec.max_dist);
            if (dev > c.measure) c.measure = dev;
            if (dev > 1e-5) {
                c.pass = false;
                if (c.offending_k < 0) c.offending_k = rec.k;
            }
        }
        c.detail = "max relative deviation " + format_float(c.measure);
        checks.push_back(std::move(c));
    }

    {  // Nested outer sets: the final vertices satisfy every halfspace.
        CheckResult c;
        c.name = "nestedness";
        c.pass = true;
        for (const auto& v : st.outer.v.vertices)
            for (size_t r = 0; r < st.outer.h.halfspaces.size(); ++r) {
                const auto& h = st.outer.h.halfspaces[r];
                double viol = -h.slack(v) / (1.0 + std::abs(h.offset));
                c.measure = std::max(c.measure, viol);
                if (viol > 1e-6) {
                    c.pass = false;
                    c.offending_k = static_cast<long>(r);
                }
            }
        c.detail = "max relative violation " + format_float(c.measure);
        checks.push_back(std::move(c));
    }

    {  // Gamma sanity: sampled images stay strictly inside S(gamma).
        CheckResult c;
        c.name = "gamma-sanity";
        c.pass = true;
        double worst = -std::numeric_limits<double>::infinity();
        for (const auto& x : xs)
            worst = std::max(worst, st.w_bar.dot(objective_image(inst, x)) - st.gamma);
        c.measure = worst;
        c.pass = worst < -1e-9;
        c.detail = "max w_bar'Gamma(x) - gamma = " + format_float(worst);
        checks.push_back(std::move(c));
    }

    {  // Def 2.3 sandwich: outer vertices within epsilon of the inner set.
        CheckResult c;
        c.name = "sandwich";
        c.pass = true;
        std::vector<Vec> images;
        images.reserve(st.minimizers.size());
        for (const auto& [x, y] : st.minimizers) images.push_back(y);
        Mat gens = inst.cone.generators();
        for (const auto& v : st.outer.v.vertices) {
            double d = project_onto_polytope(v, images, &gens, inst.norm, cfg.solver).dist;
            c.measure = std::max(c.measure, d);
            if (d > cfg.epsilon + 1e-6) c.pass = false;
        }
        c.detail = "max distance " + format_float(c.measure) + " vs epsilon " +
                   format_float(cfg.epsilon);
        if (result.final_status != StepStatus::Converged &&
            result.final_status != StepStatus::PolyhedralReached && !result.hit_safety_cap)
            c.pass = false;
        checks.push_back(std::move(c));
    }

    {  // Lemma 4.4: enumerated vertices never lie interior to the upper image.
        CheckResult c;
        c.name = "vertex-exteriority";
        c.pass = true;
        int limit = std::min<int>(static_cast<int>(st.outer.v.vertices.size()), 16);
        Vec cbar = inst.cone.interior_direction();
        for (int i = 0; i < limit; ++i) {
            const Vec& v = st.outer.v.vertices[i];
            double d = solve_norm_min(inst, v, cfg.solver).objective_value;
            if (d <= 1e-6) {
                // On the boundary: stepping into -Int C must leave P.
                Vec probe = v - 1e-3 * (1.0 + v.norm()) * cbar;
                double dp = solve_norm_min(inst, probe, cfg.solver).objective_value;
                c.measure = std::max(c.measure, dp > 1e-8 ? 0.0 : 1.0);
                if (dp <= 1e-8) c.pass = false;
            }
        }
        c.detail = "checked " + std::to_string(limit) + " vertices";
        checks.push_back(std::move(c));
    }

    return checks;
}

}  // namespace cvop
