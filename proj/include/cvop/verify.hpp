#pragma once

#include <string>
#include <vector>

#include "cvop/algorithm.hpp"

namespace cvop {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measure = 0.0;   // worst observed quantity, check-specific
    std::string detail;
    long offending_k = -1;  // iteration index for per-iteration checks
};

/// Deterministic feasible-point sampler: uniform over the certified box with
/// rejection on the constraints.
std::vector<Vec> sample_feasible(const CvopInstance& inst, int count, std::uint64_t seed);

/// The invariant suite over a finished run: duality gaps and the norm
/// identities, cut validity on sampled images, the consecutive-Hausdorff
/// identity, nestedness of the final vertex set, gamma sanity and the
/// epsilon sandwich. All tolerances are fixed here.
std::vector<CheckResult> run_verification(const CvopInstance& inst, const SolveResult& result,
                                          const RunConfig& cfg, int samples, std::uint64_t seed);

}  // namespace cvop
