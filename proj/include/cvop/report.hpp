#pragma once

#include <string>
#include <vector>

#include "cvop/metrics.hpp"

namespace cvop {

struct ReportOptions {
    int q = 2;
    bool euclidean = true;
    double c = 1.0;       // reference curve constant
    double burn_in = 0.2;
};

/// Self-contained SVG: log-log scatter of the recorded distances, the OLS
/// regression line and the reference curve c * k^e. Natural-log axes.
std::string plot_svg(const std::vector<IterationRecord>& records, const ReportOptions& opt,
                     const SlopeFit& fit);

/// Per-point data backing the plot: k, log_k, log_dist, fit, reference.
std::string plot_data_csv(const std::vector<IterationRecord>& records, const ReportOptions& opt,
                          const SlopeFit& fit);

}  // namespace cvop
