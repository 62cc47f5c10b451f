#include "cvop/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cvop {

namespace {

struct Pt {
    double x, y;
};

std::vector<Pt> usable_points(const std::vector<IterationRecord>& records) {
    std::vector<Pt> pts;
    for (const auto& r : records) {
        if (r.k < 1 || !(r.hausdorff_outer_to_upper > 0.0)) continue;
        pts.push_back({std::log(static_cast<double>(r.k)), std::log(r.hausdorff_outer_to_upper)});
    }
    return pts;
}

std::string fmt(double v) {
    char buf[32];
    snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

}  // namespace

std::string plot_svg(const std::vector<IterationRecord>& records, const ReportOptions& opt,
                     const SlopeFit& fit) {
    auto pts = usable_points(records);
    if (pts.empty()) throw Error("plot: no usable records");
    double xmin = pts.front().x, xmax = pts.front().x, ymin = pts.front().y, ymax = pts.front().y;
    const double e = theoretical_exponent(opt.q, opt.euclidean);
    for (const auto& p : pts) {
        double ref = std::log(opt.c) + e * p.x;
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min({ymin, p.y, ref});
        ymax = std::max({ymax, p.y, ref});
    }
    if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
    if (ymax - ymin < 1e-12) ymax = ymin + 1.0;
    const double W = 720, H = 540, L = 70, R = 20, T = 30, B = 55;
    auto sx = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    auto sy = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Axes and ticks.
    os << "<g stroke=\"#333\" stroke-width=\"1\">\n";
    os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
       << "\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
       << "\"/>\n</g>\n";
    os << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
    for (int i = 0; i <= 6; ++i) {
        double x = xmin + (xmax - xmin) * i / 6.0;
        double y = ymin + (ymax - ymin) * i / 6.0;
        os << "<line x1=\"" << sx(x) << "\" y1=\"" << H - B << "\" x2=\"" << sx(x) << "\" y2=\""
           << H - B + 4 << "\" stroke=\"#333\"/>\n";
        os << "<text x=\"" << sx(x) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">"
           << fmt(x) << "</text>\n";
        os << "<line x1=\"" << L - 4 << "\" y1=\"" << sy(y) << "\" x2=\"" << L << "\" y2=\""
           << sy(y) << "\" stroke=\"#333\"/>\n";
        os << "<text x=\"" << L - 8 << "\" y=\"" << sy(y) + 4 << "\" text-anchor=\"end\">"
           << fmt(y) << "</text>\n";
    }
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
       << "\" text-anchor=\"middle\">log k</text>\n";
    os << "<text x=\"16\" y=\"" << (T + H - B) / 2
       << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << (T + H - B) / 2
       << ")\">log distance</text>\n</g>\n";

    // Scatter.
    os << "<g fill=\"#c62828\">\n";
    for (const auto& p : pts)
        os << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y) << "\" r=\"2.2\"/>\n";
    os << "</g>\n";

    // Regression line over the data range.
    os << "<line x1=\"" << sx(xmin) << "\" y1=\"" << sy(fit.intercept + fit.slope * xmin)
       << "\" x2=\"" << sx(xmax) << "\" y2=\"" << sy(fit.intercept + fit.slope * xmax)
       << "\" stroke=\"black\" stroke-width=\"2\"/>\n";

    // Reference curve log(c k^e).
    os << "<line x1=\"" << sx(xmin) << "\" y1=\"" << sy(std::log(opt.c) + e * xmin) << "\" x2=\""
       << sx(xmax) << "\" y2=\"" << sy(std::log(opt.c) + e * xmax)
       << "\" stroke=\"#1565c0\" stroke-width=\"2\" stroke-dasharray=\"6 4\"/>\n";

    // Legend.
    os << "<g font-family=\"sans-serif\" font-size=\"13\">\n";
    os << "<circle cx=\"" << W - 220 << "\" cy=\"" << T + 12 << "\" r=\"3\" fill=\"#c62828\"/>"
       << "<text x=\"" << W - 208 << "\" y=\"" << T + 16 << "\">log distance</text>\n";
    os << "<line x1=\"" << W - 228 << "\" y1=\"" << T + 32 << "\" x2=\"" << W - 212 << "\" y2=\""
       << T + 32 << "\" stroke=\"black\" stroke-width=\"2\"/><text x=\"" << W - 208 << "\" y=\""
       << T + 36 << "\">regression (slope " << fmt(fit.slope) << ")</text>\n";
    os << "<line x1=\"" << W - 228 << "\" y1=\"" << T + 52 << "\" x2=\"" << W - 212 << "\" y2=\""
       << T + 52 << "\" stroke=\"#1565c0\" stroke-width=\"2\" stroke-dasharray=\"6 4\"/><text x=\""
       << W - 208 << "\" y=\"" << T + 56 << "\">" << fmt(opt.c) << " k^" << fmt(e)
       << "</text>\n</g>\n";
    os << "</svg>\n";
    return os.str();
}

std::string plot_data_csv(const std::vector<IterationRecord>& records, const ReportOptions& opt,
                          const SlopeFit& fit) {
    const double e = theoretical_exponent(opt.q, opt.euclidean);
    std::ostringstream os;
    os << "k,log_k,log_dist,fit,reference\n";
    for (const auto& r : records) {
        if (r.k < 1 || !(r.hausdorff_outer_to_upper > 0.0)) continue;
        double lk = std::log(static_cast<double>(r.k));
        os << r.k << ',' << format_float(lk) << ','
           << format_float(std::log(r.hausdorff_outer_to_upper)) << ','
           << format_float(fit.intercept + fit.slope * lk) << ','
           << format_float(std::log(opt.c) + e * lk) << '\n';
    }
    return os.str();
}

}  // namespace cvop
