#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cvop/algorithm.hpp"
#include "cvop/report.hpp"
#include "cvop/verify.hpp"

namespace fs = std::filesystem;
using namespace cvop;

namespace {

enum ExitCode { kOk = 0, kCheckFailed = 1, kParseError = 2, kSolverError = 3, kSafetyCap = 4 };

int log_level() {
    const char* env = std::getenv("CVOP_LOG");
    if (!env) return 1;
    std::string v = env;
    if (v == "quiet") return 0;
    if (v == "debug") return 2;
    return 1;
}

void info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << msg << "\n";
}

CvopInstance load_problem(const std::string& spec, const std::string& norm_override) {
    CvopInstance inst;
    bool is_builtin = false;
    for (const auto& name : builtin_names())
        if (name == spec) is_builtin = true;
    if (is_builtin) {
        inst = builtin(spec);
    } else {
        std::ifstream in(spec);
        if (!in) throw ValidationError("cannot open problem file '" + spec + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        inst = parse_problem(buf.str());
    }
    if (!norm_override.empty()) inst = with_norm(inst, norm_from_name(norm_override));
    return inst;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write '" + p.string() + "'");
    out << content;
}

std::string solution_csv(const CvopInstance& inst, const SolveResult& res) {
    std::ostringstream os;
    for (int i = 0; i < inst.n; ++i) os << "x" << i + 1 << ",";
    for (int i = 0; i < inst.q; ++i) os << "y" << i + 1 << (i + 1 < inst.q ? "," : "\n");
    for (const auto& [x, y] : res.state.minimizers) {
        for (int i = 0; i < inst.n; ++i) os << format_float(x[i]) << ",";
        for (int i = 0; i < inst.q; ++i)
            os << format_float(y[i]) << (i + 1 < inst.q ? "," : "\n");
    }
    return os.str();
}

std::string outer_csv(const CvopInstance& inst, const SolveResult& res) {
    std::ostringstream os;
    os << "kind,";
    for (int i = 0; i < inst.q; ++i) os << "v" << i + 1 << ",";
    os << "offset\n";
    for (const auto& h : res.state.outer.h.halfspaces) {
        os << "halfspace,";
        for (int i = 0; i < inst.q; ++i) os << format_float(h.normal[i]) << ",";
        os << format_float(h.offset) << "\n";
    }
    for (const auto& v : res.state.outer.v.vertices) {
        os << "vertex,";
        for (int i = 0; i < inst.q; ++i) os << format_float(v[i]) << ",";
        os << "\n";
    }
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_solve(const std::string& problem, double eps, const std::string& norm,
              const std::string& out_dir, int threads, std::uint64_t seed, int samples) {
    CvopInstance inst = load_problem(problem, norm);
    RunConfig cfg;
    cfg.epsilon = eps;
    cfg.threads = threads;
    cfg.seed = seed;
    info("solving " + problem + " with epsilon " + format_float(eps));
    SolveResult res = run(inst, cfg);

    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "solution.csv", solution_csv(inst, res));
    write_file(fs::path(out_dir) / "outer.csv", outer_csv(inst, res));
    write_file(fs::path(out_dir) / "log.csv", log_csv(res.state.log));

    auto checks = run_verification(inst, res, cfg, samples, seed);
    std::ostringstream sum;
    sum << "problem: " << problem << "\n";
    sum << "epsilon: " << format_float(eps) << "\n";
    sum << "norm: " << norm_name(inst.norm) << "\n";
    sum << "iterations: " << res.state.k << "\n";
    sum << "gamma: " << format_float(res.state.gamma) << "\n";
    sum << "vertices: " << res.state.outer.v.size() << "\n";
    sum << "minimizers: " << res.state.minimizers.size() << "\n";
    sum << "status: "
        << (res.hit_safety_cap                                   ? "safety-cap"
            : res.final_status == StepStatus::PolyhedralReached ? "polyhedral"
                                                                 : "converged")
        << "\n";
    bool all_pass = true;
    for (const auto& c : checks) {
        sum << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
        all_pass = all_pass && c.pass;
    }
    write_file(fs::path(out_dir) / "summary.txt", sum.str());
    info("wrote " + out_dir + "/{solution,outer,log}.csv and summary.txt");

    if (res.hit_safety_cap) return kSafetyCap;
    return all_pass ? kOk : kCheckFailed;
}

int run_trace(const std::string& problem, double eps, long iters, const std::string& norm,
              const std::string& out_dir, int threads) {
    if (iters < 10) throw ValidationError("trace needs --iters >= 10");
    CvopInstance inst = load_problem(problem, norm);
    RunConfig cfg;
    cfg.epsilon = eps;
    cfg.mode = RunMode::Indefinite;
    cfg.indefinite_cuts = iters;
    cfg.threads = threads;
    info("tracing " + problem + " for " + std::to_string(iters) + " cuts");
    SolveResult res = run(inst, cfg);

    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "log.csv", log_csv(res.state.log));

    bool euclidean = inst.norm == Norm::L2;
    double expected = theoretical_exponent(inst.q, euclidean);
    std::ostringstream os;
    try {
        SlopeFit fit = fit_slope(res.state.log);
        bool pass = fit.slope <= expected + 0.3;
        os << "fitted_slope: " << format_float(fit.slope) << "\n";
        os << "intercept: " << format_float(fit.intercept) << "\n";
        os << "r2: " << format_float(fit.r2) << "\n";
        os << "records_used: " << fit.n_used << "\n";
        os << "theoretical_exponent: " << format_float(expected) << "\n";
        os << (pass ? "PASS" : "FAIL") << " slope criterion: fitted "
           << format_float(fit.slope) << " <= " << format_float(expected) << " + 0.3\n";
    } catch (const Error& e) {
        os << "FAIL slope criterion: " << e.what() << "\n";
    }
    write_file(fs::path(out_dir) / "slope.txt", os.str());
    info("wrote " + out_dir + "/log.csv and slope.txt");
    if (res.hit_safety_cap) return kSafetyCap;
    return kOk;
}

int run_verify(const std::string& problem, double eps, int samples, std::uint64_t seed,
               const std::string& norm, int threads) {
    CvopInstance inst = load_problem(problem, norm);
    RunConfig cfg;
    cfg.epsilon = eps;
    cfg.threads = threads;
    cfg.seed = seed;
    SolveResult res = run(inst, cfg);
    auto checks = run_verification(inst, res, cfg, samples, seed);
    bool all_pass = true;
    for (const auto& c : checks) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail;
        if (!c.pass && c.offending_k >= 0) std::cout << " (index " << c.offending_k << ")";
        std::cout << "\n";
        all_pass = all_pass && c.pass;
    }
    return all_pass ? kOk : kCheckFailed;
}

int run_report(const std::string& log_path, int q, bool euclidean, double c,
               const std::string& out_dir) {
    auto records = parse_log_csv(read_file(log_path));
    if (records.empty()) throw Error("log has no records");
    ReportOptions opt;
    opt.q = q;
    opt.euclidean = euclidean;
    opt.c = c;
    SlopeFit fit = fit_slope(records, opt.burn_in);
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "plot.svg", plot_svg(records, opt, fit));
    write_file(fs::path(out_dir) / "plot_data.csv", plot_data_csv(records, opt, fit));
    info("wrote " + out_dir + "/plot.svg and plot_data.csv");
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Outer approximation solver for bounded convex vector optimization"};
    app.require_subcommand(1);

    std::string problem, norm, out_dir = ".", log_path;
    double eps = 0.01, ref_c = 1.0;
    long iters = 100;
    int threads = 0, samples = 200, q = 2;
    std::uint64_t seed = 0;
    bool euclidean = true;

    auto add_common = [&](CLI::App* cmd, bool with_eps) {
        cmd->add_option("problem", problem, "builtin name or problem file path")->required();
        if (with_eps)
            cmd->add_option("--eps", eps, "approximation tolerance")
                ->required()
                ->check(CLI::PositiveNumber);
        cmd->add_option("--norm", norm, "override the instance norm (l1, l2, linf)");
        cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
    };

    CLI::App* solve = app.add_subcommand("solve", "run to a finite weak epsilon-solution");
    add_common(solve, true);
    solve->add_option("--out", out_dir, "output directory");
    solve->add_option("--seed", seed, "sampling seed for the summary checks");
    solve->add_option("--samples", samples, "sample count for the summary checks");

    CLI::App* trace = app.add_subcommand("trace", "run a fixed number of cuts for rate studies");
    add_common(trace, true);
    trace->add_option("--iters", iters, "number of cuts")->required();
    trace->add_option("--out", out_dir, "output directory");

    CLI::App* verify = app.add_subcommand("verify", "solve and run the invariant checks");
    add_common(verify, true);
    verify->add_option("--samples", samples, "sample count");
    verify->add_option("--seed", seed, "sampling seed");

    CLI::App* report = app.add_subcommand("report", "render a log-log plot from a trace log");
    report->add_option("log", log_path, "log.csv path")->required();
    report->add_option("--q", q, "objective dimension")->required();
    report->add_option("--euclidean", euclidean, "use the euclidean-rate exponent");
    report->add_option("--c", ref_c, "reference curve constant");
    report->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kParseError;
    }

    try {
        if (solve->parsed()) return run_solve(problem, eps, norm, out_dir, threads, seed, samples);
        if (trace->parsed()) return run_trace(problem, eps, iters, norm, out_dir, threads);
        if (verify->parsed()) return run_verify(problem, eps, samples, seed, norm, threads);
        if (report->parsed()) return run_report(log_path, q, euclidean, ref_c, out_dir);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParseError;
    } catch (const toml::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParseError;
    } catch (const SolveError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSolverError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParseError;
    }
    return kParseError;
}
