#include "cvop/problem.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "cvop/tomlmini.hpp"

namespace cvop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec to_vec(const toml::Value& v) {
    const auto& arr = v.array();
    Vec out(arr.size());
    for (size_t i = 0; i < arr.size(); ++i) out[i] = arr[i].number();
    return out;
}

Mat to_mat(const toml::Value& v) {
    const auto& arr = v.array();
    if (arr.empty()) throw toml::ParseError("empty matrix", v.line);
    const size_t cols = arr[0].array().size();
    Mat out(arr.size(), cols);
    for (size_t i = 0; i < arr.size(); ++i) {
        const auto& row = arr[i].array();
        if (row.size() != cols) throw toml::ParseError("ragged matrix rows", arr[i].line);
        for (size_t j = 0; j < cols; ++j) out(i, j) = row[j].number();
    }
    return out;
}

const toml::Value& require(const toml::Value& tbl, const std::string& key) {
    const toml::Value* v = tbl.find(key);
    if (!v) throw toml::ParseError("missing required key '" + key + "'", tbl.line);
    return *v;
}

ConvexExpr parse_expr(const toml::Value& rec) {
    const std::string& kind = require(rec, "kind").string();
    if (kind == "affine") {
        double d = rec.find("d") ? rec.find("d")->number() : 0.0;
        return ConvexExpr::affine(to_vec(require(rec, "c")), d);
    }
    if (kind == "quadratic") {
        double d = rec.find("d") ? rec.find("d")->number() : 0.0;
        return ConvexExpr::quadratic(to_mat(require(rec, "Q")), to_vec(require(rec, "b")), d);
    }
    if (kind == "sq_dist") {
        double rhs = rec.find("rhs") ? rec.find("rhs")->number() : 0.0;
        return ConvexExpr::sq_dist(to_vec(require(rec, "center")), rhs);
    }
    if (kind == "norm2") {
        double rhs = rec.find("rhs") ? rec.find("rhs")->number() : 0.0;
        return ConvexExpr::norm2(to_vec(require(rec, "center")), rhs);
    }
    if (kind == "weighted_sum") {
        const auto& warr = require(rec, "weights").array();
        std::vector<double> weights;
        weights.reserve(warr.size());
        for (const auto& w : warr) weights.push_back(w.number());
        std::vector<ConvexExpr> terms;
        for (const auto& t : require(rec, "terms").array()) terms.push_back(parse_expr(t));
        return ConvexExpr::weighted_sum(std::move(weights), std::move(terms));
    }
    throw toml::ParseError("unknown expression kind '" + kind + "'", rec.line);
}

std::vector<ConvexExpr> parse_expr_list(const toml::Value& v) {
    std::vector<ConvexExpr> out;
    for (const auto& rec : v.array()) out.push_back(parse_expr(rec));
    return out;
}

void emit_vec(std::ostream& os, const Vec& v) {
    os << "[";
    for (int i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        if (v[i] == kInf)
            os << "inf";
        else if (v[i] == -kInf)
            os << "-inf";
        else {
            char buf[40];
            snprintf(buf, sizeof(buf), "%.17g", v[i]);
            os << buf;
        }
    }
    os << "]";
}

void emit_num(std::ostream& os, double d) {
    char buf[40];
    snprintf(buf, sizeof(buf), "%.17g", d);
    os << buf;
}

void emit_expr(std::ostream& os, const ConvexExpr& e) {
    using Kind = ConvexExpr::Kind;
    switch (e.kind()) {
        case Kind::Affine:
            os << "{kind = \"affine\", c = ";
            emit_vec(os, e.lin_coeff());
            os << ", d = ";
            emit_num(os, e.constant());
            os << "}";
            return;
        case Kind::Quadratic: {
            os << "{kind = \"quadratic\", Q = [";
            for (int i = 0; i < e.quad_matrix().rows(); ++i) {
                if (i) os << ", ";
                emit_vec(os, e.quad_matrix().row(i));
            }
            os << "], b = ";
            emit_vec(os, e.quad_lin());
            os << ", d = ";
            emit_num(os, e.constant());
            os << "}";
            return;
        }
        case Kind::SqDist:
        case Kind::Norm2:
            os << "{kind = \"" << (e.kind() == Kind::SqDist ? "sq_dist" : "norm2")
               << "\", center = ";
            emit_vec(os, e.center());
            os << ", rhs = ";
            emit_num(os, e.rhs());
            os << "}";
            return;
        case Kind::WeightedSum: {
            os << "{kind = \"weighted_sum\", weights = [";
            for (size_t i = 0; i < e.weights().size(); ++i) {
                if (i) os << ", ";
                emit_num(os, e.weights()[i]);
            }
            os << "], terms = [";
            for (size_t i = 0; i < e.terms().size(); ++i) {
                if (i) os << ", ";
                emit_expr(os, e.terms()[i]);
            }
            os << "]}";
            return;
        }
    }
}

// Tighten [lo, hi] using simple single-variable consequences of g <= 0.
void tighten_box(const ConvexExpr& g, Vec& lo, Vec& hi) {
    using Kind = ConvexExpr::Kind;
    switch (g.kind()) {
        case Kind::Norm2:
        case Kind::SqDist: {
            double r = g.kind() == Kind::Norm2 ? g.rhs() : std::sqrt(std::max(0.0, g.rhs()));
            if (r < 0.0) return;
            for (int i = 0; i < g.center().size(); ++i) {
                lo[i] = std::max(lo[i], g.center()[i] - r);
                hi[i] = std::min(hi[i], g.center()[i] + r);
            }
            return;
        }
        case Kind::Affine: {
            // c_i x_i + d <= 0 with a single nonzero coefficient.
            int nz = -1;
            for (int i = 0; i < g.lin_coeff().size(); ++i)
                if (g.lin_coeff()[i] != 0.0) {
                    if (nz >= 0) return;
                    nz = i;
                }
            if (nz < 0) return;
            double bound = -g.constant() / g.lin_coeff()[nz];
            if (g.lin_coeff()[nz] > 0)
                hi[nz] = std::min(hi[nz], bound);
            else
                lo[nz] = std::max(lo[nz], bound);
            return;
        }
        default: return;
    }
}

}  // namespace

void CvopInstance::validate() {
    if (n < 1 || q < 1) throw ValidationError("n and q must be positive");
    if (static_cast<int>(objective.size()) != q)
        throw ValidationError("objective list must have q entries");
    for (const auto& e : objective) e.validate(n);
    for (const auto& g : constraints) g.validate(n);
    if (box_lower.size() != n || box_upper.size() != n)
        throw ValidationError("box bounds must have n entries");
    for (int i = 0; i < n; ++i)
        if (box_lower[i] > box_upper[i]) throw ValidationError("box lower > upper");
    if (cone.dim() != q) throw ValidationError("cone dimension != q");

    // C-convexity certificate: componentwise nonnegative dual generators make
    // every w in C+ a nonnegative combination of convex objectives.
    for (int j = 0; j < cone.num_dual_generators(); ++j)
        if (cone.dual_generators().row(j).minCoeff() < -PolyCone::kDefaultTol)
            throw ValidationError(
                "cannot certify C-convexity: dual generator " + std::to_string(j) +
                " has negative components");

    // Certify boundedness of X by tightening the box with per-coordinate
    // consequences of the constraints.
    tight_lower = box_lower;
    tight_upper = box_upper;
    for (const auto& g : constraints) tighten_box(g, tight_lower, tight_upper);
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(tight_lower[i]) || !std::isfinite(tight_upper[i]))
            throw ValidationError("feasible set not certifiably bounded in coordinate " +
                                  std::to_string(i));
        if (tight_lower[i] > tight_upper[i])
            throw ValidationError("empty feasible box after tightening");
    }

    // Strictly feasible point: declared, or the midpoint of the tightened box.
    Vec cand = slater_point ? *slater_point
                            : Vec(0.5 * (tight_lower + tight_upper));
    if (cand.size() != n) throw ValidationError("slater_point has wrong dimension");
    for (int i = 0; i < n; ++i) {
        double margin = 1e-12 * (1.0 + std::abs(tight_lower[i]) + std::abs(tight_upper[i]));
        if (cand[i] <= box_lower[i] + margin || cand[i] >= box_upper[i] - margin)
            throw ValidationError("interior point is not strictly inside the box");
    }
    for (size_t i = 0; i < constraints.size(); ++i) {
        double gi = constraints[i].value(cand);
        if (gi >= -1e-10 * (1.0 + std::abs(gi)))
            throw ValidationError("interior point is not strictly feasible for constraint " +
                                  std::to_string(i) + " (value " + std::to_string(gi) + ")");
    }
    interior_point = cand;

    if (beta) {
        beta_eff = *beta;
    } else {
        const Vec& wb = cone.w_bar();
        double b = 0.0;
        for (int i = 0; i < q; ++i) {
            Interval iv = objective[i].bounds(tight_lower, tight_upper);
            b += wb[i] >= 0.0 ? wb[i] * iv.hi : wb[i] * iv.lo;
        }
        if (!std::isfinite(b)) throw ValidationError("interval bound for beta is not finite");
        beta_eff = b;
    }
}

bool CvopInstance::feasible(const Vec& x, double tol) const {
    for (int i = 0; i < n; ++i)
        if (x[i] < box_lower[i] - tol || x[i] > box_upper[i] + tol) return false;
    for (const auto& g : constraints)
        if (g.value(x) > tol * (1.0 + std::abs(g.value(x)))) return false;
    return true;
}

CvopInstance parse_problem(const std::string& text) {
    toml::Value root = toml::parse(text);
    CvopInstance inst;

    double nd = require(root, "n").number();
    double qd = require(root, "q").number();
    inst.n = static_cast<int>(nd);
    inst.q = static_cast<int>(qd);
    if (inst.n != nd || inst.q != qd) throw ValidationError("n and q must be integers");
    inst.norm = norm_from_name(require(root, "norm").string());

    const toml::Value& cone = require(root, "cone");
    Mat dual_gens = to_mat(require(cone, "dual_generators"));
    Mat gens = to_mat(require(cone, "generators"));
    if (dual_gens.cols() != inst.q || gens.cols() != inst.q)
        throw ValidationError("cone generators must have q columns");
    inst.cone = PolyCone::make(std::move(dual_gens), std::move(gens), inst.norm);

    inst.objective = parse_expr_list(require(root, "objective"));
    if (const toml::Value* c = root.find("constraints")) inst.constraints = parse_expr_list(*c);

    inst.box_lower = Vec::Constant(inst.n, -kInf);
    inst.box_upper = Vec::Constant(inst.n, kInf);
    if (const toml::Value* box = root.find("box")) {
        if (const toml::Value* lo = box->find("lower")) inst.box_lower = to_vec(*lo);
        if (const toml::Value* hi = box->find("upper")) inst.box_upper = to_vec(*hi);
        if (inst.box_lower.size() != inst.n || inst.box_upper.size() != inst.n)
            throw ValidationError("box bounds must have n entries");
    }
    if (const toml::Value* b = root.find("beta")) inst.beta = b->number();
    if (const toml::Value* s = root.find("slater_point")) inst.slater_point = to_vec(*s);

    inst.validate();
    return inst;
}

std::string serialize_problem(const CvopInstance& inst) {
    std::ostringstream os;
    os << "n = " << inst.n << "\n";
    os << "q = " << inst.q << "\n";
    os << "norm = \"" << norm_name(inst.norm) << "\"\n\n";

    os << "objective = [\n";
    for (size_t i = 0; i < inst.objective.size(); ++i) {
        os << "  ";
        emit_expr(os, inst.objective[i]);
        os << (i + 1 < inst.objective.size() ? ",\n" : "\n");
    }
    os << "]\n";
    if (!inst.constraints.empty()) {
        os << "constraints = [\n";
        for (size_t i = 0; i < inst.constraints.size(); ++i) {
            os << "  ";
            emit_expr(os, inst.constraints[i]);
            os << (i + 1 < inst.constraints.size() ? ",\n" : "\n");
        }
        os << "]\n";
    }
    if (inst.beta) {
        os << "beta = ";
        emit_num(os, *inst.beta);
        os << "\n";
    }
    if (inst.slater_point) {
        os << "slater_point = ";
        emit_vec(os, *inst.slater_point);
        os << "\n";
    }
    os << "\n[cone]\n";
    os << "dual_generators = [";
    for (int j = 0; j < inst.cone.num_dual_generators(); ++j) {
        if (j) os << ", ";
        emit_vec(os, inst.cone.dual_generators().row(j));
    }
    os << "]\n";
    os << "generators = [";
    for (int m = 0; m < inst.cone.num_generators(); ++m) {
        if (m) os << ", ";
        emit_vec(os, inst.cone.generators().row(m));
    }
    os << "]\n\n[box]\n";
    os << "lower = ";
    emit_vec(os, inst.box_lower);
    os << "\nupper = ";
    emit_vec(os, inst.box_upper);
    os << "\n";
    return os.str();
}

namespace {

std::string example1_text(int q) {
    std::ostringstream os;
    os << "# Linear objective over a unit ball centered at e\n";
    os << "n = " << q << "\nq = " << q << "\nnorm = \"l2\"\n\n";
    os << "objective = [\n";
    for (int i = 0; i < q; ++i) {
        os << "  {kind = \"affine\", c = [";
        for (int j = 0; j < q; ++j) {
            if (j) os << ", ";
            os << (i == j ? 1 : 0);
        }
        os << "], d = 0}" << (i + 1 < q ? ",\n" : "\n");
    }
    os << "]\nconstraints = [\n  {kind = \"norm2\", center = [";
    for (int j = 0; j < q; ++j) {
        if (j) os << ", ";
        os << 1;
    }
    os << "], rhs = 1}\n]\n\n[cone]\n";
    auto identity_rows = [&](std::ostream& o) {
        o << "[";
        for (int i = 0; i < q; ++i) {
            if (i) o << ", ";
            o << "[";
            for (int j = 0; j < q; ++j) {
                if (j) o << ", ";
                o << (i == j ? 1 : 0);
            }
            o << "]";
        }
        o << "]";
    };
    os << "dual_generators = ";
    identity_rows(os);
    os << "\ngenerators = ";
    identity_rows(os);
    os << "\n";
    return os.str();
}

const char* kExample2 = R"(# Three squared distances under linear constraints
n = 2
q = 3
norm = "l2"

objective = [
  {kind = "sq_dist", center = [1, 1]},
  {kind = "sq_dist", center = [2, 3]},
  {kind = "sq_dist", center = [4, 2]}
]
constraints = [
  {kind = "affine", c = [1, 2], d = -10}
]

[cone]
dual_generators = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
generators = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]

[box]
lower = [0, 0]
upper = [10, 4]
)";

const char* kExample3 = R"(# Quadratics over a ball intersected with a box
n = 3
q = 3
norm = "l2"

objective = [
  {kind = "quadratic", Q = [[1, 0, 0], [0, 1, 0], [0, 0, 1]], b = [0, 10, -120], d = 0},
  {kind = "quadratic", Q = [[1, 0, 0], [0, 1, 0], [0, 0, 1]], b = [80, -448, 80], d = 0},
  {kind = "quadratic", Q = [[1, 0, 0], [0, 1, 0], [0, 0, 1]], b = [-448, 80, 80], d = 0}
]
constraints = [
  {kind = "sq_dist", center = [0, 0, 0], rhs = 100}
]

[cone]
dual_generators = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
generators = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]

[box]
lower = [0, 0, 0]
upper = [10, 10, 10]
)";

}  // namespace

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = {"example1_q2", "example1_q3", "example1_q4",
                                                   "example2", "example3"};
    return names;
}

std::string builtin_text(const std::string& name) {
    if (name == "example1_q2") return example1_text(2);
    if (name == "example1_q3") return example1_text(3);
    if (name == "example1_q4") return example1_text(4);
    if (name == "example2") return kExample2;
    if (name == "example3") return kExample3;
    throw ValidationError("unknown builtin problem '" + name + "'");
}

CvopInstance builtin(const std::string& name) { return parse_problem(builtin_text(name)); }

CvopInstance with_norm(const CvopInstance& inst, Norm norm) {
    CvopInstance out = inst;
    out.norm = norm;
    out.cone = PolyCone::make(inst.cone.dual_generators(), inst.cone.generators(), norm);
    out.validate();
    return out;
}

OracleEval eval_objective(const CvopInstance& inst, int i, const Vec& x) {
    if (i < 0 || i >= inst.q) throw Error("objective index out of range");
    OracleEval out;
    out.value = inst.objective[i].value_grad(x, out.gradient);
    return out;
}

OracleEval eval_scalarized(const CvopInstance& inst, const Vec& w, const Vec& x) {
    if (w.size() != inst.q) throw Error("weight vector has wrong dimension");
    if (!inst.cone.dual_contains(w, 1e-9 * (1.0 + w.lpNorm<Eigen::Infinity>())))
        throw ValidationError("weight vector is not in the dual cone");
    OracleEval out;
    out.value = 0.0;
    out.gradient = Vec::Zero(inst.n);
    Vec g;
    for (int i = 0; i < inst.q; ++i) {
        if (w[i] == 0.0) continue;
        out.value += w[i] * inst.objective[i].value_grad(x, g);
        out.gradient += w[i] * g;
    }
    return out;
}

}  // namespace cvop
