#include "nullshell/workbench.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include "nullshell/distribution_lab.hpp"
#include "nullshell/matching_engine.hpp"
#include "nullshell/metric_assembly.hpp"
#include "nullshell/shell_physics.hpp"
#include "nullshell/tensor_core.hpp"

namespace nullshell {

using json = nlohmann::ordered_json;

namespace {

constexpr double kJunctionFlat = 1e-10;
constexpr double kJunctionCurved = 1e-9;
constexpr double kCurvature = 1e-8;
constexpr double kPullback = 1e-9;
constexpr double kDerivativeJump = 1e-9;
constexpr double kLipschitzSlope = 0.99;
constexpr double kProducts = 1e-8;
constexpr double kHalfIdentity = 1e-14;

std::string format_g17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// ---- configuration ---------------------------------------------------------

GridRange range_from_json(const json& j, const std::string& key) {
    if (j.is_string()) return parse_range(j.get<std::string>());
    if (!j.is_object()) throw ConfigError(key + ": expected \"lo:hi:step\" or {lo, hi, step}");
    GridRange g;
    for (const auto& [k, val] : j.items()) {
        if (!val.is_number()) throw ConfigError(key + "." + k + ": expected a number");
        if (k == "lo") g.lo = val.get<double>();
        else if (k == "hi") g.hi = val.get<double>();
        else if (k == "step") g.step = val.get<double>();
        else throw ConfigError("unknown key " + key + "." + k);
    }
    return g;
}

json range_to_json(const GridRange& g) { return json{{"lo", g.lo}, {"hi", g.hi}, {"step", g.step}}; }

double number_at(const json& j, const std::string& key) {
    if (!j.is_number()) throw ConfigError(key + ": expected a number");
    return j.get<double>();
}

std::string string_at(const json& j, const std::string& key) {
    if (!j.is_string()) throw ConfigError(key + ": expected a string");
    return j.get<std::string>();
}

void read_jump(const json& j, RunConfig& c) {
    if (!j.is_object()) throw ConfigError("jump: expected a table");
    for (const auto& [k, val] : j.items()) {
        if (k == "kind") c.jump_kind = string_at(val, "jump.kind");
        else if (k == "expression") c.expression = string_at(val, "jump.expression");
        else if (k == "example") {
            if (!val.is_object()) throw ConfigError("jump.example: expected a table");
            for (const auto& [p, x] : val.items()) {
                const double d = number_at(x, "jump.example." + p);
                if (p == "a") c.example.a = d;
                else if (p == "b") c.example.b = d;
                else if (p == "c") c.example.c = d;
                else if (p == "h0") c.example.h0 = d;
                else throw ConfigError("unknown key jump.example." + p);
            }
        } else throw ConfigError("unknown key jump." + k);
    }
}

void read_grids(const json& j, RunConfig& c) {
    if (!j.is_object()) throw ConfigError("grids: expected a table");
    for (const auto& [k, val] : j.items()) {
        if (k == "v_range") c.v_range = range_from_json(val, "grids.v_range");
        else if (k == "r_range") c.r_range = range_from_json(val, "grids.r_range");
        else if (k == "samples") c.samples = static_cast<int>(number_at(val, "grids.samples"));
        else if (k == "half_width") c.sample_half_width = number_at(val, "grids.half_width");
        else if (k == "seed") c.seed = static_cast<unsigned>(number_at(val, "grids.seed"));
        else throw ConfigError("unknown key grids." + k);
    }
}

void read_distribution(const json& j, RunConfig& c) {
    if (!j.is_object()) throw ConfigError("distribution: expected a table");
    for (const auto& [k, val] : j.items()) {
        if (k == "eps") {
            if (val.is_string()) {
                c.eps = parse_list(val.get<std::string>());
            } else if (val.is_array()) {
                c.eps.clear();
                for (const auto& e : val) c.eps.push_back(number_at(e, "distribution.eps"));
            } else {
                throw ConfigError("distribution.eps: expected a list");
            }
        } else if (k == "test_width") c.test_width = number_at(val, "distribution.test_width");
        else if (k == "mollifier") c.mollifier = string_at(val, "distribution.mollifier");
        else throw ConfigError("unknown key distribution." + k);
    }
}

// ---- sampling ----------------------------------------------------------------

std::vector<LeafPoint> leaf_samples(const RunConfig& c) {
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> w(-c.sample_half_width, c.sample_half_width);
    std::vector<LeafPoint> out;
    for (int k = 0; k < c.samples; ++k) {
        LeafPoint p{w(rng), std::vector<double>(static_cast<std::size_t>(c.dim_n - 1))};
        for (double& z : p.z) z = w(rng);
        out.push_back(std::move(p));
    }
    return out;
}

/// Points (u, v, z) with |u| in [0.01, half width] on the requested side.
std::vector<std::vector<double>> bulk_samples(const RunConfig& c, bool plus_only, unsigned salt) {
    std::mt19937_64 rng(c.seed + salt);
    std::uniform_real_distribution<double> w(-c.sample_half_width, c.sample_half_width);
    std::uniform_real_distribution<double> mag(0.01, c.sample_half_width);
    std::bernoulli_distribution side(0.5);
    std::vector<std::vector<double>> out;
    for (int k = 0; k < c.samples; ++k) {
        const double m = mag(rng);
        const bool plus = plus_only || side(rng);
        std::vector<double> p{plus ? m : -m};
        for (int a = 0; a < c.dim_n; ++a) p.push_back(w(rng));
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<double> leaf_z(double r, int dim_n) {
    std::vector<double> z(static_cast<std::size_t>(dim_n - 1), 0.0);
    z[0] = r;
    return z;
}

// ---- check bookkeeping -------------------------------------------------------

class Checks {
public:
    template <class F>
    void add(const std::string& name, double tolerance, F&& body) {
        CheckResult r;
        r.name = name;
        r.tolerance = tolerance;
        try {
            body(r);
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("error: ") + e.what();
        }
        results.push_back(std::move(r));
    }

    std::vector<CheckResult> results;
};

json checks_to_json(const std::vector<CheckResult>& checks) {
    json arr = json::array();
    for (const auto& c : checks) {
        json j{{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"tolerance", c.tolerance}};
        if (!c.detail.empty()) j["detail"] = c.detail;
        arr.push_back(std::move(j));
    }
    return arr;
}

json failure_list(const std::vector<CheckResult>& checks) {
    json arr = json::array();
    for (const auto& c : checks)
        if (!c.pass) arr.push_back(c.name);
    return arr;
}

RunResult finish(json report, std::vector<CheckResult> checks) {
    report["checks"] = checks_to_json(checks);
    report["failures"] = failure_list(checks);
    RunResult r;
    r.exit_code = report["failures"].empty() ? 0 : 1;
    r.output = report.dump(2) + "\n";
    r.checks = std::move(checks);
    return r;
}

json config_summary(const RunConfig& c) {
    json j{{"lambda", c.lambda}, {"dim_n", c.dim_n}, {"jump_kind", c.jump_kind}};
    if (c.jump_kind == "example")
        j["example"] = json{{"a", c.example.a}, {"b", c.example.b}, {"c", c.example.c}, {"h0", c.example.h0}};
    else
        j["expression"] = c.expression;
    return j;
}

// ---- commands ------------------------------------------------------------------

RunResult run_verify(const RunConfig& c) {
    const JumpFunction H = c.jump();
    const MetricField g = lipschitz_metric_field(H, c.lambda);
    const auto leaf = leaf_samples(c);
    Checks checks;

    const double jt = c.lambda == 0.0 ? kJunctionFlat : kJunctionCurved;
    checks.add("junction", jt, [&](CheckResult& r) {
        const JunctionReport rep = verify_junction(H, c.lambda, leaf);
        r.value = rep.max_residual();
        r.pass = rep.pass && r.value <= jt;
        if (!rep.minus_inward || !rep.plus_outward) r.detail = "orientation condition violated";
    });

    checks.add("curvature", kCurvature, [&](CheckResult& r) {
        for (const auto& p : bulk_samples(c, false, 1))
            r.value = std::max(r.value, constant_curvature_residual(g, p, c.lambda / 3.0));
        r.pass = r.value <= kCurvature;
    });

    checks.add("signature", 0.0, [&](CheckResult& r) {
        const Signature want{1, 0, c.dim_n};
        for (const auto& p : bulk_samples(c, false, 2))
            if (!(signature_of(lipschitz_metric_values(H, c.lambda, p)) == want)) r.value += 1.0;
        r.pass = r.value == 0.0;
        r.detail = "count of points with signature other than (1, 0, n)";
    });

    checks.add("continuity", kLipschitzSlope, [&](CheckResult& r) {
        // value = smallest log-log slope of max |g(-h) - g(h)| over h.
        r.value = 1.0;
        double bound = 0.0;
        for (const auto& q : leaf) {
            std::vector<double> p{0.0, q.v};
            p.insert(p.end(), q.z.begin(), q.z.end());
            double prev = 0.0;
            for (double h : {1e-2, 1e-3, 1e-4}) {
                std::vector<double> a = p;
                std::vector<double> b = p;
                a[0] = -h;
                b[0] = h;
                const double diff = (lipschitz_metric_values(H, c.lambda, a) - lipschitz_metric_values(H, c.lambda, b))
                                        .cwiseAbs()
                                        .maxCoeff();
                bound = std::max(bound, diff / h);
                if (prev > 0.0 && diff > 0.0) r.value = std::min(r.value, std::log10(prev / diff));
                prev = diff;
            }
        }
        r.pass = std::isfinite(bound) && r.value >= kLipschitzSlope;
        r.detail = "Lipschitz constant estimate " + format_g17(bound);
    });

    checks.add("derivative_jump", kDerivativeJump, [&](CheckResult& r) {
        if (c.lambda != 0.0) {
            r.pass = true;
            r.detail = "checked for lambda = 0 only";
            return;
        }
        const int n = c.dim_n;
        for (const auto& q : leaf) {
            std::vector<double> p{0.0, q.v};
            p.insert(p.end(), q.z.begin(), q.z.end());
            const JetMatrix gj = lipschitz_metric(H, 0.0, p, 1);
            const Eigen::MatrixXd Y = jump_tensor_minkowski(H, q.v, q.z);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    r.value = std::max(r.value, std::abs(-0.5 * gj(1 + a, 1 + b).d(0) - Y(a, b)));
        }
        r.pass = r.value <= kDerivativeJump;
    });

    checks.add("pullback", kPullback, [&](CheckResult& r) {
        for (const auto& p : bulk_samples(c, true, 3)) {
            const Eigen::MatrixXd a = pulled_back_metric(H, c.lambda, Side::plus, p);
            r.value = std::max(r.value, (a - lipschitz_metric_values(H, c.lambda, p)).cwiseAbs().maxCoeff());
        }
        r.pass = r.value <= kPullback;
    });

    checks.add("geodesic_extension", kJunctionCurved, [&](CheckResult& r) {
        const GeodesicExtensionReport rep = verify_geodesic_extension(c.lambda, H, bulk_samples(c, true, 4));
        r.value = std::max({rep.null_residual, rep.geodesic_residual, rep.affine_residual});
        r.pass = rep.pass;
    });

    checks.add("xi_aligning", 1e-10, [&](CheckResult& r) {
        std::vector<std::vector<double>> s;
        for (const auto& q : leaf) {
            std::vector<double> p{q.v};
            p.insert(p.end(), q.z.begin(), q.z.end());
            s.push_back(std::move(p));
        }
        const AligningReport rep = verify_xi_aligning(matched_aligning_data(H, c.lambda), s);
        r.value = std::max({rep.tangent, rep.mixed, rep.transverse});
        r.pass = rep.pass;
    });

    checks.add("xi_aligning_counterexample", 0.0, [&](CheckResult& r) {
        const std::vector<std::vector<double>> s{{-1.0}, {0.0}, {2.5}};
        const AligningReport rep = verify_xi_aligning(aligning_counterexample(), s);
        r.value = rep.transverse;
        r.pass = !rep.pass && rep.transverse == 1.0;
        r.detail = "must fail with transverse residual exactly 1";
    });

    json report{{"command", "verify"}, {"config", config_summary(c)}, {"samples", c.samples}};
    return finish(std::move(report), std::move(checks.results));
}

struct Stats {
    double min = INFINITY;
    double max = -INFINITY;
    double sum = 0.0;
    std::size_t count = 0;
    void add(double x) {
        min = std::min(min, x);
        max = std::max(max, x);
        sum += x;
        ++count;
    }
    json to_json() const { return json{{"min", min}, {"max", max}, {"mean", count ? sum / count : 0.0}}; }
};

RunResult run_shell_report(const RunConfig& c) {
    const JumpFunction H = c.jump();
    std::vector<LeafPoint> grid;
    for (double r : c.r_range.points())
        for (double v : c.v_range.points()) grid.push_back({v, leaf_z(r, c.dim_n)});

    Checks checks;
    json report{{"command", "shell-report"}, {"config", config_summary(c)}, {"points", grid.size()}};
    checks.add("admissibility", 0.0, [&](CheckResult& r) {
        const AdmissibilityReport a = check_admissibility(H, grid);
        r.value = a.min_dvH;
        r.pass = a.pass;
        r.detail = "minimum of dH/dv over the grid";
    });
    checks.add("shell_content", 0.0, [&](CheckResult& r) {
        Stats rho, jr, p;
        for (const auto& q : grid) {
            const ShellContent s = shell_content(H, q.v, q.z);
            rho.add(s.rho);
            p.add(s.pressure);
            jr.add(radial_flux(s.flux, q.z));
        }
        report["classification"] = to_string(classify_shell(H, grid));
        report["rho"] = rho.to_json();
        report["jr"] = jr.to_json();
        report["p"] = p.to_json();
        r.pass = std::isfinite(rho.sum) && std::isfinite(jr.sum) && std::isfinite(p.sum);
        r.detail = "all grid values finite";
    });
    return finish(std::move(report), std::move(checks.results));
}

RunResult run_figure_data(const RunConfig& c) {
    check_example_constraints(c.example);
    const JumpFunction H = make_example(c.example, c.dim_n);
    std::ostringstream csv;
    csv << "v,r,dvH,p,rho,jr\n";
    std::vector<CheckResult> checks;
    CheckResult finite{"figure_data_finite", true, 0.0, 0.0, ""};
    for (double r : c.r_range.points()) {
        const std::vector<double> z = leaf_z(r, c.dim_n);
        for (double v : c.v_range.points()) {
            const ShellContent s = shell_content(H, v, z);
            const double dvH = H.jets(v, z, 1).d(0);
            const double jr = radial_flux(s.flux, z);
            for (double x : {dvH, s.pressure, s.rho, jr}) {
                if (!std::isfinite(x)) {
                    finite.pass = false;
                    finite.value += 1.0;
                }
            }
            csv << format_g17(v) << ',' << format_g17(r) << ',' << format_g17(dvH) << ',' << format_g17(s.pressure)
                << ',' << format_g17(s.rho) << ',' << format_g17(jr) << '\n';
        }
    }
    if (!finite.pass) finite.detail = "non-finite values in the grid";
    checks.push_back(finite);
    RunResult res;
    res.exit_code = finite.pass ? 0 : 1;
    res.output = csv.str();
    res.checks = std::move(checks);
    return res;
}

std::vector<Mollifier> mollifiers_for(const RunConfig& c) {
    if (c.mollifier == "both")
        return {make_mollifier(MollifierKind::poly_bump), make_mollifier(MollifierKind::tilted_bump)};
    return {make_mollifier(mollifier_kind_from_string(c.mollifier))};
}

RunResult run_products(const RunConfig& c) {
    const std::pair<Factor, Factor> pairs[] = {{Factor::theta, Factor::delta},
                                               {Factor::theta_sq, Factor::one},
                                               {Factor::one_minus_theta, Factor::one_minus_theta},
                                               {Factor::one_minus_theta, Factor::theta},
                                               {Factor::one_minus_theta, Factor::delta}};
    const auto mollifiers = mollifiers_for(c);
    Checks checks;
    json table = json::array();
    for (const auto& m : mollifiers) {
        for (const auto& [l, rt] : pairs) {
            for (int k = 0; k <= 2; ++k) {
                const TestFunction phi{k, c.test_width};
                const std::string name = "product/" + to_string(m.kind) + "/" + to_string(l) + "*" + to_string(rt) +
                                         "/k" + std::to_string(k);
                checks.add(name, kProducts, [&](CheckResult& r) {
                    const PairingResult pr = model_product_pairing(l, rt, phi, m, c.eps);
                    const double expected = model_product_limit(l, rt, phi);
                    r.value = std::abs(pr.limit - expected);
                    r.pass = r.value <= kProducts;
                    table.push_back(json{{"mollifier", to_string(m.kind)},
                                         {"left", to_string(l)},
                                         {"right", to_string(rt)},
                                         {"k", k},
                                         {"width", c.test_width},
                                         {"values", pr.values},
                                         {"limit", pr.limit},
                                         {"model_product", expected},
                                         {"residual", r.value},
                                         {"order", pr.order}});
                });
            }
        }
        checks.add("half_identity/" + to_string(m.kind), kHalfIdentity, [&](CheckResult& r) {
            for (double e : c.eps) {
                const double I = integrate([&](double x) { return m.theta_eps(x, e) * m.rho_eps(x, e); }, -e, e);
                r.value = std::max(r.value, std::abs(I - 0.5));
            }
            r.pass = r.value <= kHalfIdentity;
        });
    }
    json report{{"command", "products"}, {"eps", c.eps}, {"table", std::move(table)}};
    return finish(std::move(report), std::move(checks.results));
}

json ast_to_json(const Expr& e) {
    static const char* kinds[] = {"number", "variable", "negate", "add", "sub", "mul", "div", "pow", "call"};
    json j{{"kind", kinds[static_cast<int>(e.kind)]}};
    if (e.kind == Expr::Kind::number) j["value"] = e.number;
    if (e.kind == Expr::Kind::variable || e.kind == Expr::Kind::call) j["name"] = e.name;
    if (!e.args.empty()) {
        json args = json::array();
        for (const auto& a : e.args) args.push_back(ast_to_json(*a));
        j["args"] = std::move(args);
    }
    return j;
}

RunResult run_parse(const RunConfig& c) {
    const ExprPtr e = parse_expression(c.expression, c.dim_n);
    json report{{"command", "parse"},
                {"expression", c.expression},
                {"rendered", to_string(*e)},
                {"depends_on_v", e->depends_on_v()},
                {"ast", ast_to_json(*e)}};
    RunResult r;
    r.output = report.dump(2) + "\n";
    return r;
}

}  // namespace

// ---- public ------------------------------------------------------------------

std::vector<double> GridRange::points() const {
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    // Snapped to the nearest double of the 12-digit decimal so lattice drift
    // does not leak into the CSV (0.3 + 3 * 0.1 prints as 0.6, not 0.60000000000000009).
    for (long i = 0; i <= n; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", lo + static_cast<double>(i) * step);
        out.push_back(std::strtod(buf, nullptr));
    }
    return out;
}

GridRange parse_range(const std::string& text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("range \"" + text + "\": expected lo:hi:step");
        }
    }
    if (parts.size() != 3) throw ConfigError("range \"" + text + "\": expected lo:hi:step");
    return GridRange{parts[0], parts[1], parts[2]};
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("list \"" + text + "\": expected comma-separated numbers");
        }
    }
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

void RunConfig::validate() const {
    if (!std::isfinite(lambda)) throw ConfigError("lambda must be finite");
    if (dim_n < 2 || dim_n > 8) throw ConfigError("dim_n must lie in [2, 8]");
    for (const auto* g : {&v_range, &r_range}) {
        if (!(g->step > 0.0)) throw ConfigError("grid steps must be positive");
        if (!(g->hi >= g->lo)) throw ConfigError("grid ranges must be nonempty");
    }
    if (!(r_range.lo > 0.0)) throw ConfigError("r_range must avoid r = 0");
    if (eps.empty()) throw ConfigError("eps sequence is empty");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0)) throw ConfigError("eps values must be positive");
        if (i > 0 && !(eps[i] < eps[i - 1])) throw ConfigError("eps sequence must be strictly decreasing");
    }
    if (!(test_width > 0.0)) throw ConfigError("test_width must be positive");
    if (samples < 1) throw ConfigError("samples must be positive");
    if (!(sample_half_width > 0.0)) throw ConfigError("half_width must be positive");
    if (mollifier != "both") {
        try {
            mollifier_kind_from_string(mollifier);
        } catch (const std::invalid_argument&) {
            throw ConfigError("mollifier must be both, poly_bump or tilted_bump");
        }
    }
    if (jump_kind == "example") check_example_constraints(example);
    else if (jump_kind != "expression") throw ConfigError("jump.kind must be expression or example");
}

JumpFunction RunConfig::jump() const {
    if (jump_kind == "example") return make_example(example, dim_n);
    return parse_jump_expression(expression, dim_n);
}

RunConfig config_from_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a table");
    RunConfig c;
    for (const auto& [k, val] : j.items()) {
        if (k == "lambda") c.lambda = number_at(val, "lambda");
        else if (k == "dim_n") c.dim_n = static_cast<int>(number_at(val, "dim_n"));
        else if (k == "jump") read_jump(val, c);
        else if (k == "grids") read_grids(val, c);
        else if (k == "distribution") read_distribution(val, c);
        else if (k == "output") {
            if (!val.is_object()) throw ConfigError("output: expected a table");
            for (const auto& [o, p] : val.items()) {
                if (o == "path") c.out = string_at(p, "output.path");
                else throw ConfigError("unknown key output." + o);
            }
        } else throw ConfigError("unknown key " + k);
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_from_text(ss.str());
}

std::string config_schema() {
    const RunConfig d;
    auto entry = [](json def, const char* type, const char* doc) {
        return json{{"default", std::move(def)}, {"type", type}, {"description", doc}};
    };
    json s{
        {"lambda", entry(d.lambda, "number", "cosmological constant; 0 for Minkowski, K = lambda/3")},
        {"dim_n", entry(d.dim_n, "integer", "leaf dimension n; spacetime dimension is n + 1")},
        {"jump",
         json{{"kind", entry(d.jump_kind, "string", "expression | example")},
              {"expression", entry(d.expression, "string", "H(v, z2..zn) in the expression language")},
              {"example",
               json{{"a", entry(d.example.a, "number", "example family a")},
                    {"b", entry(d.example.b, "number", "example family b")},
                    {"c", entry(d.example.c, "number", "example family c")},
                    {"h0", entry(d.example.h0, "number", "example family h0")}}}}},
        {"grids",
         json{{"v_range", entry(range_to_json(d.v_range), "range", "lo:hi:step or {lo, hi, step}")},
              {"r_range", entry(range_to_json(d.r_range), "range", "lo:hi:step with lo > 0")},
              {"samples", entry(d.samples, "integer", "random sample count for verify")},
              {"half_width", entry(d.sample_half_width, "number", "half width of the sampling box")},
              {"seed", entry(d.seed, "integer", "sampling seed")}}},
        {"distribution",
         json{{"eps", entry(d.eps, "list", "strictly decreasing positive regularization parameters")},
              {"test_width", entry(d.test_width, "number", "support half width of the test functions")},
              {"mollifier", entry(d.mollifier, "string", "both | poly_bump | tilted_bump")}}},
        {"output", json{{"path", entry(nullptr, "string", "report or CSV path; stdout when absent")}}}};
    return s.dump(2) + "\n";
}

RunResult run(const std::string& command, const RunConfig& config) {
    try {
        if (command == "schema") return RunResult{0, config_schema(), {}};
        config.validate();
        if (command == "verify") return run_verify(config);
        if (command == "shell-report") return run_shell_report(config);
        if (command == "figure-data") return run_figure_data(config);
        if (command == "products") return run_products(config);
        if (command == "parse") return run_parse(config);
        throw ConfigError("unknown command " + command);
    } catch (const std::exception& e) {
        json err{{"command", command}, {"error", e.what()}, {"failures", json::array({"input"})}};
        return RunResult{2, err.dump(2) + "\n", {}};
    }
}

}  // namespace nullshell
