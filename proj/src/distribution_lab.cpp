#include "nullshell/distribution_lab.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "nullshell/errors.hpp"
#include "nullshell/metric_assembly.hpp"

namespace nullshell {

namespace {

constexpr double kQuadratureTolerance = 1e-11;
constexpr double kAbsoluteTarget = 1e-12;
constexpr int kMaxDepth = 15;
constexpr double kWeakTolerance = 1e-6;

void check_eps_sequence(std::span<const double> eps) {
    if (eps.empty()) throw DomainError("empty eps sequence");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0)) throw DomainError("eps values must be positive");
        if (i > 0 && !(eps[i] < eps[i - 1])) throw DomainError("eps sequence must be strictly decreasing");
    }
}

double factor_value(Factor f, const Mollifier& m, double x, double eps) {
    switch (f) {
        case Factor::one: return 1.0;
        case Factor::theta: return m.theta_eps(x, eps);
        case Factor::one_minus_theta: return 1.0 - m.theta_eps(x, eps);
        case Factor::theta_sq: {
            const double t = m.theta_eps(x, eps);
            return t * t;
        }
        case Factor::delta: return m.rho_eps(x, eps);
    }
    return 0.0;
}

/// Limit distribution c_one + c_theta theta + c_delta delta.
struct Limit {
    double one = 0.0;
    double theta = 0.0;
    double delta = 0.0;
};

Limit factor_limit(Factor f) {
    switch (f) {
        case Factor::one: return {1.0, 0.0, 0.0};
        case Factor::theta:
        case Factor::theta_sq: return {0.0, 1.0, 0.0};
        case Factor::one_minus_theta: return {1.0, -1.0, 0.0};
        case Factor::delta: return {0.0, 0.0, 1.0};
    }
    return {};
}

/// Breakpoints splitting [-w, w] at -eps, 0, eps.
std::vector<double> breakpoints(double w, double eps) {
    std::vector<double> b{-w};
    if (eps < w) b.push_back(-eps);
    b.push_back(0.0);
    if (eps < w) b.push_back(eps);
    b.push_back(w);
    return b;
}

double integrate_pieces(const std::function<double(double)>& f, const std::vector<double>& b) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) total += integrate(f, b[i], b[i + 1]);
    return total;
}

/// Bisection over the fixed 61-point Gauss-Kronrod rule with an absolute target
/// (halved per level). A panel also stops once its error is at the roundoff floor
/// of its L1 norm, so integrals that cancel to zero terminate.
template <class G>
double adaptive_gk(const G& g, double a, double b, double target, int depth, double& error) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    double l1 = 0.0;
    double local = 0.0;
    const double estimate = GK::integrate(g, a, b, 0, 0.0, &local, &l1);
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * l1;
    if (depth == 0 || local <= target || local <= floor || !std::isfinite(estimate)) {
        error += local;
        return estimate;
    }
    const double mid = 0.5 * (a + b);
    return adaptive_gk(g, a, mid, 0.5 * target, depth - 1, error) +
           adaptive_gk(g, mid, b, 0.5 * target, depth - 1, error);
}

}  // namespace

double TestFunction::operator()(double u) const {
    const double s = u / width;
    if (s <= -1.0 || s >= 1.0) return 0.0;
    const double w = 1.0 - s * s;
    return (w * w) * (w * w) * std::pow(u, k);
}

std::string to_string(Factor f) {
    switch (f) {
        case Factor::one: return "one";
        case Factor::theta: return "theta";
        case Factor::one_minus_theta: return "one_minus_theta";
        case Factor::theta_sq: return "theta_sq";
        case Factor::delta: return "delta";
    }
    return "one";
}

double integrate(const std::function<double(double)>& f, double a, double b) {
    if (a == b) return 0.0;
    // Mapped to [0, 1] so the error floor tracks the integral, not the peak of f.
    const double h = b - a;
    auto g = [&](double t) { return h * f(a + h * t); };
    double error = 0.0;
    const double result = adaptive_gk(g, 0.0, 1.0, kAbsoluteTarget, kMaxDepth, error);
    if (!std::isfinite(result) || error > kQuadratureTolerance * std::max(1.0, std::abs(result))) {
        throw QuadratureFailure("quadrature on [" + std::to_string(a) + ", " + std::to_string(b) +
                                "] did not converge");
    }
    return result;
}

Extrapolation extrapolate(std::span<const double> eps, std::span<const double> values) {
    Extrapolation out;
    const std::size_t n = values.size();
    out.limit = values[n - 1];
    if (n < 3) return out;
    const double d1 = values[n - 3] - values[n - 2];
    const double d2 = values[n - 2] - values[n - 1];
    const double scale = std::max(1.0, std::abs(values[n - 1]));
    if (std::abs(d2) <= 1e-13 * scale || std::abs(d1) <= 1e-13 * scale) {
        out.eps_independent = std::abs(d1) <= 1e-13 * scale && std::abs(d2) <= 1e-13 * scale;
        return out;
    }
    const double q = std::log(std::abs(d1 / d2)) / std::log(eps[n - 3] / eps[n - 2]);
    out.order = q;
    if (!std::isfinite(q) || q <= 0.0) return out;
    // Pairings of smooth integrands expand in integer powers of eps; snap a
    // near-integer leading order and carry the next powers as correction terms.
    const double lead = std::abs(q - std::round(q)) < 0.1 ? std::round(q) : q;
    const auto rows = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd A(rows, rows);
    Eigen::VectorXd y(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double s = eps[static_cast<std::size_t>(i)] / eps[0];
        A(i, 0) = 1.0;
        for (Eigen::Index j = 1; j < rows; ++j) A(i, j) = std::pow(s, lead + static_cast<double>(j - 1));
        y[i] = values[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
    out.limit = c[0];
    return out;
}

PairingResult model_product_pairing(Factor left, Factor right, const TestFunction& phi, const Mollifier& mollifier,
                                    std::span<const double> eps) {
    check_eps_sequence(eps);
    PairingResult r;
    for (double e : eps) {
        auto f = [&](double x) {
            return factor_value(left, mollifier, x, e) * factor_value(right, mollifier, x, e) * phi(x);
        };
        r.eps.push_back(e);
        r.values.push_back(integrate_pieces(f, breakpoints(phi.width, e)));
    }
    const Extrapolation x = extrapolate(r.eps, r.values);
    r.limit = x.limit;
    r.order = x.order;
    r.eps_independent = x.eps_independent;
    return r;
}

double model_product_limit(Factor left, Factor right, const TestFunction& phi) {
    const Limit a = factor_limit(left);
    const Limit b = factor_limit(right);
    if (a.delta != 0.0 && b.delta != 0.0) throw DomainError("the square of delta has no model product");
    const double one = a.one * b.one;
    const double theta = a.one * b.theta + a.theta * b.one + a.theta * b.theta;
    const double delta = a.one * b.delta + a.delta * b.one + 0.5 * (a.theta * b.delta + a.delta * b.theta);
    const double all = integrate([&](double x) { return phi(x); }, -phi.width, 0.0) +
                       integrate([&](double x) { return phi(x); }, 0.0, phi.width);
    const double positive = integrate([&](double x) { return phi(x); }, 0.0, phi.width);
    return one * all + theta * positive + delta * phi(0.0);
}

WeakMetricReport weak_metric_check(const JumpFunction& H, double lambda, std::vector<std::pair<int, int>> components,
                                   const TestFunction& phi, double v, std::span<const double> z,
                                   std::span<const double> eps, const Mollifier& mollifier) {
    check_eps_sequence(eps);
    const int dim = H.dim_n() + 1;
    if (components.empty()) {
        for (int a = 0; a < dim; ++a)
            for (int b = a; b < dim; ++b) components.emplace_back(a, b);
    }
    auto at = [&](double u) {
        std::vector<double> p{u, v};
        p.insert(p.end(), z.begin(), z.end());
        return p;
    };
    WeakMetricReport rep;
    for (const auto& [mu, nu] : components) {
        if (mu < 0 || nu < 0 || mu >= dim || nu >= dim) throw DomainError("metric component index out of range");
        ComponentCheck c;
        c.mu = mu;
        c.nu = nu;
        auto lip = [&](double u) { return lipschitz_metric_values(H, lambda, at(u))(mu, nu) * phi(u); };
        c.lipschitz = integrate(lip, -phi.width, 0.0) + integrate(lip, 0.0, phi.width);
        for (double e : eps) {
            auto reg = [&](double u) {
                return regularized_distributional_metric(H, lambda, mollifier, e, at(u))(mu, nu) * phi(u);
            };
            c.regularized.eps.push_back(e);
            c.regularized.values.push_back(integrate_pieces(reg, breakpoints(phi.width, e)));
        }
        const Extrapolation x = extrapolate(c.regularized.eps, c.regularized.values);
        c.regularized.limit = x.limit;
        c.regularized.order = x.order;
        c.regularized.eps_independent = x.eps_independent;
        c.residual = std::abs(c.regularized.limit - c.lipschitz);
        rep.max_residual = std::max(rep.max_residual, c.residual);
        rep.components.push_back(std::move(c));
    }
    rep.pass = rep.max_residual <= kWeakTolerance;
    return rep;
}

}  // namespace nullshell
