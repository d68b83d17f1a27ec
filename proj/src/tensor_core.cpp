#include "nullshell/tensor_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nullshell/errors.hpp"

namespace nullshell {

namespace {

constexpr double kMaxCondition = 1e12;

int min_order(const JetMatrix& g) {
    int order = kMaxJetOrder;
    bool any = false;
    for (int i = 0; i < g.size(); ++i)
        for (int j = 0; j < g.size(); ++j)
            if (g(i, j).nvars() > 0) {
                order = std::min(order, g(i, j).order());
                any = true;
            }
    return any ? order : kMaxJetOrder;
}

JetMatrix constant_matrix(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    JetMatrix out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = Jet(m(i, j));
    return out;
}

}  // namespace

void JetMatrix::set_symmetric(int i, int j, const Jet& value) {
    (*this)(i, j) = value;
    (*this)(j, i) = value;
}

Eigen::MatrixXd JetMatrix::values() const {
    Eigen::MatrixXd m(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j).value();
    return m;
}

JetMatrix operator*(const JetMatrix& a, const JetMatrix& b) {
    const int n = a.size();
    JetMatrix out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Jet acc(0.0);
            for (int k = 0; k < n; ++k) acc += a(i, k) * b(k, j);
            out(i, j) = acc;
        }
    return out;
}

double reciprocal_condition(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu) {
    // Eigen's estimate reports 1 when a pivot is exactly zero.
    const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
    if (pivots.size() == 0) return 1.0;
    if (!(pivots.minCoeff() > 0.0) || !lu.matrixLU().allFinite()) return 0.0;
    return lu.rcond();
}

JetMatrix inverse(const JetMatrix& g) {
    const Eigen::MatrixXd a0 = g.values();
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a0);
    const double rcond = reciprocal_condition(lu);
    if (!(rcond > 0.0) || 1.0 / rcond > kMaxCondition) {
        throw SingularMetric("metric matrix is singular (estimated condition " +
                             std::to_string(rcond > 0.0 ? 1.0 / rcond : INFINITY) + ")");
    }
    const JetMatrix b0 = constant_matrix(lu.inverse());
    const int n = g.size();
    const int order = min_order(g);

    // Nilpotent part N = g - g(0); inverse = sum_k (-B0 N)^k B0.
    JetMatrix minus_b0_n(n);
    {
        JetMatrix nil(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                nil(i, j) = g(i, j) - g(i, j).value();
            }
        minus_b0_n = b0 * nil;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) minus_b0_n(i, j) = -minus_b0_n(i, j);
    }
    JetMatrix result = b0;
    JetMatrix term = b0;
    for (int k = 1; k <= order; ++k) {
        term = minus_b0_n * term;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) result(i, j) += term(i, j);
    }
    return result;
}

double Rank4::max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

Christoffel christoffel_from(const JetMatrix& g, int order) {
    const int n = g.size();
    if (min_order(g) < order + 1) {
        throw InsufficientOrder("Christoffel symbols of order " + std::to_string(order) +
                                " need metric jets of order " + std::to_string(order + 1));
    }
    JetMatrix gt(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) gt(i, j) = g(i, j).truncated(order);
    const JetMatrix ginv = inverse(gt);

    // dg[s][m][k] = d_s g_mk
    std::vector<Jet> dg(n * n * n, Jet(0.0));
    auto at = [n](int s, int m, int k) { return (s * n + m) * n + k; };
    for (int s = 0; s < n; ++s)
        for (int m = 0; m < n; ++m)
            for (int k = m; k < n; ++k) {
                const Jet& gmk = g(m, k);
                const Jet d = (gmk.nvars() == 0) ? Jet(0.0) : gmk.derivative(s).truncated(order);
                dg[at(s, m, k)] = d;
                dg[at(s, k, m)] = d;
            }

    Christoffel gamma(n);
    std::vector<Jet> lowered(n, Jet(0.0));
    for (int m = 0; m < n; ++m)
        for (int k = m; k < n; ++k) {
            for (int s = 0; s < n; ++s) {
                lowered[s] = 0.5 * (dg[at(m, s, k)] + dg[at(k, s, m)] - dg[at(s, m, k)]);
            }
            for (int r = 0; r < n; ++r) {
                Jet acc(0.0);
                for (int s = 0; s < n; ++s) acc += ginv(r, s) * lowered[s];
                gamma(r, m, k) = acc;
                gamma(r, k, m) = acc;
            }
        }
    return gamma;
}

Christoffel christoffel_at(const MetricField& g, std::span<const double> point, int order) {
    return christoffel_from(g.eval(point, order + 1), order);
}

Rank4 riemann_from(const JetMatrix& g) {
    const int n = g.size();
    if (min_order(g) < 2) throw InsufficientOrder("Riemann tensor needs metric jets of order 2");
    const Christoffel gamma = christoffel_from(g, 1);
    auto G = [&](int r, int m, int k) { return gamma(r, m, k).value(); };
    auto dG = [&](int mu, int r, int m, int k) {
        const Jet& j = gamma(r, m, k);
        return j.nvars() == 0 ? 0.0 : j.d(mu);
    };

    // Mixed R^r_{s m k}.
    Rank4 up(n);
    for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s)
            for (int m = 0; m < n; ++m)
                for (int k = m + 1; k < n; ++k) {
                    double val = dG(m, r, k, s) - dG(k, r, m, s);
                    for (int l = 0; l < n; ++l) val += G(r, m, l) * G(l, k, s) - G(r, k, l) * G(l, m, s);
                    up(r, s, m, k) = val;
                    up(r, s, k, m) = -val;
                }

    const Eigen::MatrixXd g0 = g.values();
    Rank4 low(n);
    for (int a = 0; a < n; ++a)
        for (int s = 0; s < n; ++s)
            for (int m = 0; m < n; ++m)
                for (int k = 0; k < n; ++k) {
                    double val = 0.0;
                    for (int r = 0; r < n; ++r) val += g0(a, r) * up(r, s, m, k);
                    low(a, s, m, k) = val;
                }
    return low;
}

Rank4 riemann_at(const MetricField& g, std::span<const double> point) {
    return riemann_from(g.eval(point, 2));
}

double constant_curvature_residual(const Rank4& R, const Eigen::MatrixXd& g, double K) {
    const int n = R.size();
    double worst = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    const double model = K * (g(a, c) * g(b, d) - g(a, d) * g(b, c));
                    worst = std::max(worst, std::abs(R(a, b, c, d) - model));
                }
    return worst;
}

double constant_curvature_residual(const MetricField& g, std::span<const double> point, double K) {
    const JetMatrix m = g.eval(point, 2);
    return constant_curvature_residual(riemann_from(m), m.values(), K);
}

CurvatureReport curvature_report(const MetricField& g, std::span<const double> point, double K) {
    const JetMatrix m = g.eval(point, 2);
    const Rank4 R = riemann_from(m);
    CurvatureReport report;
    report.point.assign(point.begin(), point.end());
    report.max_abs_riemann = R.max_abs();
    report.constant_curvature_residual = constant_curvature_residual(R, m.values(), K);
    report.K_used = K;
    return report;
}

Signature signature_of(const Eigen::MatrixXd& m) {
    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = solver.eigenvalues();
    const double scale = ev.size() > 0 ? ev.cwiseAbs().maxCoeff() : 0.0;
    const double tol = 1e-10 * scale;
    Signature s;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (std::abs(ev[i]) <= tol) {
            ++s.n_zero;
        } else if (ev[i] < 0.0) {
            ++s.n_minus;
        } else {
            ++s.n_plus;
        }
    }
    return s;
}

Eigen::VectorXd lower_index(const Eigen::MatrixXd& g, const Eigen::VectorXd& vec) { return g * vec; }

Eigen::VectorXd raise_index(const Eigen::MatrixXd& g_inverse, const Eigen::VectorXd& covec) {
    return g_inverse * covec;
}

MetricField flat_null_metric(int dim, Chart chart) {
    MetricField f;
    f.chart = chart;
    f.dim = dim;
    f.eval = [dim](std::span<const double> point, int order) {
        const int n = static_cast<int>(point.size());
        JetMatrix g(dim, Jet::constant(0.0, n, order));
        g.set_symmetric(0, 1, Jet::constant(-1.0, n, order));
        for (int a = 2; a < dim; ++a) g(a, a) = Jet::constant(1.0, n, order);
        return g;
    };
    return f;
}

MetricField conformal_null_metric(double lambda, int dim, Chart chart) {
    MetricField f;
    f.chart = chart;
    f.dim = dim;
    f.eval = [lambda, dim](std::span<const double> point, int order) {
        const auto x = seed_variables(point, order);
        Jet z2 = Jet::constant(0.0, dim, order);
        for (int a = 2; a < dim; ++a) z2 += x[a] * x[a];
        const Jet omega = 1.0 + lambda / 12.0 * (z2 - 2.0 * x[0] * x[1]);
        if (omega.value() == 0.0) throw ConformalFactorZero("conformal factor vanishes");
        const Jet w = 1.0 / (omega * omega);
        JetMatrix g(dim, Jet::constant(0.0, dim, order));
        g.set_symmetric(0, 1, -w);
        for (int a = 2; a < dim; ++a) g(a, a) = w;
        return g;
    };
    return f;
}

}  // namespace nullshell
