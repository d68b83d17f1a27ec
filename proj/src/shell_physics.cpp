#include "nullshell/shell_physics.hpp"

#include <cmath>
#include <numbers>

#include "nullshell/errors.hpp"

namespace nullshell {

namespace {

constexpr double kClassifyTolerance = 1e-10;

double positive_dv(const Jet& Hj, double v) {
    const double dv = Hj.d(0);
    if (!(dv > 0.0)) {
        throw NonPositiveDerivative("dH/dv = " + std::to_string(dv) + " is not positive at v = " + std::to_string(v));
    }
    return dv;
}

Eigen::MatrixXd leaf_inverse(const Eigen::MatrixXd& h) {
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(h);
    const double rcond = reciprocal_condition(lu);
    if (!(rcond > 0.0) || 1.0 / rcond > 1e12) throw SingularLeafMetric("leaf metric is singular");
    return lu.inverse();
}

std::vector<Jet> constant_jets(std::span<const double> x) {
    return std::vector<Jet>(x.begin(), x.end());
}

}  // namespace

LeafGeometry LeafGeometry::flat(int dim_n) {
    LeafGeometry g;
    g.dim_n = dim_n;
    const int m = dim_n - 1;
    g.h = [m](std::span<const Jet> x) {
        const Jet zero = x.empty() ? Jet(0.0) : 0.0 * x[0];
        JetMatrix h(m, zero);
        for (int i = 0; i < m; ++i) h(i, i) = zero + 1.0;
        return h;
    };
    auto zero_form = [m](double, std::span<const double>) { return Eigen::VectorXd::Zero(m).eval(); };
    auto zero_tensor = [m](double, std::span<const double>) { return Eigen::MatrixXd::Zero(m, m).eval(); };
    g.sigma_minus = zero_form;
    g.sigma_plus = zero_form;
    g.theta_minus = zero_tensor;
    g.theta_plus = zero_tensor;
    return g;
}

LeafForms leaf_forms_from_ambient(const MetricField& g,
                                  const std::function<std::vector<Jet>(std::span<const Jet>)>& rigging,
                                  double V, std::span<const double> x) {
    const int n = g.dim;
    const int m = n - 2;
    std::vector<double> point{0.0, V};
    point.insert(point.end(), x.begin(), x.end());
    const Christoffel gamma = christoffel_at(g, point, 0);
    const Eigen::MatrixXd g0 = g.eval(point, 0).values();
    const auto seeds = seed_variables(point, 1);
    const std::vector<Jet> L = rigging(seeds);

    LeafForms out;
    out.sigma = Eigen::VectorXd::Zero(m);
    out.theta = Eigen::MatrixXd::Zero(m, m);
    for (int I = 0; I < m; ++I) {
        const int X = I + 2;
        // nabla_X k with k = d/dV has components Gamma^a_{X V}.
        double s = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) s += g0(a, b) * gamma(a, X, 1).value() * L[b].value();
        out.sigma[I] = -s;
        for (int J = 0; J < m; ++J) {
            double t = 0.0;
            for (int a = 0; a < n; ++a) {
                double nabla = L[a].nvars() == 0 ? 0.0 : L[a].d(X);
                for (int b = 0; b < n; ++b) nabla += gamma(a, X, b).value() * L[b].value();
                t += g0(a, J + 2) * nabla;
            }
            out.theta(I, J) = t;
        }
    }
    return out;
}

LeafGeometry LeafGeometry::constant_curvature(double lambda, int dim_n) {
    LeafGeometry g;
    g.dim_n = dim_n;
    const int m = dim_n - 1;
    g.h = [lambda, m](std::span<const Jet> x) {
        Jet r2 = x.empty() ? Jet(0.0) : 0.0 * x[0];
        for (const Jet& xi : x) r2 += xi * xi;
        const Jet omega = 1.0 + lambda / 12.0 * r2;
        if (omega.value() == 0.0) throw ConformalFactorZero("leaf conformal factor vanishes");
        const Jet w = 1.0 / (omega * omega);
        JetMatrix h(m, 0.0 * r2);
        for (int i = 0; i < m; ++i) h(i, i) = w;
        return h;
    };
    const MetricField ambient = conformal_null_metric(lambda, dim_n + 1, Chart::flat_minus);
    auto rigging = [lambda, dim_n](std::span<const Jet> X) {
        Jet s = -2.0 * X[0] * X[1];
        for (int a = 2; a <= dim_n; ++a) s += X[a] * X[a];
        const Jet omega = 1.0 + lambda / 12.0 * s;
        std::vector<Jet> L(dim_n + 1, 0.0 * omega);
        L[0] = -(omega * omega);
        return L;
    };
    auto sigma = [ambient, rigging](double V, std::span<const double> x) {
        return leaf_forms_from_ambient(ambient, rigging, V, x).sigma;
    };
    auto theta = [ambient, rigging](double V, std::span<const double> x) {
        return leaf_forms_from_ambient(ambient, rigging, V, x).theta;
    };
    g.sigma_minus = sigma;
    g.sigma_plus = sigma;
    g.theta_minus = theta;
    g.theta_plus = theta;
    return g;
}

Eigen::MatrixXd jump_tensor_minkowski(const JumpFunction& H, double v, std::span<const double> z) {
    const Jet Hj = H.jets(v, z, 2);
    const double dv = positive_dv(Hj, v);
    const int n = H.dim_n();
    Eigen::MatrixXd Y(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) Y(a, b) = Y(b, a) = -Hj.d(a, b) / dv;
    return Y;
}

Eigen::MatrixXd jump_tensor_general(const JumpFunction& H, const LeafGeometry& geom, double v,
                                    std::span<const double> z) {
    const int n = H.dim_n();
    const int m = n - 1;
    if (geom.dim_n != n) throw WrongDimension("leaf geometry dimension does not match the jump function");
    const Jet Hj = H.jets(v, z, 2);
    const double dv = positive_dv(Hj, v);
    const double Hv = Hj.value();

    // Christoffel symbols of h at z.
    const auto xs = seed_variables(z, 1);
    Eigen::MatrixXd hess(m, m);
    try {
        const Christoffel gh = christoffel_from(geom.h(xs), 0);
        for (int I = 0; I < m; ++I)
            for (int J = 0; J < m; ++J) {
                double val = Hj.d(I + 1, J + 1);
                for (int K = 0; K < m; ++K) val -= gh(K, I, J).value() * Hj.d(K + 1);
                hess(I, J) = val;
            }
    } catch (const SingularMetric& e) {
        throw SingularLeafMetric(e.what());
    }

    const Eigen::VectorXd sm = geom.sigma_minus(v, z);
    const Eigen::VectorXd sp = geom.sigma_plus(Hv, z);
    const Eigen::MatrixXd tm = geom.theta_minus(v, z);
    const Eigen::MatrixXd tp = geom.theta_plus(Hv, z);

    Eigen::MatrixXd Y(n, n);
    Y(0, 0) = -Hj.d(0, 0) / dv;
    for (int J = 0; J < m; ++J) Y(0, J + 1) = Y(J + 1, 0) = sp[J] - sm[J] - Hj.d(0, J + 1) / dv;
    for (int I = 0; I < m; ++I)
        for (int J = 0; J < m; ++J) {
            const double sym_sigma = Hj.d(I + 1) * sp[J] + Hj.d(J + 1) * sp[I];
            const double sym_tp = 0.5 * (tp(I, J) + tp(J, I));
            const double sym_tm = 0.5 * (tm(I, J) + tm(J, I));
            const double sym_hess = 0.5 * (hess(I, J) + hess(J, I));
            Y(I + 1, J + 1) = (sym_sigma + sym_tp - sym_hess) / dv - sym_tm;
        }
    return Y;
}

Eigen::MatrixXd jump_tensor_ads(const JumpFunction& H, double lambda, double v, std::span<const double> z) {
    double r2 = 0.0;
    for (double x : z) r2 += x * x;
    const double omega = 1.0 + lambda / 12.0 * r2;
    if (omega == 0.0) throw ConformalFactorZero("Omega_N vanishes");
    const Jet Hj = H.jets(v, z, 2);
    const double dv = positive_dv(Hj, v);
    Eigen::MatrixXd Y = jump_tensor_minkowski(H, v, z);
    if (lambda == 0.0) return Y;
    double zdH = 0.0;
    for (std::size_t c = 0; c < z.size(); ++c) zdH += z[c] * Hj.d(static_cast<int>(c) + 1);
    const double shift = lambda / (6.0 * omega * dv) * (v * dv - Hj.value() + zdH);
    for (int A = 1; A < Y.rows(); ++A) Y(A, A) += shift;
    return Y;
}

EnergyMomentum energy_momentum(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& h_inverse, int epsilon) {
    const int m = static_cast<int>(h_inverse.rows());
    if (Y.rows() != m + 1) throw WrongDimension("jump tensor and leaf metric sizes differ");
    EnergyMomentum t;
    const Eigen::MatrixXd Yss = Y.block(1, 1, m, m);
    const Eigen::VectorXd Yvs = Y.block(1, 0, m, 1);
    double trace = 0.0;
    for (int I = 0; I < m; ++I)
        for (int J = 0; J < m; ++J) trace += h_inverse(I, J) * Yss(I, J);
    t.tau_vv = -epsilon * trace;
    t.tau_vI = epsilon * (h_inverse * Yvs);
    t.tau_IJ = -epsilon * (h_inverse * Y(0, 0));
    return t;
}

EnergyMomentum energy_momentum(const Eigen::MatrixXd& Y, const LeafGeometry& geom, std::span<const double> z) {
    const auto x = constant_jets(z);
    return energy_momentum(Y, leaf_inverse(geom.h(x).values()), geom.epsilon);
}

ShellScalars shell_scalars(const JumpFunction& H, double v, std::span<const double> z) {
    // Same arithmetic path as the flat-leaf stress so the two agree bit for bit.
    const int m = H.dim_n() - 1;
    const EnergyMomentum t = energy_momentum(jump_tensor_minkowski(H, v, z), Eigen::MatrixXd::Identity(m, m));
    return {t.tau_vv, t.tau_vI, t.tau_IJ(0, 0)};
}

std::string to_string(ShellClass c) {
    switch (c) {
        case ShellClass::NoShell: return "NoShell";
        case ShellClass::PureGravity: return "PureGravity";
        case ShellClass::NullDust: return "NullDust";
        case ShellClass::Generic: return "Generic";
    }
    return "Generic";
}

ShellClass classify_shell(const JumpFunction& H, std::span<const LeafPoint> grid) {
    double max_y = 0.0;
    double max_rho = 0.0;
    double max_j = 0.0;
    double max_p = 0.0;
    for (const LeafPoint& pt : grid) {
        const Eigen::MatrixXd Y = jump_tensor_minkowski(H, pt.v, pt.z);
        const ShellScalars s = shell_scalars(H, pt.v, pt.z);
        max_y = std::max(max_y, Y.cwiseAbs().maxCoeff());
        max_rho = std::max(max_rho, std::abs(s.rho));
        max_j = std::max(max_j, s.flux.size() ? s.flux.cwiseAbs().maxCoeff() : 0.0);
        max_p = std::max(max_p, std::abs(s.pressure));
    }
    const bool y0 = max_y <= kClassifyTolerance;
    const bool rho0 = max_rho <= kClassifyTolerance;
    const bool jp0 = max_j <= kClassifyTolerance && max_p <= kClassifyTolerance;
    if (y0) return ShellClass::NoShell;
    if (rho0 && jp0) return ShellClass::PureGravity;
    if (!rho0 && jp0) return ShellClass::NullDust;
    return ShellClass::Generic;
}

ShellContent shell_content(const JumpFunction& H, double v, std::span<const double> z) {
    ShellContent c;
    c.Y_jump = jump_tensor_minkowski(H, v, z);
    const ShellScalars s = shell_scalars(H, v, z);
    c.rho = s.rho;
    c.flux = s.flux;
    c.pressure = s.pressure;
    const LeafPoint pt{v, std::vector<double>(z.begin(), z.end())};
    c.shell_class = classify_shell(H, std::span<const LeafPoint>(&pt, 1));
    return c;
}

ExampleClosedForms example_closed_forms(const ExampleParams& q, double v, double r) {
    check_example_constraints(q);
    if (!(r > 0.0)) throw DomainError("closed forms need r > 0");
    const double g = std::exp(-v * v);
    const double ch_v = std::cosh(v);
    const double ch_r = std::cosh(r);
    const double th_r = std::tanh(r);
    ExampleClosedForms f;
    f.dvH = q.a - q.b * std::tanh(v) + 2.0 * q.c * v * th_r * g;
    f.p = (q.b / (ch_v * ch_v) + 2.0 * q.c * th_r * g * (2.0 * v * v - 1.0)) / f.dvH;
    f.rho = (q.c * g / (ch_r * ch_r) * (1.0 / r - 2.0 * th_r) +
             q.h0 * (std::erf(r) + r * std::exp(-r * r) / std::sqrt(std::numbers::pi) * (2.5 - r * r))) /
            f.dvH;
    f.jr = 2.0 * q.c * v * g / (f.dvH * ch_r * ch_r);
    return f;
}

double radial_flux(const Eigen::VectorXd& flux, std::span<const double> z) {
    double r2 = 0.0;
    double dot = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        r2 += z[i] * z[i];
        dot += z[i] * flux[static_cast<Eigen::Index>(i)];
    }
    if (!(r2 > 0.0)) throw DomainError("radial flux needs r > 0");
    return dot / std::sqrt(r2);
}

}  // namespace nullshell
