#include "nullshell/metric_assembly.hpp"

#include <algorithm>
#include <cmath>

#include "nullshell/errors.hpp"
#include "nullshell/matching_engine.hpp"

namespace nullshell {

namespace {

constexpr double kWaveTolerance = 1e-12;

void check_point(const JumpFunction& H, std::span<const double> point) {
    if (static_cast<int>(point.size()) != H.dim_n() + 1) {
        throw WrongDimension("expected a point (u, v, z2..z" + std::to_string(H.dim_n()) + ")");
    }
}

struct LeafData {
    double H = 0.0;
    double dvH = 0.0;
    Eigen::VectorXd dH;  // gradient in (v, z)
};

LeafData leaf_data(const JumpFunction& H, double v, std::span<const double> z) {
    const Jet Hj = H.jets(v, z, 1);
    LeafData d;
    d.H = Hj.value();
    d.dvH = Hj.d(0);
    if (!(d.dvH > 0.0)) throw NonPositiveDerivative("dH/dv = " + std::to_string(d.dvH) + " is not positive");
    d.dH = Eigen::VectorXd(H.dim_n());
    for (int a = 0; a < H.dim_n(); ++a) d.dH[a] = Hj.d(a);
    return d;
}

/// Gradient of a leaf jet embedded in the (u, v, z) cotangent basis.
Eigen::VectorXd leaf_gradient(const Jet& f, int dim) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
    for (int a = 1; a < dim; ++a) g[a] = f.d(a - 1);
    return g;
}

bool is_wave_type(const JumpFunction& H, double v, std::span<const double> z) {
    switch (H.family()) {
        case JumpFunction::Family::wave:
        case JumpFunction::Family::linear:
            return true;
        case JumpFunction::Family::example:
            return H.params().at("b") == 0.0 && H.params().at("c") == 0.0;
        default:
            break;
    }
    // Probe d_v H for constancy on a small stencil around the point.
    double a0 = 0.0;
    bool first = true;
    for (double dv : {0.0, -1.0, 1.3}) {
        for (double dz : {0.0, 0.5}) {
            std::vector<double> zz(z.begin(), z.end());
            for (double& x : zz) x += dz;
            const Jet j = H.jets(v + dv, zz, 2);
            if (std::abs(j.d(0, 0)) > kWaveTolerance) return false;
            for (std::size_t A = 0; A < zz.size(); ++A)
                if (std::abs(j.d(0, static_cast<int>(A) + 1)) > kWaveTolerance) return false;
            if (first) a0 = j.d(0);
            else if (std::abs(j.d(0) - a0) > kWaveTolerance * std::max(1.0, std::abs(a0))) return false;
            first = false;
        }
    }
    return true;
}

}  // namespace

JetMatrix lipschitz_metric(const JumpFunction& H, double lambda, std::span<const double> point, int order) {
    check_point(H, point);
    const int n = H.dim_n();
    const int dim = n + 1;
    const int m = n - 1;
    const auto seeds = seed_variables(point, order + 2);
    const Jet zero = Jet::constant(0.0, dim, order);
    const Jet u = seeds[0].truncated(order);
    const Jet v = seeds[1].truncated(order);

    JetMatrix g(dim, zero);
    g(0, 1) = g(1, 0) = zero - 1.0;
    for (int A = 2; A < dim; ++A) g(A, A) = zero + 1.0;
    Jet r2 = zero;
    for (int A = 0; A < m; ++A) r2 += seeds[2 + A].truncated(order) * seeds[2 + A].truncated(order);
    Jet Q = 1.0 + lambda / 12.0 * (r2 - 2.0 * u * v);

    if (point[0] >= 0.0) {
        const Jet Hj = H.evaluate(seeds[1], std::span<const Jet>(seeds).subspan(2));
        const Jet dv = Hj.derivative(1);
        if (!(dv.value() > 0.0)) throw NonPositiveDerivative("dH/dv = " + std::to_string(dv.value()) + " is not positive");
        const Jet inv = reciprocal(dv.truncated(order));
        // Y(a, b) over leaf slots 0 = v, 1.. = z.
        std::vector<Jet> Y(static_cast<std::size_t>(n * n), zero);
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b)
                Y[a * n + b] = Y[b * n + a] = -(Hj.derivative(1 + a).derivative(1 + b) * inv);
        auto y = [&](int a, int b) -> const Jet& { return Y[a * n + b]; };
        const Jet& p = y(0, 0);

        Jet yv2 = zero;
        for (int A = 1; A < n; ++A) yv2 += y(0, A) * y(0, A);
        g(1, 1) = u * (u * yv2 - 2.0 * p);
        for (int A = 1; A < n; ++A) {
            Jet s = zero;
            for (int I = 1; I < n; ++I) s += y(0, I) * y(I, A);
            g(1, 1 + A) = g(1 + A, 1) = u * (u * s - 2.0 * y(0, A));
        }
        for (int A = 1; A < n; ++A)
            for (int B = A; B < n; ++B) {
                Jet s = zero;
                for (int I = 1; I < n; ++I) s += y(I, A) * y(I, B);
                const Jet val = g(1 + A, 1 + B) - 2.0 * u * (y(A, B) - 0.5 * u * s);
                g(1 + A, 1 + B) = g(1 + B, 1 + A) = val;
            }

        if (lambda != 0.0) {
            const TransverseCoefficients t = transverse_coefficients(Hj, 1, 2);
            Jet bracket = v - t.U1 * (Hj + u * t.V1);
            for (int A = 0; A < m; ++A) {
                const Jet& zA = seeds[2 + A];
                bracket += zA * t.x1[A] + 0.5 * u * t.x1[A] * t.x1[A];
            }
            Q += u * lambda / 6.0 * bracket;
        }
    }

    if (lambda != 0.0) {
        if (Q.value() == 0.0) throw ConformalFactorZero("Q vanishes");
        const Jet w = reciprocal(Q * Q);
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) g(a, b) = g(a, b) * w;
    }
    return g;
}

Eigen::MatrixXd lipschitz_metric_values(const JumpFunction& H, double lambda, std::span<const double> point) {
    return lipschitz_metric(H, lambda, point, 0).values();
}

MetricField lipschitz_metric_field(const JumpFunction& H, double lambda) {
    MetricField f;
    f.chart = Chart::null_coords;
    f.dim = H.dim_n() + 1;
    f.eval = [H, lambda](std::span<const double> p, int order) { return lipschitz_metric(H, lambda, p, order); };
    return f;
}

double lipschitz_conformal_factor(const JumpFunction& H, double lambda, std::span<const double> point) {
    check_point(H, point);
    const double u = point[0];
    const double v = point[1];
    const auto z = point.subspan(2);
    double r2 = 0.0;
    for (double x : z) r2 += x * x;
    double Q = 1.0 + lambda / 12.0 * (r2 - 2.0 * u * v);
    if (u >= 0.0 && lambda != 0.0) {
        const TransverseCoefficients t = transverse_coefficients(H, v, z);
        double bracket = v - t.U1.value() * (H.value(v, z) + u * t.V1.value());
        for (std::size_t A = 0; A < z.size(); ++A) {
            const double x1 = t.x1[A].value();
            bracket += z[A] * x1 + 0.5 * u * x1 * x1;
        }
        Q += u * lambda / 6.0 * bracket;
    }
    return Q;
}

double hscript(const JumpFunction& H, double v, std::span<const double> z) {
    const LeafData d = leaf_data(H, v, z);
    return d.dvH * (1.0 + d.dvH) / (1.0 + d.dvH * d.dvH) * (d.H - v);
}

RosenForm rosen_form(const JumpFunction& H, double u, std::span<const double> z) {
    if (H.dim_n() != 3 || z.size() != 2) throw WrongDimension("the complex form needs four spacetime dimensions");
    const double v = 0.0;
    if (!is_wave_type(H, v, z)) throw NotWaveType("jump function is not of the form a v + f(z)");
    const Jet j = H.jets(v, z, 2);
    const double a = j.d(0);
    if (!(a > 0.0)) throw NonPositiveDerivative("dH/dv = " + std::to_string(a) + " is not positive");
    const double f22 = j.d(1, 1);
    const double f33 = j.d(2, 2);
    const double f23 = j.d(1, 2);
    const double up = std::max(u, 0.0);
    const std::complex<double> dzbar_dz = 0.5 * (f22 + f33);
    const std::complex<double> dzbar_dzbar(0.5 * (f22 - f33), f23);

    RosenForm out;
    out.omega_Z = 1.0 + up / a * dzbar_dz;
    out.omega_Zbar = up / a * dzbar_dzbar;
    const double s = 1.0 / std::sqrt(2.0);
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> c[2] = {s * (out.omega_Z + out.omega_Zbar), i * s * (out.omega_Z - out.omega_Zbar)};
    out.metric = Eigen::Matrix4d::Zero();
    out.metric(0, 1) = out.metric(1, 0) = -1.0;
    for (int A = 0; A < 2; ++A)
        for (int B = 0; B < 2; ++B) out.metric(2 + A, 2 + B) = 2.0 * std::real(c[A] * std::conj(c[B]));
    return out;
}

Eigen::MatrixXd regularized_distributional_metric(const JumpFunction& H, double lambda, const Mollifier& mollifier,
                                                  double eps, std::span<const double> point) {
    check_point(H, point);
    const int n = H.dim_n();
    const int dim = n + 1;
    const int m = n - 1;
    const double u = point[0];
    const double v = point[1];
    const auto z = point.subspan(2);
    const double theta = mollifier.theta_eps(u, eps);
    const double rho = mollifier.rho_eps(u, eps);

    const LeafData d = leaf_data(H, v, z);
    const TransverseCoefficients t = transverse_coefficients(H, v, z);
    const double hs = d.dvH * (1.0 + d.dvH) / (1.0 + d.dvH * d.dvH) * (d.H - v);

    const Eigen::VectorXd du = Eigen::VectorXd::Unit(dim, 0);
    const Eigen::VectorXd dv = Eigen::VectorXd::Unit(dim, 1);
    Eigen::VectorXd dH = Eigen::VectorXd::Zero(dim);
    dH.tail(n) = d.dH;

    const Eigen::VectorXd dU_plus = t.U1.value() * du + u * leaf_gradient(t.U1, dim);
    const Eigen::VectorXd dV_plus = dH + t.V1.value() * du + u * leaf_gradient(t.V1, dim);
    const Eigen::VectorXd dU = (1.0 - theta) * du + theta * dU_plus;
    const Eigen::VectorXd dV = (1.0 - theta) * dv + theta * dV_plus + rho * (d.H - v) * du;

    Eigen::MatrixXd g = -(dU * dV.transpose() + dV * dU.transpose());
    double X2 = 0.0;
    for (int A = 0; A < m; ++A) {
        const Eigen::VectorXd dz = Eigen::VectorXd::Unit(dim, 2 + A);
        const Eigen::VectorXd dx_plus = dz + t.x1[A].value() * du + u * leaf_gradient(t.x1[A], dim);
        const Eigen::VectorXd dX = (1.0 - theta) * dz + theta * dx_plus;
        g += dX * dX.transpose();
        const double X = z[A] + u * theta * t.x1[A].value();
        X2 += X * X;
    }
    g += 2.0 * hs * rho * ((1.0 - theta) * du * du.transpose() + theta * dU_plus * dU_plus.transpose());

    if (lambda != 0.0) {
        const double U = u + u * theta * (t.U1.value() - 1.0);
        const double V = v + theta * (d.H - v) + u * theta * t.V1.value();
        const double omega = 1.0 + lambda / 12.0 * (X2 - 2.0 * U * V);
        if (omega == 0.0) throw ConformalFactorZero("regularized conformal factor vanishes");
        g /= omega * omega;
    }
    return g;
}

}  // namespace nullshell
