#include "nullshell/matching_engine.hpp"

#include <algorithm>
#include <cmath>

#include "nullshell/errors.hpp"

namespace nullshell {

namespace {

constexpr double kJunctionTolerance = 1e-9;
constexpr double kAligningTolerance = 1e-10;
constexpr double kGeodesicTolerance = 1e-9;

double leaf_omega(double lambda, std::span<const double> z) {
    double r2 = 0.0;
    for (double x : z) r2 += x * x;
    const double omega = 1.0 + lambda / 12.0 * r2;
    if (omega == 0.0) throw ConformalFactorZero("Omega_N vanishes on the shell");
    return omega;
}

double chart_omega(double lambda, std::span<const double> X) {
    double s = -2.0 * X[0] * X[1];
    for (std::size_t a = 2; a < X.size(); ++a) s += X[a] * X[a];
    const double omega = 1.0 + lambda / 12.0 * s;
    if (omega == 0.0) throw ConformalFactorZero("conformal factor vanishes");
    return omega;
}

double partial_or_zero(const Jet& j, int var) {
    return j.nvars() == 0 ? 0.0 : j.d(var);
}

std::vector<double> values(const std::vector<Jet>& jets) {
    std::vector<double> out;
    out.reserve(jets.size());
    for (const Jet& j : jets) out.push_back(j.value());
    return out;
}

/// Columns d X / d s^a.
Eigen::MatrixXd tangent_matrix(const std::vector<Jet>& X, int params) {
    Eigen::MatrixXd T(static_cast<Eigen::Index>(X.size()), params);
    for (std::size_t alpha = 0; alpha < X.size(); ++alpha)
        for (int a = 0; a < params; ++a) T(static_cast<Eigen::Index>(alpha), a) = partial_or_zero(X[alpha], a);
    return T;
}

Eigen::MatrixXd metric_values(double lambda, int dim, Chart chart, std::span<const double> point) {
    return conformal_null_metric(lambda, dim, chart).eval(point, 0).values();
}

bool spans_transversally(const Eigen::MatrixXd& T, const Eigen::VectorXd& xi) {
    Eigen::MatrixXd A(T.rows(), T.cols() + 1);
    A << T, xi;
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const auto& s = svd.singularValues();
    return s.size() == A.cols() && s.maxCoeff() > 0.0 && s.minCoeff() > 1e-12 * s.maxCoeff();
}

}  // namespace

TransverseCoefficients transverse_coefficients(const Jet& H, int v_index, int z_first) {
    const Jet dvH = H.derivative(v_index);
    if (!(dvH.value() > 0.0)) {
        throw NonPositiveDerivative("dH/dv = " + std::to_string(dvH.value()) + " is not positive");
    }
    TransverseCoefficients t;
    t.U1 = reciprocal(dvH);
    t.M = 0.0 * dvH;
    for (int A = z_first; A < H.nvars(); ++A) {
        t.q.push_back(H.derivative(A));
        t.M += 0.5 * t.q.back() * t.q.back();
    }
    t.V1 = t.M * t.U1;
    for (const Jet& qa : t.q) t.x1.push_back(qa * t.U1);
    return t;
}

TransverseCoefficients transverse_coefficients(const JumpFunction& H, double v, std::span<const double> z) {
    return transverse_coefficients(H.jets(v, z, 3), 0, 1);
}

std::vector<Jet> chart_map(const JumpFunction& H, Side side, std::span<const double> point, int order) {
    const int n = H.dim_n();
    if (static_cast<int>(point.size()) != n + 1) throw WrongDimension("chart point needs u, v and the z coordinates");
    const auto seeds = seed_variables(point, order + 1);
    std::vector<Jet> out;
    out.reserve(seeds.size());
    if (side == Side::minus) {
        for (const Jet& s : seeds) out.push_back(s.truncated(order));
        return out;
    }
    const Jet Hj = H.evaluate(seeds[1], std::span<const Jet>(seeds).subspan(2));
    const TransverseCoefficients t = transverse_coefficients(Hj, 1, 2);
    const Jet u = seeds[0].truncated(order);
    out.push_back(u * t.U1);
    out.push_back(Hj.truncated(order) + u * t.V1);
    for (int A = 0; A < n - 1; ++A) out.push_back(seeds[2 + A].truncated(order) + u * t.x1[A]);
    return out;
}

Eigen::VectorXd rigging_plus(const JumpFunction& H, double lambda, double v, std::span<const double> z) {
    const double scale = lambda == 0.0 ? 1.0 : std::pow(leaf_omega(lambda, z), 2);
    const Jet Hj = H.jets(v, z, 1);
    const double dv = Hj.d(0);
    if (!(dv > 0.0)) throw NonPositiveDerivative("dH/dv = " + std::to_string(dv) + " is not positive");
    const int n = H.dim_n();
    Eigen::VectorXd xi = Eigen::VectorXd::Zero(n + 1);
    double half_q2 = 0.0;
    for (int A = 0; A < n - 1; ++A) {
        const double q = Hj.d(A + 1);
        half_q2 += 0.5 * q * q;
        xi[2 + A] = -scale / dv * q;
    }
    xi[0] = -scale / dv;
    xi[1] = -scale / dv * half_q2;
    return xi;
}

Eigen::VectorXd rigging_minus(double lambda, double, std::span<const double> z) {
    const double scale = lambda == 0.0 ? 1.0 : std::pow(leaf_omega(lambda, z), 2);
    Eigen::VectorXd xi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(z.size()) + 2);
    xi[0] = -scale;
    return xi;
}

BoundaryFrame boundary_frame(double lambda, double, std::span<const double> x) {
    const int dim = static_cast<int>(x.size()) + 2;
    const double omega = leaf_omega(lambda, x);
    BoundaryFrame f;
    f.L = Eigen::VectorXd::Zero(dim);
    f.L[0] = -omega * omega;
    f.k = Eigen::VectorXd::Unit(dim, 1);
    for (int I = 2; I < dim; ++I) f.v_I.push_back(Eigen::VectorXd::Unit(dim, I));
    // k = d/dV is future by convention; a null L with g(L, k) > 0 is then past.
    f.k_future = true;
    f.L_past = f.L[0] < 0.0;
    return f;
}

double frame_residual(const BoundaryFrame& f, double lambda, double V, std::span<const double> x) {
    std::vector<double> point{0.0, V};
    point.insert(point.end(), x.begin(), x.end());
    const Eigen::MatrixXd g = metric_values(lambda, static_cast<int>(point.size()), Chart::flat_minus, point);
    double r = std::max(std::abs(f.L.dot(g * f.k) - 1.0), std::abs(f.L.dot(g * f.L)));
    for (const auto& vI : f.v_I) r = std::max(r, std::abs(f.L.dot(g * vI)));
    return r;
}

double JunctionReport::max_residual() const {
    return std::max({first_form, rigging_tangent, rigging_norm, chart_continuity});
}

JunctionReport verify_junction(const JumpFunction& H, double lambda, std::span<const LeafPoint> samples) {
    const int n = H.dim_n();
    const int dim = n + 1;
    JunctionReport rep;
    for (const LeafPoint& s : samples) {
        const Jet Hj = H.jets(s.v, s.z, 1);
        std::vector<double> pm{0.0, s.v};
        pm.insert(pm.end(), s.z.begin(), s.z.end());
        std::vector<double> pp{0.0, Hj.value()};
        pp.insert(pp.end(), s.z.begin(), s.z.end());
        const Eigen::MatrixXd gm = metric_values(lambda, dim, Chart::flat_minus, pm);
        const Eigen::MatrixXd gp = metric_values(lambda, dim, Chart::flat_plus, pp);

        // Tangent bases: e- = d/dv, d/dz on the minus side; e+ as images under the embedding.
        Eigen::MatrixXd em = Eigen::MatrixXd::Zero(dim, n);
        Eigen::MatrixXd ep = Eigen::MatrixXd::Zero(dim, n);
        for (int a = 0; a < n; ++a) {
            em(a + 1, a) = 1.0;
            ep(1, a) = Hj.d(a);
            if (a > 0) ep(a + 1, a) = 1.0;
        }
        const Eigen::VectorXd xm = rigging_minus(lambda, s.v, s.z);
        const Eigen::VectorXd xp = rigging_plus(H, lambda, s.v, s.z);

        rep.first_form = std::max(rep.first_form, (em.transpose() * gm * em - ep.transpose() * gp * ep).cwiseAbs().maxCoeff());
        rep.rigging_tangent = std::max(rep.rigging_tangent, (xm.transpose() * gm * em - xp.transpose() * gp * ep).cwiseAbs().maxCoeff());
        rep.rigging_norm = std::max(rep.rigging_norm, std::abs(xm.dot(gm * xm) - xp.dot(gp * xp)));
        rep.minus_inward = rep.minus_inward && xm[0] < 0.0;
        rep.plus_outward = rep.plus_outward && xp[0] < 0.0;

        // Plus chart map at u = 0: image point, tangential pushforwards, and d/du = -xi+ / Omega_N^2.
        const auto X = chart_map(H, Side::plus, pm, 1);
        const double scale = lambda == 0.0 ? 1.0 : std::pow(leaf_omega(lambda, s.z), 2);
        for (int alpha = 0; alpha < dim; ++alpha) {
            double r = std::abs(X[alpha].value() - pp[alpha]);
            r = std::max(r, std::abs(X[alpha].d(0) + xp[alpha] / scale));
            for (int a = 0; a < n; ++a) r = std::max(r, std::abs(X[alpha].d(a + 1) - ep(alpha, a)));
            rep.chart_continuity = std::max(rep.chart_continuity, r);
        }
        ++rep.samples;
    }
    rep.pass = rep.max_residual() <= kJunctionTolerance && rep.minus_inward && rep.plus_outward;
    return rep;
}

AligningReport verify_xi_aligning(const AligningData& data, std::span<const std::vector<double>> parameters) {
    AligningReport rep;
    for (const auto& s : parameters) {
        const int k = static_cast<int>(s.size());
        const auto seeds = seed_variables(s, 1);
        const auto X1 = data.embed1(seeds);
        const auto X2 = data.embed2(seeds);
        const auto p1 = values(X1);
        const auto p2 = values(X2);
        const Eigen::MatrixXd T1 = tangent_matrix(X1, k);
        const Eigen::MatrixXd T2 = tangent_matrix(X2, k);
        const Eigen::VectorXd xi1 = data.xi1(s);
        const Eigen::VectorXd xi2 = data.xi2(s);
        if (!spans_transversally(T1, xi1) || !spans_transversally(T2, xi2)) {
            throw NotTransversal("transverse field is tangent to the hypersurface");
        }
        const Eigen::MatrixXd g1 = data.g1.eval(p1, 0).values();
        const Eigen::MatrixXd g2 = data.g2.eval(p2, 0).values();
        rep.tangent = std::max(rep.tangent, (T1.transpose() * g1 * T1 - T2.transpose() * g2 * T2).cwiseAbs().maxCoeff());
        rep.mixed = std::max(rep.mixed, (xi1.transpose() * g1 * T1 - xi2.transpose() * g2 * T2).cwiseAbs().maxCoeff());
        rep.transverse = std::max(rep.transverse, std::abs(xi1.dot(g1 * xi1) - xi2.dot(g2 * xi2)));
        ++rep.samples;
    }
    rep.pass = rep.tangent <= kAligningTolerance && rep.mixed <= kAligningTolerance &&
               rep.transverse <= kAligningTolerance;
    return rep;
}

AligningData matched_aligning_data(const JumpFunction& H, double lambda) {
    const int dim = H.dim_n() + 1;
    AligningData d;
    d.g1 = conformal_null_metric(lambda, dim, Chart::flat_minus);
    d.g2 = conformal_null_metric(lambda, dim, Chart::flat_plus);
    d.embed1 = [](std::span<const Jet> s) {
        std::vector<Jet> X{0.0 * s[0]};
        X.insert(X.end(), s.begin(), s.end());
        return X;
    };
    d.embed2 = [H](std::span<const Jet> s) {
        std::vector<Jet> X{0.0 * s[0], H.evaluate(s[0], s.subspan(1))};
        X.insert(X.end(), s.begin() + 1, s.end());
        return X;
    };
    d.xi1 = [lambda](std::span<const double> s) { return rigging_minus(lambda, s[0], s.subspan(1)); };
    d.xi2 = [H, lambda](std::span<const double> s) { return rigging_plus(H, lambda, s[0], s.subspan(1)); };
    return d;
}

GeodesicExtensionReport verify_geodesic_extension(double lambda, const JumpFunction& H,
                                                  std::span<const std::vector<double>> samples) {
    const int dim = H.dim_n() + 1;
    const MetricField g = conformal_null_metric(lambda, dim, Chart::flat_plus);
    GeodesicExtensionReport rep;
    for (const auto& pt : samples) {
        const auto X = chart_map(H, Side::plus, pt, 2);
        const auto p = values(X);
        const double omega = chart_omega(lambda, p);
        Eigen::VectorXd xi(dim);
        Eigen::VectorXd acc(dim);
        for (int a = 0; a < dim; ++a) {
            xi[a] = X[a].d(0);
            acc[a] = X[a].d(0, 0);
        }
        const Eigen::MatrixXd gv = g.eval(p, 0).values();
        const Christoffel gamma = christoffel_at(g, p, 0);
        double domega = -2.0 * (xi[0] * p[1] + p[0] * xi[1]);
        for (int a = 2; a < dim; ++a) domega += 2.0 * p[a] * xi[a];
        domega *= lambda / 12.0;
        const double F = 2.0 * domega / omega;

        rep.null_residual = std::max(rep.null_residual, std::abs(xi.dot(gv * xi)));
        for (int nu = 0; nu < dim; ++nu) {
            double r = acc[nu] + F * xi[nu];
            for (int a = 0; a < dim; ++a)
                for (int b = 0; b < dim; ++b) r += gamma(nu, a, b).value() * xi[a] * xi[b];
            rep.geodesic_residual = std::max(rep.geodesic_residual, std::abs(r));
        }
        rep.affine_residual = std::max(rep.affine_residual, acc.cwiseAbs().maxCoeff());
        ++rep.samples;
    }
    rep.pass = rep.null_residual <= kGeodesicTolerance && rep.geodesic_residual <= kGeodesicTolerance &&
               rep.affine_residual <= kGeodesicTolerance;
    return rep;
}

Eigen::MatrixXd pulled_back_metric(const JumpFunction& H, double lambda, Side side, std::span<const double> point) {
    const auto X = chart_map(H, side, point, 1);
    const int dim = static_cast<int>(X.size());
    const Eigen::MatrixXd J = tangent_matrix(X, dim);
    Eigen::MatrixXd eta = Eigen::MatrixXd::Identity(dim, dim);
    eta(0, 0) = eta(1, 1) = 0.0;
    eta(0, 1) = eta(1, 0) = -1.0;
    Eigen::MatrixXd g = J.transpose() * eta * J;
    if (lambda != 0.0) g /= std::pow(chart_omega(lambda, values(X)), 2);
    return g;
}

AligningData aligning_counterexample() {
    auto plane = [](double gyy) {
        MetricField g;
        g.chart = Chart::generic;
        g.dim = 2;
        g.eval = [gyy](std::span<const double> p, int order) {
            const auto x = seed_variables(p, order);
            const Jet zero = 0.0 * x[0];
            JetMatrix m(2, zero);
            m(0, 0) = zero + 1.0;
            m(1, 1) = zero + gyy;
            return m;
        };
        return g;
    };
    AligningData d;
    d.g1 = plane(1.0);
    d.g2 = plane(2.0);
    d.embed1 = [](std::span<const Jet> s) { return std::vector<Jet>{s[0], 0.0 * s[0]}; };
    d.embed2 = d.embed1;
    d.xi1 = [](std::span<const double>) { return Eigen::VectorXd(Eigen::Vector2d(0.0, 1.0)); };
    d.xi2 = d.xi1;
    return d;
}

}  // namespace nullshell
