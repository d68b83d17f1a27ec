#include "nullshell/tensor_core.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nullshell/errors.hpp"

using namespace nullshell;

namespace {

// A non-symmetric-space Lorentzian metric in (t, x, y) with polynomial and transcendental entries.
MetricField wavy_metric() {
    MetricField f;
    f.dim = 3;
    f.eval = [](std::span<const double> p, int order) {
        const auto x = seed_variables(p, order);
        JetMatrix g(3, Jet::constant(0.0, 3, order));
        g(0, 0) = -(1.0 + 0.3 * x[1] * x[1]);
        g.set_symmetric(0, 1, 0.2 * sin(x[0] + x[2]));
        g.set_symmetric(1, 2, 0.1 * x[0] * x[1]);
        g(1, 1) = exp(0.2 * x[2]);
        g(2, 2) = 1.0 + 0.5 * tanh(x[0] * x[1]) * tanh(x[0] * x[1]);
        return g;
    };
    return f;
}

MetricField sphere_like_metric() {
    MetricField f;
    f.dim = 2;
    f.eval = [](std::span<const double> p, int order) {
        const auto x = seed_variables(p, order);
        JetMatrix g(2, Jet::constant(0.0, 2, order));
        g(0, 0) = Jet::constant(1.0, 2, order);
        const Jet s = sin(x[0]);
        g(1, 1) = s * s;
        return g;
    };
    return f;
}

}  // namespace

TEST(Christoffel, FlatMetricHasNone) {
    const auto g = flat_null_metric(4);
    const double p[4] = {0.3, -1.2, 0.7, 2.0};
    const Christoffel gamma = christoffel_at(g, p);
    for (int r = 0; r < 4; ++r)
        for (int m = 0; m < 4; ++m)
            for (int k = 0; k < 4; ++k) EXPECT_EQ(gamma(r, m, k).value(), 0.0);
}

TEST(Christoffel, SphereLikeMetric) {
    const auto g = sphere_like_metric();
    const double p[2] = {std::numbers::pi / 4, 0.3};
    const Christoffel gamma = christoffel_at(g, p);
    EXPECT_NEAR(gamma(0, 1, 1).value(), -0.5, 1e-15);
    EXPECT_NEAR(gamma(1, 0, 1).value(), 1.0, 1e-15);  // cot(pi/4)
    EXPECT_NEAR(gamma(0, 0, 0).value(), 0.0, 1e-15);
}

TEST(Christoffel, ConformallyFlatFormula) {
    const double lambda = 3.0;
    const auto g = conformal_null_metric(lambda, 4);
    const double p[4] = {0.2, -0.4, 0.5, -0.3};
    const Christoffel gamma = christoffel_at(g, p);

    // Gamma^r_mk = -(delta^r_m d_k w + delta^r_k d_m w - g_mk g^rs d_s w), w = log Omega.
    const double omega = 1.0 + lambda / 12.0 * (p[2] * p[2] + p[3] * p[3] - 2.0 * p[0] * p[1]);
    const double dw[4] = {lambda / 12.0 * (-2.0 * p[1]) / omega, lambda / 12.0 * (-2.0 * p[0]) / omega,
                          lambda / 12.0 * 2.0 * p[2] / omega, lambda / 12.0 * 2.0 * p[3] / omega};
    Eigen::MatrixXd eta = Eigen::MatrixXd::Zero(4, 4);
    eta(0, 1) = eta(1, 0) = -1.0;
    eta(2, 2) = eta(3, 3) = 1.0;
    const Eigen::MatrixXd eta_inv = eta.inverse();
    for (int r = 0; r < 4; ++r)
        for (int m = 0; m < 4; ++m)
            for (int k = 0; k < 4; ++k) {
                double raised = 0.0;
                for (int s = 0; s < 4; ++s) raised += eta_inv(r, s) * dw[s];
                const double expected =
                    -((r == m ? dw[k] : 0.0) + (r == k ? dw[m] : 0.0) - eta(m, k) * raised);
                EXPECT_NEAR(gamma(r, m, k).value(), expected, 1e-14) << r << m << k;
            }
}

TEST(Christoffel, InsufficientOrderIsReported) {
    const auto g = conformal_null_metric(3.0, 4);
    const double p[4] = {0.1, 0.2, 0.3, 0.4};
    EXPECT_THROW(christoffel_from(g.eval(p, 0), 0), InsufficientOrder);
    EXPECT_THROW(riemann_from(g.eval(p, 1)), InsufficientOrder);
}

TEST(Inverse, JetInverseIsExact) {
    const auto g = wavy_metric();
    const double p[3] = {0.4, -0.3, 0.8};
    const JetMatrix m = g.eval(p, 4);
    const JetMatrix prod = m * inverse(m);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const auto c = prod(i, j).coefficients();
            EXPECT_NEAR(c[0], i == j ? 1.0 : 0.0, 1e-14);
            for (std::size_t k = 1; k < c.size(); ++k) EXPECT_NEAR(c[k], 0.0, 1e-13);
        }
}

TEST(Inverse, SingularMatrixRaises) {
    JetMatrix m(2, Jet(1.0));
    EXPECT_THROW(inverse(m), SingularMetric);
    JetMatrix ill(2, Jet(0.0));
    ill(0, 0) = Jet(1.0);
    ill(1, 1) = Jet(1e-14);
    EXPECT_THROW(inverse(ill), SingularMetric);
}

TEST(Riemann, FlatMetricVanishes) {
    const double p[4] = {1.0, 2.0, 3.0, 4.0};
    EXPECT_EQ(riemann_at(flat_null_metric(4), p).max_abs(), 0.0);
}

TEST(Riemann, DeSitterAndAntiDeSitterHaveConstantCurvature) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    for (double lambda : {3.0, -3.0}) {
        const auto g = conformal_null_metric(lambda, 4);
        for (int i = 0; i < 20; ++i) {
            const double p[4] = {c(rng), c(rng), c(rng), c(rng)};
            EXPECT_LE(constant_curvature_residual(g, p, lambda / 3.0), 1e-9);
            EXPECT_GT(constant_curvature_residual(g, p, 0.0), 1e-2);
        }
    }
}

TEST(Riemann, WrongCurvatureIsDetected) {
    const double p[4] = {0.1, 0.2, 0.3, 0.4};
    EXPECT_DOUBLE_EQ(constant_curvature_residual(flat_null_metric(4), p, 1.0), 1.0);
    EXPECT_EQ(constant_curvature_residual(flat_null_metric(4), p, 0.0), 0.0);
}

TEST(Riemann, SymmetriesAndFirstBianchiIdentity) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> c(-0.8, 0.8);
    const std::vector<MetricField> metrics = {wavy_metric(), conformal_null_metric(3.0, 4),
                                              conformal_null_metric(-3.0, 4), sphere_like_metric()};
    for (const auto& g : metrics) {
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<double> p(g.dim);
            for (double& x : p) x = c(rng);
            if (g.dim == 2) p[0] = 1.0 + 0.3 * p[0];
            const Rank4 R = riemann_at(g, p);
            const double scale = std::max(1.0, R.max_abs());
            const int n = g.dim;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    for (int m = 0; m < n; ++m)
                        for (int k = 0; k < n; ++k) {
                            EXPECT_LE(std::abs(R(a, b, m, k) + R(b, a, m, k)), 1e-10 * scale);
                            EXPECT_LE(std::abs(R(a, b, m, k) + R(a, b, k, m)), 1e-10 * scale);
                            EXPECT_LE(std::abs(R(a, b, m, k) - R(m, k, a, b)), 1e-10 * scale);
                            EXPECT_LE(std::abs(R(a, b, m, k) + R(a, m, k, b) + R(a, k, b, m)),
                                      1e-10 * scale);
                        }
        }
    }
}

TEST(Riemann, SphereLikeCurvatureIsOne) {
    const double p[2] = {0.9, 0.1};
    const auto g = sphere_like_metric();
    EXPECT_LE(constant_curvature_residual(g, p, 1.0), 1e-13);
}

TEST(Signature, Diagonal) {
    Eigen::MatrixXd m = Eigen::Vector4d(-1, 1, 1, 1).asDiagonal();
    EXPECT_EQ(signature_of(m), (Signature{1, 0, 3}));
}

TEST(Signature, DegenerateBlock) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
    m(1, 1) = 2.0;
    m(2, 2) = 0.5;
    EXPECT_EQ(signature_of(m), (Signature{0, 1, 2}));
}

TEST(Signature, InvariantUnderCongruence) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    std::uniform_int_distribution<int> pick(0, 3);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 3 + trial % 4;
        Eigen::VectorXd diag(n);
        for (int i = 0; i < n; ++i) {
            const int kind = pick(rng);
            diag[i] = kind == 0 ? 0.0 : (kind == 1 ? -(0.5 + std::abs(c(rng))) : 0.5 + std::abs(c(rng)));
        }
        const Eigen::MatrixXd d = diag.asDiagonal();
        Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) p(i, j) += 0.4 * c(rng);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(p);
        const double cond = svd.singularValues()(0) / svd.singularValues()(n - 1);
        if (cond > 50.0) {
            --trial;
            continue;
        }
        EXPECT_EQ(signature_of(p.transpose() * d * p), signature_of(d)) << trial;
    }
}

TEST(IndexOperations, LowerThenRaiseIsIdentity) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(3, 3);
    g(0, 1) = g(1, 0) = -1.0;
    g(2, 2) = 1.0;
    const Eigen::VectorXd v = Eigen::Vector3d(1.0, 2.0, 3.0);
    const Eigen::VectorXd w = lower_index(g, v);
    EXPECT_DOUBLE_EQ(w[0], -2.0);
    EXPECT_DOUBLE_EQ(w[1], -1.0);
    EXPECT_TRUE(raise_index(g.inverse(), w).isApprox(v));
}
