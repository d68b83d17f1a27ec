#include "nullshell/metric_assembly.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nullshell/errors.hpp"
#include "nullshell/matching_engine.hpp"
#include "nullshell/shell_physics.hpp"

using namespace nullshell;

namespace {

const char* kFamilyText = "4*v - 2*log(cosh(v)) - tanh(r)*exp(-v^2) - (1.1*r^2/4)*erf(r)";

std::vector<std::vector<double>> random_points(int count, double ulo, double uhi, double half, unsigned seed,
                                               int dim_n = 3) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uu(ulo, uhi);
    std::uniform_real_distribution<double> w(-half, half);
    std::vector<std::vector<double>> out;
    for (int k = 0; k < count; ++k) {
        std::vector<double> p{uu(rng)};
        for (int a = 0; a < dim_n; ++a) p.push_back(w(rng));
        out.push_back(p);
    }
    return out;
}

Eigen::MatrixXd flat(int dim) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(dim, dim);
    g(0, 0) = g(1, 1) = 0.0;
    g(0, 1) = g(1, 0) = -1.0;
    return g;
}

}  // namespace

TEST(Lipschitz, NoShellIsFlat) {
    const auto H = parse_jump_expression("v", 3);
    for (const auto& p : random_points(20, -1.0, 1.0, 2.0, 1))
        EXPECT_EQ((lipschitz_metric_values(H, 0.0, p) - flat(4)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Lipschitz, LogCoshExample) {
    const auto H = parse_jump_expression("2*v - log(cosh(v))", 3);
    for (const auto& p : random_points(30, -1.0, 1.5, 2.0, 2)) {
        Eigen::MatrixXd expected = flat(4);
        const double up = std::max(p[0], 0.0);
        const double c = std::cosh(p[1]);
        expected(1, 1) = -2.0 * up / (c * c) / (2.0 - std::tanh(p[1]));
        EXPECT_LE((lipschitz_metric_values(H, 0.0, p) - expected).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(Lipschitz, ContinuousAtShell) {
    const auto H = parse_jump_expression(kFamilyText, 3);
    for (const auto& p : random_points(20, 0.0, 0.0, 2.0, 3)) {
        std::vector<double> minus = p;
        minus[0] = -1e-300;
        for (double lambda : {0.0, 2.0, -1.0}) {
            const Eigen::MatrixXd a = lipschitz_metric_values(H, lambda, p);
            const Eigen::MatrixXd b = lipschitz_metric_values(H, lambda, minus);
            EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-14);
        }
    }
}

TEST(Lipschitz, PullbackIdentity) {
    const auto H = parse_jump_expression(kFamilyText, 3);
    for (double lambda : {0.0, 3.0, -3.0}) {
        for (const auto& p : random_points(200, 0.01, 1.0, 1.0, 4)) {
            const Eigen::MatrixXd a = pulled_back_metric(H, lambda, Side::plus, p);
            const Eigen::MatrixXd b = lipschitz_metric_values(H, lambda, p);
            EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-9) << lambda;
            const double Q = lipschitz_conformal_factor(H, lambda, p);
            EXPECT_NEAR(-1.0 / (Q * Q), b(0, 1), 1e-12);
        }
    }
}

TEST(Lipschitz, MinusSideIsPullback) {
    const auto H = parse_jump_expression(kFamilyText, 3);
    for (double lambda : {0.0, 1.0}) {
        for (const auto& p : random_points(20, -1.0, -0.01, 1.0, 5)) {
            const Eigen::MatrixXd a = pulled_back_metric(H, lambda, Side::minus, p);
            EXPECT_LE((a - lipschitz_metric_values(H, lambda, p)).cwiseAbs().maxCoeff(), 1e-14);
        }
    }
}

TEST(Lipschitz, ConstantCurvature) {
    const auto H = parse_jump_expression(kFamilyText, 3);
    for (double lambda : {0.0, 3.0, -3.0}) {
        const MetricField f = lipschitz_metric_field(H, lambda);
        for (const auto& p : random_points(6, -0.8, 0.8, 0.8, 6)) {
            if (std::abs(p[0]) < 1e-3) continue;
            EXPECT_LE(constant_curvature_residual(f, p, lambda / 3.0), 1e-8) << lambda;
        }
    }
}

TEST(Lipschitz, Signature) {
    const auto H = parse_jump_expression(kFamilyText, 3);
    for (double lambda : {0.0, 1.0}) {
        for (const auto& p : random_points(50, -1.0, 1.0, 1.0, 7)) {
            const Signature s = signature_of(lipschitz_metric_values(H, lambda, p));
            EXPECT_EQ(s, (Signature{1, 0, 3}));
        }
    }
}

TEST(Lipschitz, LipschitzBound) {
    const auto H = parse_jump_expression(kFamilyText, 3);
    for (const auto& p : random_points(10, 0.0, 0.0, 1.5, 8)) {
        double prev = 0.0;
        for (double h : {1e-2, 1e-3, 1e-4}) {
            std::vector<double> a = p;
            std::vector<double> b = p;
            a[0] = -h;
            b[0] = h;
            const double diff = (lipschitz_metric_values(H, 0.0, a) - lipschitz_metric_values(H, 0.0, b)).cwiseAbs().maxCoeff();
            const double C = diff / h;
            EXPECT_TRUE(std::isfinite(C));
            if (prev > 0.0 && diff > 0.0) EXPECT_GE(std::log(prev / diff) / std::log(10.0), 0.99);
            prev = diff;
        }
    }
}

TEST(Lipschitz, DerivativeJumpEncodesShell) {
    const auto H = parse_jump_expression(kFamilyText, 3);
    for (const auto& p : random_points(30, 0.0, 0.0, 1.5, 9)) {
        const JetMatrix g = lipschitz_metric(H, 0.0, p, 1);
        const Eigen::MatrixXd Y = jump_tensor_minkowski(H, p[1], std::vector<double>{p[2], p[3]});
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) EXPECT_NEAR(-0.5 * g(1 + a, 1 + b).d(0), Y(a, b), 1e-9);
    }
}

TEST(Lipschitz, Errors) {
    const auto bad = parse_jump_expression("v - v^3", 3);
    EXPECT_THROW(lipschitz_metric_values(bad, 0.0, std::vector<double>{0.1, 2.0, 0.0, 0.0}), NonPositiveDerivative);
    const auto H = parse_jump_expression("v", 3);
    EXPECT_THROW(lipschitz_metric_values(H, -12.0, std::vector<double>{-0.5, 0.0, 1.0, 0.0}), ConformalFactorZero);
}

TEST(HScript, Examples) {
    const auto penrose = parse_jump_expression("v + sinh(z2)*z3", 3);
    const std::vector<double> z{0.7, -0.4};
    EXPECT_NEAR(hscript(penrose, 0.3, z), std::sinh(0.7) * -0.4, 1e-15);

    const auto H = parse_jump_expression("2*v - log(cosh(v))", 3);
    for (double v : {-2.0, -0.5, 0.0, 0.8, 3.0}) {
        const double t = std::tanh(v);
        const double displayed = 2.0 * (t - 3.0) * (t - 2.0) / ((t - 4.0) * t + 5.0) * (v - std::log(std::cosh(v)));
        EXPECT_NEAR(2.0 * hscript(H, v, z), displayed, 1e-14);
    }
    EXPECT_EQ(hscript(H, 0.0, z), 0.0);
}

TEST(HScript, RigidRewriting) {
    const auto H = parse_jump_expression(kFamilyText, 3);
    for (const auto& p : random_points(50, 0.0, 0.0, 2.0, 10)) {
        const std::vector<double> z{p[2], p[3]};
        const double U1 = 1.0 / H.jets(p[1], z, 1).d(0);
        const double rewritten = (1.0 + U1) / (1.0 + U1 * U1) * (H.value(p[1], z) - p[1]);
        EXPECT_NEAR(hscript(H, p[1], z), rewritten, 1e-13 * std::max(1.0, std::abs(rewritten)));
    }
}

TEST(Rosen, FlatProfile) {
    const auto H = make_wave({1.0, "0"}, 3);
    const RosenForm r = rosen_form(H, 0.7, std::vector<double>{0.3, 0.2});
    EXPECT_EQ(r.omega_Z, std::complex<double>(1.0, 0.0));
    EXPECT_EQ(r.omega_Zbar, std::complex<double>(0.0, 0.0));
    EXPECT_LE((r.metric - flat(4)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Rosen, Quadratic) {
    const auto H = make_wave({1.0, "(z2^2 - z3^2)/2"}, 3);
    const double u = 0.6;
    const RosenForm r = rosen_form(H, u, std::vector<double>{0.3, 0.2});
    EXPECT_NEAR(std::abs(r.omega_Z - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(r.omega_Zbar - u), 0.0, 1e-15);
}

TEST(Rosen, MatchesLipschitz) {
    const auto H = make_wave({1.7, "sinh(z2)*cosh(z3)/3 + z2*z3^2/5"}, 3);
    for (const auto& p : random_points(100, -1.0, 1.0, 1.5, 11)) {
        const RosenForm r = rosen_form(H, p[0], std::vector<double>{p[2], p[3]});
        const Eigen::MatrixXd g = lipschitz_metric_values(H, 0.0, p);
        EXPECT_LE((r.metric - g).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Rosen, Errors) {
    EXPECT_THROW(rosen_form(make_example({4, 2, 1, 1.1}, 3), 0.1, std::vector<double>{0.1, 0.1}), NotWaveType);
    EXPECT_THROW(rosen_form(parse_jump_expression("v + v*z2", 3), 0.1, std::vector<double>{0.1, 0.1}), NotWaveType);
    EXPECT_THROW(rosen_form(make_wave({1.0, "z2^2"}, 4), 0.1, std::vector<double>{0.1, 0.1, 0.1}), WrongDimension);
    EXPECT_NO_THROW(rosen_form(parse_jump_expression("2*v + z2*z3", 3), 0.1, std::vector<double>{0.1, 0.1}));
}

TEST(Regularized, NoShellIsFlat) {
    const auto H = parse_jump_expression("v", 3);
    const Mollifier m = make_mollifier(MollifierKind::poly_bump);
    for (double eps : {0.5, 1e-2}) {
        for (const auto& p : random_points(20, -1.0, 1.0, 1.0, 12)) {
            EXPECT_LE((regularized_distributional_metric(H, 0.0, m, eps, p) - flat(4)).cwiseAbs().maxCoeff(), 1e-15);
        }
    }
}

TEST(Regularized, SaturatedEqualsLipschitz) {
    const auto H = parse_jump_expression(kFamilyText, 3);
    for (MollifierKind kind : {MollifierKind::poly_bump, MollifierKind::tilted_bump}) {
        const Mollifier m = make_mollifier(kind);
        for (double lambda : {0.0, 2.0, -2.0}) {
            for (const auto& p : random_points(40, -1.0, 1.0, 1.0, 13)) {
                const double eps = 0.5 * std::abs(p[0]);
                const Eigen::MatrixXd a = regularized_distributional_metric(H, lambda, m, eps, p);
                const Eigen::MatrixXd b = lipschitz_metric_values(H, lambda, p);
                EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-12);
            }
        }
    }
}

TEST(Regularized, Symmetric) {
    const auto H = parse_jump_expression(kFamilyText, 3);
    const Mollifier m = make_mollifier(MollifierKind::tilted_bump);
    for (const auto& p : random_points(20, -0.1, 0.1, 1.0, 14)) {
        const Eigen::MatrixXd g = regularized_distributional_metric(H, 1.0, m, 0.1, p);
        EXPECT_EQ((g - g.transpose()).cwiseAbs().maxCoeff(), 0.0);
    }
}
