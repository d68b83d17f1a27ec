#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "nullshell/jump_functions.hpp"
#include "nullshell/mollifier.hpp"

namespace nullshell {

/// phi_k(u) = (1 - (u/w)^2)^4 u^k on |u| < w, zero outside.
struct TestFunction {
    int k = 0;
    double width = 1.0;
    double operator()(double u) const;
};

/// Regularized factors of a model product.
enum class Factor { one, theta, one_minus_theta, theta_sq, delta };

std::string to_string(Factor f);

struct Extrapolation {
    double limit = 0.0;
    /// Fitted power q in value = limit + C eps^q; 0 when no eps-dependence is measurable.
    double order = 0.0;
    bool eps_independent = false;
};

/// q from the last three values (geometric eps assumed), then exact interpolation
/// of limit + sum_j C_j eps^(q + j) through all points; q is snapped to the
/// nearest integer when within 0.1 of it.
Extrapolation extrapolate(std::span<const double> eps, std::span<const double> values);

struct PairingResult {
    std::vector<double> eps;
    std::vector<double> values;
    double limit = 0.0;
    double order = 0.0;
    bool eps_independent = false;
};

/// Integral of f over [a, b] by adaptive Gauss-Kronrod; throws QuadratureFailure
/// when the error estimate exceeds 1e-11 max(1, |result|).
double integrate(const std::function<double(double)>& f, double a, double b);

/// <left_eps * right_eps, phi> for each eps, with the eps -> 0 extrapolation.
PairingResult model_product_pairing(Factor left, Factor right, const TestFunction& phi, const Mollifier& mollifier,
                                    std::span<const double> eps);

/// The model-product value of left * right paired with phi: theta delta = delta/2,
/// theta^2 = theta, (1 - theta) theta = 0, (1 - theta) delta = delta/2.
/// Throws DomainError for delta * delta.
double model_product_limit(Factor left, Factor right, const TestFunction& phi);

struct ComponentCheck {
    int mu = 0;
    int nu = 0;
    PairingResult regularized;
    double lipschitz = 0.0;
    double residual = 0.0;
};

struct WeakMetricReport {
    std::vector<ComponentCheck> components;
    double max_residual = 0.0;
    bool pass = false;
};

/// Pairs the regularized metric components with phi(u) at fixed (v, z) and compares
/// the extrapolated limit with the Lipschitz metric. Tolerance 1e-6.
/// An empty component list checks every independent component.
WeakMetricReport weak_metric_check(const JumpFunction& H, double lambda, std::vector<std::pair<int, int>> components,
                                   const TestFunction& phi, double v, std::span<const double> z,
                                   std::span<const double> eps, const Mollifier& mollifier);

}  // namespace nullshell
