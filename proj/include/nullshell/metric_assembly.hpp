#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>

#include "nullshell/jump_functions.hpp"
#include "nullshell/mollifier.hpp"
#include "nullshell/tensor_core.hpp"

namespace nullshell {

/// Matched metric in (u, v, z2, ..., zn) as jets of the given order. For u < 0
/// it is the minus form; for u >= 0 the plus form, so jets at u = 0 are the
/// one-sided expansion from u > 0. Divided by Q^2 when lambda != 0.
JetMatrix lipschitz_metric(const JumpFunction& H, double lambda, std::span<const double> point, int order = 0);
Eigen::MatrixXd lipschitz_metric_values(const JumpFunction& H, double lambda, std::span<const double> point);
MetricField lipschitz_metric_field(const JumpFunction& H, double lambda);

/// The Lipschitz conformal factor Q at a point (u, v, z).
double lipschitz_conformal_factor(const JumpFunction& H, double lambda, std::span<const double> point);

/// dH/dv (1 + dH/dv) / (1 + (dH/dv)^2) (H - v). The impulsive term of the
/// distributional metric is 2 times this function.
double hscript(const JumpFunction& H, double v, std::span<const double> z);

struct RosenForm {
    /// omega = omega_Z dZ + omega_Zbar dZbar with Z = (z2 + i z3)/sqrt 2.
    std::complex<double> omega_Z;
    std::complex<double> omega_Zbar;
    /// -2 du dv + 2 omega (x)_s conj(omega) in (u, v, z2, z3).
    Eigen::Matrix4d metric;
};

/// Requires four spacetime dimensions and H = a v + f(z). Throws WrongDimension
/// or NotWaveType.
RosenForm rosen_form(const JumpFunction& H, double u, std::span<const double> z);

/// The metric with theta -> theta_eps, delta -> rho_eps. One-forms follow the
/// almost-everywhere bookkeeping: dU = (1 - theta) du + theta dU+,
/// dV = (1 - theta) dv + theta dV+ + rho (H - v) du, dX = (1 - theta) dz + theta dx+,
/// and the impulsive term is 2 hscript rho ((1 - theta) du^2 + theta dU+^2).
/// For lambda != 0 the result is divided by the regularized conformal factor.
Eigen::MatrixXd regularized_distributional_metric(const JumpFunction& H, double lambda, const Mollifier& mollifier,
                                                  double eps, std::span<const double> point);

}  // namespace nullshell
