#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <string>

#include "nullshell/jump_functions.hpp"
#include "nullshell/tensor_core.hpp"

namespace nullshell {

/// Orientation sign of the minus rigging: it points into the minus region.
inline constexpr int kEpsilon = -1;

/// Geometry of the leaves {v = const} on both sides of the shell.
/// Spatial indices I, J run over z2..zn; one-forms and tensors are given in
/// the coordinate basis d/dx^I of each side's own chart (V, x).
struct LeafGeometry {
    int dim_n = 0;
    /// h_IJ as jets of the arguments.
    std::function<JetMatrix(std::span<const Jet> x)> h;
    std::function<Eigen::VectorXd(double V, std::span<const double> x)> sigma_minus;
    std::function<Eigen::VectorXd(double V, std::span<const double> x)> sigma_plus;
    std::function<Eigen::MatrixXd(double V, std::span<const double> x)> theta_minus;
    std::function<Eigen::MatrixXd(double V, std::span<const double> x)> theta_plus;
    int epsilon = kEpsilon;

    /// Minkowski leaves: h = delta, sigma = 0, Theta = 0.
    static LeafGeometry flat(int dim_n);
    /// Leaves of the constant-curvature regions g = eta / Omega^2 with rigging
    /// L = -Omega^2 d/dU. sigma and Theta are computed from the ambient
    /// Christoffel symbols; h = delta / Omega_N^2.
    static LeafGeometry constant_curvature(double lambda, int dim_n);
};

/// sigma_L(X) = -g(nabla_X k, L) and Theta_L(X, Y) = g(nabla_X L, Y) on the
/// leaf through (U = 0, V, x) of a chart (U, V, x), with k = d/dV.
struct LeafForms {
    Eigen::VectorXd sigma;
    Eigen::MatrixXd theta;
};
LeafForms leaf_forms_from_ambient(const MetricField& g,
                                  const std::function<std::vector<Jet>(std::span<const Jet>)>& rigging,
                                  double V, std::span<const double> x);

/// [Y_ab] with index 0 = v and 1.. = z2..zn: -d_a d_b H / d_v H.
Eigen::MatrixXd jump_tensor_minkowski(const JumpFunction& H, double v, std::span<const double> z);
Eigen::MatrixXd jump_tensor_general(const JumpFunction& H, const LeafGeometry& geom, double v,
                                    std::span<const double> z);
/// [Y-hat] of the constant-curvature matching: spatial block shifted by
/// Lambda delta / (6 Omega_N d_vH) (v d_vH - H + z.dH).
Eigen::MatrixXd jump_tensor_ads(const JumpFunction& H, double lambda, double v, std::span<const double> z);

struct EnergyMomentum {
    double tau_vv = 0.0;
    Eigen::VectorXd tau_vI;
    Eigen::MatrixXd tau_IJ;
};

/// Contravariant shell stress from [Y] and the inverse leaf metric.
EnergyMomentum energy_momentum(const Eigen::MatrixXd& Y, const Eigen::MatrixXd& h_inverse,
                               int epsilon = kEpsilon);
EnergyMomentum energy_momentum(const Eigen::MatrixXd& Y, const LeafGeometry& geom, std::span<const double> z);

struct ShellScalars {
    double rho = 0.0;
    Eigen::VectorXd flux;
    double pressure = 0.0;
};

ShellScalars shell_scalars(const JumpFunction& H, double v, std::span<const double> z);

enum class ShellClass { NoShell, PureGravity, NullDust, Generic };
std::string to_string(ShellClass c);

struct ShellContent {
    Eigen::MatrixXd Y_jump;
    double rho = 0.0;
    Eigen::VectorXd flux;
    double pressure = 0.0;
    ShellClass shell_class = ShellClass::Generic;
    int epsilon = kEpsilon;
};

/// Content at one point; the class is that of the single-point grid.
ShellContent shell_content(const JumpFunction& H, double v, std::span<const double> z);

/// Classification over a grid with absolute tolerance 1e-10.
ShellClass classify_shell(const JumpFunction& H, std::span<const LeafPoint> grid);

struct ExampleClosedForms {
    double dvH = 0.0;
    double p = 0.0;
    double rho = 0.0;
    double jr = 0.0;
};

/// Closed forms for the example family in four spacetime dimensions.
ExampleClosedForms example_closed_forms(const ExampleParams& params, double v, double r);

/// Radial flux r^{-1} z.j for a point with r > 0.
double radial_flux(const Eigen::VectorXd& flux, std::span<const double> z);

}  // namespace nullshell
