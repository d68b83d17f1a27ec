#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

#include "nullshell/jump_functions.hpp"
#include "nullshell/tensor_core.hpp"

namespace nullshell {

/// Coefficients of the plus-side chart map, linear in u:
/// U = u U1, V = H + u V1, x = z + u x1.
/// Invariants: U1 > 0, V1 = M U1, x1 = q U1, 2M = |q|^2.
struct TransverseCoefficients {
    Jet U1;
    Jet V1;
    std::vector<Jet> x1;
    Jet M;
    std::vector<Jet> q;
};

/// Jets of order 2 in the leaf variables (v, z2, ..., zn).
TransverseCoefficients transverse_coefficients(const JumpFunction& H, double v, std::span<const double> z);
/// The same coefficients computed from H given as a jet (any variable set) whose
/// v-derivative is taken along variable v_index. The result has one order less.
TransverseCoefficients transverse_coefficients(const Jet& H, int v_index, int z_first);

enum class Side { minus, plus };

/// Flat-chart coordinates (U, V, x) as jets over (u, v, z) at the given point.
std::vector<Jet> chart_map(const JumpFunction& H, Side side, std::span<const double> point, int order = 1);

/// Matching rigging on the plus boundary in (U, V, x) components at (U = 0, V = H).
Eigen::VectorXd rigging_plus(const JumpFunction& H, double lambda, double v, std::span<const double> z);
/// Minus rigging -Omega_N^2 d/dU at (0, v, z).
Eigen::VectorXd rigging_minus(double lambda, double v, std::span<const double> z);

/// Null basis along a boundary {U = 0} of a conformally flat chart:
/// L = -Omega^2 d/dU (past), k = d/dV (future), v_I = d/dx^I.
struct BoundaryFrame {
    Eigen::VectorXd k;
    Eigen::VectorXd L;
    std::vector<Eigen::VectorXd> v_I;
    bool k_future = true;
    bool L_past = true;
};

BoundaryFrame boundary_frame(double lambda, double V, std::span<const double> x);
/// max(|g(L,k) - 1|, |g(L,v_I)|, |g(L,L)|).
double frame_residual(const BoundaryFrame& f, double lambda, double V, std::span<const double> x);

struct JunctionReport {
    std::size_t samples = 0;
    double first_form = 0.0;        // g-(e_a, e_b) vs g+(e_a, e_b)
    double rigging_tangent = 0.0;   // g-(xi, e_a) vs g+(xi, e_a)
    double rigging_norm = 0.0;      // g-(xi, xi) vs g+(xi, xi)
    double chart_continuity = 0.0;  // chart maps and their tangential derivatives at u = 0
    bool minus_inward = true;
    bool plus_outward = true;
    bool pass = false;
    double max_residual() const;
};

/// Checks the junction conditions at samples on u = 0 with tolerance 1e-9.
JunctionReport verify_junction(const JumpFunction& H, double lambda, std::span<const LeafPoint> samples);

/// A hypersurface given by embeddings of a common parameter space into two
/// manifolds, with a transverse field on each side.
struct AligningData {
    MetricField g1;
    MetricField g2;
    std::function<std::vector<Jet>(std::span<const Jet>)> embed1;
    std::function<std::vector<Jet>(std::span<const Jet>)> embed2;
    // Transverse fields at the images of a parameter point.
    std::function<Eigen::VectorXd(std::span<const double>)> xi1;
    std::function<Eigen::VectorXd(std::span<const double>)> xi2;
};

struct AligningReport {
    std::size_t samples = 0;
    double tangent = 0.0;     // (i)
    double mixed = 0.0;       // (ii)
    double transverse = 0.0;  // (iii)
    bool pass = false;
};

/// Residuals of the xi-aligning conditions; pass iff all are <= 1e-10.
/// Throws NotTransversal when xi lies in the tangent space at a sample.
AligningReport verify_xi_aligning(const AligningData& data, std::span<const std::vector<double>> parameters);

/// The matched null-shell data in the form taken by verify_xi_aligning.
AligningData matched_aligning_data(const JumpFunction& H, double lambda);

/// The line y = 0 in the planes dx^2 + dy^2 and dx^2 + 2 dy^2, both with
/// transverse field d/dy and identity embeddings. Conditions (i) and (ii) hold
/// exactly; the transverse norms differ by 1, so (iii) fails.
AligningData aligning_counterexample();

struct GeodesicExtensionReport {
    std::size_t samples = 0;
    double null_residual = 0.0;      // g(xi, xi)
    double geodesic_residual = 0.0;  // nabla_xi xi + F xi
    double affine_residual = 0.0;    // xi(xi(X))
    bool pass = false;
};

/// Checks that d/du is a null, pre-geodesic field with affine chart map at
/// samples (u, v, z) with u > 0. Tolerance 1e-9.
GeodesicExtensionReport verify_geodesic_extension(double lambda, const JumpFunction& H,
                                                  std::span<const std::vector<double>> samples);

/// Pullback of the plus (or minus) flat-chart metric under chart_map, divided by
/// Omega^2 of the image point when lambda != 0.
Eigen::MatrixXd pulled_back_metric(const JumpFunction& H, double lambda, Side side, std::span<const double> point);

}  // namespace nullshell
