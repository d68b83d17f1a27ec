#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

#include "nullshell/jet.hpp"

namespace nullshell {

/// Square matrix of jets, row major.
class JetMatrix {
public:
    JetMatrix() = default;
    explicit JetMatrix(int n, const Jet& fill = Jet(0.0)) : n_(n), data_(n * n, fill) {}

    int size() const noexcept { return n_; }
    Jet& operator()(int i, int j) { return data_[i * n_ + j]; }
    const Jet& operator()(int i, int j) const { return data_[i * n_ + j]; }

    /// Sets (i,j) and (j,i).
    void set_symmetric(int i, int j, const Jet& value);
    Eigen::MatrixXd values() const;

private:
    int n_ = 0;
    std::vector<Jet> data_;
};

JetMatrix operator*(const JetMatrix& a, const JetMatrix& b);

/// Reciprocal condition estimate; 0 when a pivot vanishes or is not finite.
double reciprocal_condition(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu);

/// Inverse of a jet matrix. The value part is factored with partial pivoting; the
/// higher coefficients follow from the terminating Neumann series.
/// Throws SingularMetric when the estimated condition number exceeds 1e12.
JetMatrix inverse(const JetMatrix& g);

enum class Chart { null_coords, flat_minus, flat_plus, generic };

/// A chart label and a map from a point to the component matrix. eval(point, order)
/// must return jets over point.size() variables, expanded at point, of the given order.
struct MetricField {
    Chart chart = Chart::generic;
    int dim = 0;
    std::function<JetMatrix(std::span<const double>, int)> eval;
};

/// Gamma^rho_{mu nu}, stored as [rho][mu][nu].
class Christoffel {
public:
    explicit Christoffel(int n) : n_(n), data_(n * n * n, Jet(0.0)) {}
    int size() const noexcept { return n_; }
    Jet& operator()(int r, int m, int k) { return data_[(r * n_ + m) * n_ + k]; }
    const Jet& operator()(int r, int m, int k) const { return data_[(r * n_ + m) * n_ + k]; }

private:
    int n_;
    std::vector<Jet> data_;
};

/// Real rank-4 array, stored as [a][b][c][d].
class Rank4 {
public:
    explicit Rank4(int n) : n_(n), data_(n * n * n * n, 0.0) {}
    int size() const noexcept { return n_; }
    double& operator()(int a, int b, int c, int d) { return data_[((a * n_ + b) * n_ + c) * n_ + d]; }
    double operator()(int a, int b, int c, int d) const {
        return data_[((a * n_ + b) * n_ + c) * n_ + d];
    }
    double max_abs() const;

private:
    int n_;
    std::vector<double> data_;
};

/// Christoffel symbols as jets of the given order; needs g to order + 1.
Christoffel christoffel_from(const JetMatrix& g, int order);
Christoffel christoffel_at(const MetricField& g, std::span<const double> point, int order = 0);

/// Fully lowered R_{rho sigma mu nu}.
Rank4 riemann_from(const JetMatrix& g);
Rank4 riemann_at(const MetricField& g, std::span<const double> point);

/// max |R_{rsmn} - K (g_rm g_sn - g_rn g_sm)|.
double constant_curvature_residual(const Rank4& riemann, const Eigen::MatrixXd& g, double K);
double constant_curvature_residual(const MetricField& g, std::span<const double> point, double K);

struct CurvatureReport {
    std::vector<double> point;
    double max_abs_riemann = 0.0;
    double constant_curvature_residual = 0.0;
    double K_used = 0.0;
};

CurvatureReport curvature_report(const MetricField& g, std::span<const double> point, double K);

struct Signature {
    int n_minus = 0;
    int n_zero = 0;
    int n_plus = 0;
    friend bool operator==(const Signature&, const Signature&) = default;
};

/// Eigenvalue sign counts; |lambda| <= 1e-10 max|lambda| counts as zero.
Signature signature_of(const Eigen::MatrixXd& m);

/// Explicit index operations.
Eigen::VectorXd lower_index(const Eigen::MatrixXd& g, const Eigen::VectorXd& vec);
Eigen::VectorXd raise_index(const Eigen::MatrixXd& g_inverse, const Eigen::VectorXd& covec);

/// -2 du dv + sum dz^2 in coordinates (u, v, z...).
MetricField flat_null_metric(int dim, Chart chart = Chart::null_coords);
/// (-2 du dv + sum dz^2) / Omega^2, Omega = 1 + Lambda/12 (|z|^2 - 2uv).
/// Constant curvature K = Lambda/3.
MetricField conformal_null_metric(double lambda, int dim, Chart chart = Chart::null_coords);

}  // namespace nullshell
