#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nullshell/jet.hpp"

namespace nullshell {

// ---------------------------------------------------------------------------
// Expression language for jump functions.
//
// Identifiers: v, z1..zn, r, pi and the unary functions exp, log, cosh, sinh,
// tanh, erf, sqrt. z1 is the same coordinate as v; z2..zn are the spatial
// coordinates of the leaf and r = sqrt(z2^2 + ... + zn^2). Unary minus binds
// looser than ^, so -v^2 = -(v^2). Exponents must be constant.
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { number, variable, negate, add, sub, mul, div, pow, call };

    Kind kind = Kind::number;
    double number = 0.0;        // Kind::number
    std::string name;           // Kind::variable (v, zK, r, pi) or Kind::call
    std::vector<ExprPtr> args;  // operands
    std::size_t offset = 0;     // byte offset in the source text

    bool depends_on_v() const;
    bool is_constant() const;
};

/// Structural equality; numbers compare exactly, offsets are ignored.
bool operator==(const Expr& a, const Expr& b);

/// Parses text over the coordinates of a leaf with dim_n - 1 spatial directions.
ExprPtr parse_expression(const std::string& text, int dim_n);

/// Minimal-parenthesis rendering that reparses to an equal tree.
std::string to_string(const Expr& e);

/// Evaluates e with v and z (z[0] is z2) given as jets of a common shape.
Jet evaluate(const Expr& e, const Jet& v, std::span<const Jet> z);

// ---------------------------------------------------------------------------

/// Point (v, z2..zn) on the shell.
struct LeafPoint {
    double v = 0.0;
    std::vector<double> z;
};

struct PressureProfile {
    /// p(v, z); v and z are jets over the leaf variables.
    std::function<Jet(const Jet& v, std::span<const Jet> z)> p;
    /// beta(z) = dH/dv at the grid origin.
    std::function<Jet(std::span<const Jet> z)> beta;
    /// H at the grid origin.
    std::function<Jet(std::span<const Jet> z)> offset;
};

/// Uniform grid in v used by from_pressure: [lo, hi] with the given step.
struct VGrid {
    double lo = 0.0;
    double hi = 1.0;
    double step = 0.01;
};

/// The step function H(v, z) of a matching.
class JumpFunction {
public:
    enum class Family { expression, linear, wave, example, from_pressure };

    /// Leaf variables are ordered (v, z2, ..., zn).
    using Body = std::function<Jet(const Jet& v, std::span<const Jet> z)>;

    JumpFunction(int dim_n, Family family, Body body, std::map<std::string, double> params = {},
                 ExprPtr expression = nullptr, std::string description = {});

    int dim_n() const noexcept { return dim_n_; }
    Family family() const noexcept { return family_; }
    const std::map<std::string, double>& params() const noexcept { return params_; }
    /// The parsed tree for Family::expression and the profile of Family::wave.
    const ExprPtr& expression() const noexcept { return expression_; }
    const std::string& description() const noexcept { return description_; }

    /// H(v, z) for jet arguments of a common shape; z holds dim_n - 1 entries.
    Jet evaluate(const Jet& v, std::span<const Jet> z) const;
    /// Jet in the leaf variables (v, z2, ..., zn) at the given point.
    Jet jets(double v, std::span<const double> z, int order) const;
    double value(double v, std::span<const double> z) const;

private:
    int dim_n_;
    Family family_;
    Body body_;
    std::map<std::string, double> params_;
    ExprPtr expression_;
    std::string description_;
};

JumpFunction parse_jump_expression(const std::string& text, int dim_n);

struct LinearParams {
    double a = 1.0;
    std::vector<double> b;  // coefficients of z2..zn; missing entries are zero
    double c = 0.0;
};

struct WaveParams {
    double a = 1.0;
    std::string profile;  // expression in z2..zn (and r)
};

struct ExampleParams {
    double a = 4.0;
    double b = 2.0;
    double c = 1.0;
    double h0 = 1.1;
};

/// H = a v + b.z + c. Requires a > 0.
JumpFunction make_linear(const LinearParams& p, int dim_n);
/// H = a v + profile(z). Requires a > 0 and a v-independent profile.
JumpFunction make_wave(const WaveParams& p, int dim_n);
/// H = a v - b log cosh v - c tanh(r) e^{-v^2} - h0 r^2 erf(r)/4.
/// Requires b >= 2c >= 0, h0 >= c and a > b + c.
JumpFunction make_example(const ExampleParams& p, int dim_n);
/// Throws ConstraintViolation naming the first failed inequality.
void check_example_constraints(const ExampleParams& p);

/// Integrates w' = -p w, w(lo) = beta, H = offset + int w along the grid with a
/// fourth-order Runge-Kutta scheme carrying z-jets. Local v-derivatives come from
/// Picard iteration of the same equation at the evaluation point.
JumpFunction from_pressure(PressureProfile profile, const VGrid& grid, int dim_n);

struct AdmissibilityReport {
    double min_dvH = 0.0;
    LeafPoint argmin;
    std::size_t points = 0;
    bool pass = false;
};

AdmissibilityReport check_admissibility(const JumpFunction& H, std::span<const LeafPoint> grid);

/// d_v H at a point; throws NonPositiveDerivative unless strictly positive.
double require_admissible(const JumpFunction& H, double v, std::span<const double> z);

}  // namespace nullshell
