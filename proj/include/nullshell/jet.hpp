#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace nullshell {

inline constexpr int kMaxJetOrder = 6;
inline constexpr int kMaxJetVars = 8;

namespace detail {
struct MonomialTable;
}

/// Truncated multivariate Taylor polynomial around a point.
///
/// A Jet of order K in n variables stores every partial derivative of total
/// degree <= K. Internally the normalized coefficients c_a = (d^a f)/a! are kept
/// in graded order, so truncating to a lower order is a prefix. Arithmetic and
/// the elementary functions are closed at fixed order; mixing jets of different
/// order yields the lower one. A jet with zero variables acts as a constant.
class Jet {
public:
    Jet();
    Jet(double value);  // NOLINT: implicit constant promotion is the point

    static Jet constant(double value, int nvars, int order);
    static Jet variable(double value, int index, int nvars, int order);

    int nvars() const noexcept;
    int order() const noexcept { return order_; }
    double value() const noexcept { return coeffs_[0]; }

    /// Partial derivative with multiplicities per variable, e.g. {0,2,1} = d_1^2 d_2.
    double partial(std::span<const int> multiplicity) const;
    /// Partial derivative given as a list of variable indices, e.g. {1,1} = d_1 d_1.
    double d(std::initializer_list<int> variables) const;
    double d(int a) const { return d({a}); }
    double d(int a, int b) const { return d({a, b}); }

    /// d/dx_var, one order lower.
    Jet derivative(int var) const;
    /// Antiderivative in x_var vanishing at the expansion point, same order.
    Jet integral(int var) const;
    Jet truncated(int order) const;

    std::size_t size() const noexcept { return coeffs_.size(); }
    std::span<const double> coefficients() const noexcept { return coeffs_; }

    Jet operator-() const;
    Jet& operator+=(const Jet& other);
    Jet& operator-=(const Jet& other);
    Jet& operator*=(const Jet& other);
    Jet& operator/=(const Jet& other);
    Jet& operator+=(double c);
    Jet& operator-=(double c);
    Jet& operator*=(double c);
    Jet& operator/=(double c);

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator+(Jet a, double c) { return a += c; }
    friend Jet operator+(double c, Jet a) { return a += c; }
    friend Jet operator-(Jet a, double c) { return a -= c; }
    friend Jet operator-(double c, const Jet& a) { return -a + c; }
    friend Jet operator*(Jet a, double c) { return a *= c; }
    friend Jet operator*(double c, Jet a) { return a *= c; }
    friend Jet operator/(Jet a, double c) { return a /= c; }
    friend Jet operator/(double c, const Jet& a);

    /// f(x) for a univariate f given its normalized Taylor coefficients at x.value().
    friend Jet compose(const Jet& x, std::span<const double> taylor);
    /// f(args) where f is a jet in args.size() variables expanded at the values of args.
    friend Jet substitute(const Jet& f, std::span<const Jet> args);

private:
    Jet(const detail::MonomialTable* table, int order);
    void align(const Jet& other);

    const detail::MonomialTable* table_;
    int order_;
    std::vector<double> coeffs_;
};

Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sqrt(const Jet& x);
Jet pow(const Jet& x, double exponent);
Jet pow(const Jet& x, int exponent);
Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet sinh(const Jet& x);
Jet cosh(const Jet& x);
Jet tanh(const Jet& x);
Jet erf(const Jet& x);
Jet reciprocal(const Jet& x);

/// Seeds coordinates[i] as variable i of a jet over coordinates.size() variables.
std::vector<Jet> seed_variables(std::span<const double> coordinates, int order);

}  // namespace nullshell
