#include "nullshell/mollifier.hpp"

#include <stdexcept>

#include "nullshell/errors.hpp"

namespace nullshell {

namespace {

constexpr double kC = 315.0 / 256.0;

// Primitive of (1 - y^2)^4 vanishing at 0.
double bump_primitive(double y) {
    const double y2 = y * y;
    return y * (1.0 + y2 * (-4.0 / 3.0 + y2 * (6.0 / 5.0 + y2 * (-4.0 / 7.0 + y2 / 9.0))));
}

double check_eps(double eps) {
    if (!(eps > 0.0)) throw DomainError("mollifier scale must be positive");
    return eps;
}

}  // namespace

std::string to_string(MollifierKind kind) {
    return kind == MollifierKind::poly_bump ? "poly_bump" : "tilted_bump";
}

MollifierKind mollifier_kind_from_string(const std::string& name) {
    if (name == "poly_bump") return MollifierKind::poly_bump;
    if (name == "tilted_bump") return MollifierKind::tilted_bump;
    throw std::invalid_argument("unknown mollifier '" + name + "'");
}

double Mollifier::rho(double x) const {
    if (x <= -1.0 || x >= 1.0) return 0.0;
    const double w = 1.0 - x * x;
    const double base = kC * (w * w) * (w * w);
    return kind == MollifierKind::poly_bump ? base : base * (1.0 + 0.5 * x);
}

double Mollifier::theta(double x) const {
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double poly = kC * (bump_primitive(x) + 128.0 / 315.0);
    if (kind == MollifierKind::poly_bump) return poly;
    // Odd tilt: the primitive of C x (1 - x^2)^4 / 2 vanishing at -1.
    const double w = 1.0 - x * x;
    return poly - kC / 20.0 * (w * w) * (w * w) * w;
}

double Mollifier::rho_eps(double x, double eps) const { return rho(x / check_eps(eps)) / eps; }

double Mollifier::theta_eps(double x, double eps) const { return theta(x / check_eps(eps)); }

Mollifier make_mollifier(MollifierKind kind) { return Mollifier{kind}; }

}  // namespace nullshell
