#pragma once

#include <string>

namespace nullshell {

enum class MollifierKind { poly_bump, tilted_bump };

std::string to_string(MollifierKind kind);
/// Accepts "poly_bump" and "tilted_bump"; throws std::invalid_argument otherwise.
MollifierKind mollifier_kind_from_string(const std::string& name);

/// Unit-mass density supported in [-1, 1] and its primitive. The scaled net is
/// rho_eps(x) = rho(x / eps) / eps with primitive theta_eps(x) = theta(x / eps).
struct Mollifier {
    MollifierKind kind = MollifierKind::poly_bump;

    double rho(double x) const;
    double theta(double x) const;
    double rho_eps(double x, double eps) const;
    double theta_eps(double x, double eps) const;
};

/// poly_bump: C (1 - x^2)^4, C = 315/256. tilted_bump: C (1 - x^2)^4 (1 + x/2).
Mollifier make_mollifier(MollifierKind kind);

}  // namespace nullshell
