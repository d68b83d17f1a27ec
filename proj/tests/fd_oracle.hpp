#pragma once

// Central finite-difference oracle, fourth order accurate, for test use only.

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace nullshell::testing {

struct Stencil {
    std::vector<int> offsets;
    std::vector<double> weights;  // scaled by 1/h^m at use
};

inline const Stencil& stencil(int m) {
    static const Stencil s[5] = {
        {{0}, {1.0}},
        {{-2, -1, 0, 1, 2}, {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12}},
        {{-2, -1, 0, 1, 2}, {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12}},
        {{-3, -2, -1, 0, 1, 2, 3}, {1.0 / 8, -1.0, 13.0 / 8, 0.0, -13.0 / 8, 1.0, -1.0 / 8}},
        {{-3, -2, -1, 0, 1, 2, 3}, {-1.0 / 6, 2.0, -13.0 / 2, 28.0 / 3, -13.0 / 2, 2.0, -1.0 / 6}},
    };
    return s[m];
}

inline double default_step(int total_order) {
    static const double h[5] = {0.0, 2e-3, 1e-2, 2e-2, 3e-2};
    return h[total_order];
}

/// Mixed partial with the given multiplicities via tensor-product stencils.
inline double fd_partial(const std::function<double(std::span<const double>)>& f,
                         std::span<const double> x, std::span<const int> mult, double h = 0.0) {
    int total = 0;
    for (int m : mult) total += m;
    if (h <= 0.0) h = default_step(total);
    const std::size_t n = x.size();
    std::vector<double> point(x.begin(), x.end());
    std::function<double(std::size_t)> recurse = [&](std::size_t var) -> double {
        if (var == n) return f(point);
        const Stencil& s = stencil(mult[var]);
        double acc = 0.0;
        for (std::size_t k = 0; k < s.offsets.size(); ++k) {
            if (s.weights[k] == 0.0) continue;
            point[var] = x[var] + s.offsets[k] * h;
            acc += s.weights[k] * recurse(var + 1);
        }
        point[var] = x[var];
        return acc / std::pow(h, mult[var]);
    };
    return recurse(0);
}

/// Richardson step-halving on fd_partial, cancelling the h^4 error term.
inline double fd_partial_refined(const std::function<double(std::span<const double>)>& f,
                                 std::span<const double> x, std::span<const int> mult) {
    int total = 0;
    for (int m : mult) total += m;
    if (total == 0) return f(x);
    const double h = default_step(total);
    return (16.0 * fd_partial(f, x, mult, h / 2) - fd_partial(f, x, mult, h)) / 15.0;
}

/// Every multi-index over n variables with total degree <= order.
inline std::vector<std::vector<int>> multi_indices(int n, int order) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(n, 0);
    std::function<void(int, int)> rec = [&](int var, int left) {
        if (var == n) {
            out.push_back(cur);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            cur[var] = k;
            rec(var + 1, left - k);
        }
        cur[var] = 0;
    };
    rec(0, order);
    return out;
}

}  // namespace nullshell::testing
