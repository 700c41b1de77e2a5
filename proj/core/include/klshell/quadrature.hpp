#pragma once

#include <vector>

#include "klshell/types.hpp"

namespace kl {

/// Gauss-Legendre rule on the reference interval [-1, 1]; exact for
/// polynomials of degree 2n-1.
struct GaussRule {
    std::vector<double> points;
    std::vector<double> weights;

    int size() const { return static_cast<int>(points.size()); }

    /// Node/weight pair mapped to [a, b].
    std::pair<double, double> mapped(int i, double a, double b) const {
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        return {mid + half * points[i], half * weights[i]};
    }
};

/// Rule with n points, 1 <= n <= 30.
const GaussRule& gauss_rule(int n);

/// Tensorized sampling helper over a parametric rectangle.
struct QuadPoint2D {
    Vec2 uv;
    double weight;
};
std::vector<QuadPoint2D> tensor_rule(const GaussRule& rule, const Vec2& lo, const Vec2& hi);

}  // namespace kl
