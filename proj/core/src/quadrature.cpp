#include "klshell/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <mutex>
#include <stdexcept>

namespace kl {

namespace {

// Golub-Welsch: nodes are eigenvalues of the symmetric tridiagonal Jacobi
// matrix, weights 2 * (first eigenvector component)^2.
GaussRule compute_rule(int n) {
    GaussRule rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.points[0] = 0.0;
        rule.weights[0] = 2.0;
        return rule;
    }
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        J(k, k - 1) = b;
        J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    for (int i = 0; i < n; ++i) {
        rule.points[i] = es.eigenvalues()[i];
        const double v = es.eigenvectors()(0, i);
        rule.weights[i] = 2.0 * v * v;
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_rule(int n) {
    if (n < 1 || n > 30) throw std::invalid_argument("gauss_rule: point count must be in [1, 30]");
    static std::array<GaussRule, 30> cache;
    static std::once_flag flags[30];
    std::call_once(flags[n - 1], [n] { cache[n - 1] = compute_rule(n); });
    return cache[n - 1];
}

std::vector<QuadPoint2D> tensor_rule(const GaussRule& rule, const Vec2& lo, const Vec2& hi) {
    std::vector<QuadPoint2D> pts;
    pts.reserve(static_cast<std::size_t>(rule.size()) * rule.size());
    for (int j = 0; j < rule.size(); ++j) {
        const auto [v, wv] = rule.mapped(j, lo[1], hi[1]);
        for (int i = 0; i < rule.size(); ++i) {
            const auto [u, wu] = rule.mapped(i, lo[0], hi[0]);
            pts.push_back({Vec2(u, v), wu * wv});
        }
    }
    return pts;
}

}  // namespace kl
