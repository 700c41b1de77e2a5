#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/LU>

namespace kl {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

/// Index of the parametric derivative d^{a+b}/(dxi^a deta^b) in the
/// triangular layout ordered by total order: (0,0), (1,0), (0,1), (2,0), ...
constexpr int deriv_index(int a, int b) {
    const int o = a + b;
    return o * (o + 1) / 2 + b;
}

/// Number of derivative slots for total order <= k in two variables.
constexpr int num_derivs_2d(int k) { return (k + 1) * (k + 2) / 2; }

}  // namespace kl
