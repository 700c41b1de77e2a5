#pragma once

#include <vector>

#include "klshell/spline_space.hpp"
#include "klshell/types.hpp"

namespace kl {

/// Open spline curve in a patch parameter domain, degree <= 3. Used for trim
/// boundaries and interface preimages; orientation keeps the retained region
/// on the left of the travel direction.
class ParamCurve {
public:
    ParamCurve(SplineSpace space, std::vector<Vec2> control_points);

    static ParamCurve line(const Vec2& a, const Vec2& b);
    static ParamCurve quadratic(const Vec2& a, const Vec2& c, const Vec2& b);

    const SplineSpace& space() const { return space_; }
    const std::vector<Vec2>& control_points() const { return points_; }
    int degree() const { return space_.degree(0); }

    Vec2 point(double t) const;
    Vec2 derivative(double t, int order = 1) const;

    /// Interior parameters where the curve has a coordinate extremum or a
    /// reduced-continuity knot; splitting there yields coordinate-monotone
    /// pieces.
    std::vector<double> monotone_split_parameters() const;

    /// Roots of component(t) = c on [t0, t1], polished to |residual| < 1e-12.
    std::vector<double> axis_crossings(int component, double c, double t0 = 0.0, double t1 = 1.0) const;

    bool operator==(const ParamCurve& other) const = default;

private:
    SplineSpace space_;
    std::vector<Vec2> points_;
};

/// Shell mid-surface: discretization-independent geometry map into R^3.
class SurfaceMap {
public:
    SurfaceMap(SplineSpace space, std::vector<Vec3> control_points);

    const SplineSpace& space() const { return space_; }
    const std::vector<Vec3>& control_points() const { return points_; }

    /// Point and parametric derivatives up to `order` (<= 3), triangular
    /// layout of deriv_index().
    std::vector<Vec3> derivatives(const Vec2& uv, int order) const;
    Vec3 point(const Vec2& uv) const;

    /// Exact knot-insertion refinement of the geometric representation.
    SurfaceMap h_refined(const std::vector<std::vector<double>>& new_knots) const;

private:
    SplineSpace space_;
    std::vector<Vec3> points_;
};

/// Covariant/contravariant frame at a surface point with derivatives up to
/// the requested order (0, 1 or 2).
struct SurfaceFrame {
    Vec2 uv;
    Vec3 x;
    Vec3 a1, a2, a3;
    double jacobian = 0.0;   ///< |a1 x a2|
    Mat2 metric;             ///< a_{alpha beta}
    Mat2 metric_inv;         ///< a^{alpha beta}
    Vec3 acontra[2];         ///< a^alpha = a^{alpha gamma} a_gamma
    int order = 0;

    // order >= 1
    Vec3 da[2][2];           ///< a_{alpha,beta} = F_{,alpha beta} (symmetric)
    Vec3 da3[2];             ///< a3_{,alpha}
    double christoffel[2][2][2] = {};  ///< Gamma^gamma_{alpha beta}

    // order >= 2
    Vec3 dda[2][2][2];       ///< a_{alpha,beta gamma} = F third derivatives
    Vec3 dda3[2][2];         ///< a3_{,alpha beta}
};

/// Frame quantities at uv; requires map derivatives up to order k+1.
/// Throws on a degenerate parametrization (|a1 x a2| < 1e-14).
SurfaceFrame frame(const SurfaceMap& map, const Vec2& uv, int order = 0);

/// Cartesian-to-curvilinear transform: Q(i, beta) = e_i . a_beta for
/// beta = 0, 1 and Q(i, 2) = e_i . a3.
Mat3 cartesian_to_curvilinear(const SurfaceFrame& frame);

/// Trace data of a boundary or interface curve at parameter t: physical
/// point, unit tangent, outward in-plane unit normal (right of the travel
/// direction in parameter space) and the arc-length Jacobian |dx/dt|.
struct BoundaryTrace {
    double t = 0.0;
    Vec2 uv;
    Vec3 x;
    Vec3 tangent;       ///< unit
    Vec3 normal;        ///< unit, in span{a1, a2}, perpendicular to tangent
    Vec2 normal_contra; ///< n^alpha with n = n^alpha a_alpha
    double arc_jacobian = 0.0;
    SurfaceFrame frame;
};

BoundaryTrace boundary_trace(const SurfaceMap& map, const ParamCurve& curve, double t, int frame_order = 1);

}  // namespace kl
