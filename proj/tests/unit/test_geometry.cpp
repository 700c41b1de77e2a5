#include "doctest.h"

#include <Eigen/Geometry>

#include <cmath>
#include <random>

#include "klshell/geometry.hpp"

using namespace kl;

namespace {

SurfaceMap flat_plate() {
    // F(xi, eta) = (xi, eta, 0) as a biquadratic patch
    SplineSpace s(KnotVector::uniform_open(2, 1), KnotVector::uniform_open(2, 1));
    std::vector<Vec3> cp;
    const double g[3] = {0.0, 0.5, 1.0};
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) cp.emplace_back(g[i], g[j], 0.0);
    return SurfaceMap(std::move(s), std::move(cp));
}

// quarter cylinder of radius R: angle phi = xi * pi/2, axis y in [0, H]
SurfaceMap quarter_cylinder(double radius, double height) {
    const double w = std::sqrt(2.0) / 2.0;
    KnotVector arc = KnotVector::uniform_open(2, 1);
    KnotVector line = KnotVector::uniform_open(1, 1);
    std::vector<double> weights = {1, w, 1, 1, w, 1};
    SplineSpace s(arc, line, weights);
    std::vector<Vec3> cp = {
        {radius, 0, 0}, {radius, 0, radius}, {0, 0, radius},
        {radius, height, 0}, {radius, height, radius}, {0, height, radius}};
    return SurfaceMap(std::move(s), std::move(cp));
}

}  // namespace

TEST_SUITE_BEGIN("geometry");

TEST_CASE("flat plate frame is the Euclidean frame") {
    SurfaceMap map = flat_plate();
    const SurfaceFrame fr = frame(map, Vec2(0.3, 0.7), 2);
    CHECK((fr.a1 - Vec3(1, 0, 0)).norm() < 1e-14);
    CHECK((fr.a2 - Vec3(0, 1, 0)).norm() < 1e-14);
    CHECK((fr.a3 - Vec3(0, 0, 1)).norm() < 1e-14);
    CHECK((fr.metric - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(fr.jacobian == doctest::Approx(1.0));
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) CHECK(fr.da[a][b].norm() < 1e-13);
}

TEST_CASE("cylinder frame against the closed form") {
    const double R = 2.5, H = 3.0;
    SurfaceMap map = quarter_cylinder(R, H);
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> dist(0.01, 0.99);
    for (int q = 0; q < 20; ++q) {
        const Vec2 uv(dist(rng), dist(rng));
        const SurfaceFrame fr = frame(map, uv, 1);
        const Vec3 radial(fr.x[0], 0.0, fr.x[2]);
        CHECK(std::abs(radial.norm() - R) < 1e-12);
        CHECK(std::abs(fr.a3.norm() - 1.0) < 1e-13);
        // normal is radial (up to sign fixed by the parametrization)
        CHECK(std::abs(std::abs(fr.a3.dot(radial.normalized())) - 1.0) < 1e-12);
        // a2 is the axis direction with |a2| = H
        CHECK((fr.a2 - Vec3(0, H, 0)).norm() < 1e-12);
        // arc metric: |a1| = R * pi/2 for the arc-angle parametrization is
        // not exact for the rational map, but a1 must be tangent to the circle
        CHECK(std::abs(fr.a1.dot(radial)) < 1e-11);
    }
}

TEST_CASE("metric inverse identity and normal orthogonality") {
    SurfaceMap map = quarter_cylinder(1.0, 1.0);
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int q = 0; q < 20; ++q) {
        const SurfaceFrame fr = frame(map, Vec2(dist(rng), dist(rng)), 0);
        CHECK(((fr.metric_inv * fr.metric) - Mat2::Identity()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::abs(fr.acontra[0].dot(fr.a1) - 1.0) < 1e-12);
        CHECK(std::abs(fr.acontra[0].dot(fr.a2)) < 1e-12);
        CHECK(std::abs(fr.acontra[1].dot(fr.a2) - 1.0) < 1e-12);
        CHECK(std::abs(fr.a3.dot(fr.a1)) < 1e-12);
        CHECK(std::abs(fr.a3.dot(fr.a2)) < 1e-12);
        CHECK(std::abs(fr.metric(0, 1) - fr.metric(1, 0)) == 0.0);
    }
}

TEST_CASE("normal derivatives match finite differences") {
    SurfaceMap map = quarter_cylinder(1.7, 2.2);
    const double h = 1e-6;
    for (const Vec2& uv : {Vec2(0.3, 0.4), Vec2(0.62, 0.15), Vec2(0.5, 0.9)}) {
        const SurfaceFrame fr = frame(map, uv, 2);
        for (int a = 0; a < 2; ++a) {
            Vec2 up = uv, um = uv;
            up[a] += h;
            um[a] -= h;
            const SurfaceFrame fp = frame(map, up, 1);
            const SurfaceFrame fm = frame(map, um, 1);
            const Vec3 fd = (fp.a3 - fm.a3) / (2 * h);
            CHECK((fd - fr.da3[a]).norm() < 1e-6 * std::max(1.0, fr.da3[a].norm()));
            for (int b = 0; b < 2; ++b) {
                const Vec3 fd2 = (fp.da3[b] - fm.da3[b]) / (2 * h);
                CHECK((fd2 - fr.dda3[b][a]).norm() < 1e-5 * std::max(1.0, fr.dda3[b][a].norm()));
            }
        }
    }
}

TEST_CASE("cartesian to curvilinear transform") {
    SUBCASE("flat plate third column is e3") {
        const SurfaceFrame fr = frame(flat_plate(), Vec2(0.5, 0.5), 0);
        const Mat3 q = cartesian_to_curvilinear(fr);
        CHECK((q.col(2) - Vec3(0, 0, 1)).norm() < 1e-14);
        CHECK(q.col(2).squaredNorm() == doctest::Approx(1.0));
    }
    SUBCASE("rigid rotation rotates the columns") {
        SurfaceMap base = flat_plate();
        const double ang = 0.37;
        Mat3 rot;
        rot = Eigen::AngleAxisd(ang, Vec3(1, 2, 0.5).normalized()).toRotationMatrix();
        std::vector<Vec3> cp = base.control_points();
        for (Vec3& p : cp) p = rot * p;
        SurfaceMap rotated(base.space(), cp);
        const Vec2 uv(0.4, 0.6);
        const Mat3 q0 = cartesian_to_curvilinear(frame(base, uv, 0));
        const Mat3 q1 = cartesian_to_curvilinear(frame(rotated, uv, 0));
        CHECK((q1 - rot * q0).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("boundary trace on a flat plate edge") {
    SurfaceMap map = flat_plate();
    // bottom edge traversed in +x (counterclockwise boundary): outward is -y
    ParamCurve edge = ParamCurve::line(Vec2(0, 0), Vec2(1, 0));
    const BoundaryTrace tr = boundary_trace(map, edge, 0.5);
    CHECK((tr.normal - Vec3(0, -1, 0)).norm() < 1e-14);
    CHECK((tr.tangent - Vec3(1, 0, 0)).norm() < 1e-14);
    CHECK(tr.arc_jacobian == doctest::Approx(1.0));
    CHECK(std::abs(tr.normal.dot(tr.tangent)) < 1e-14);
}

TEST_CASE("arc-length jacobian of a straight segment of length L") {
    SplineSpace s(KnotVector::uniform_open(2, 1), KnotVector::uniform_open(2, 1));
    std::vector<Vec3> cp;
    const double g[3] = {0.0, 0.5, 1.0};
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) cp.emplace_back(3.0 * g[i], 2.0 * g[j], 0.0);
    SurfaceMap map(std::move(s), std::move(cp));  // 3 x 2 rectangle
    ParamCurve seg = ParamCurve::line(Vec2(0.2, 0.3), Vec2(0.8, 0.3));
    // physical length: 0.6 * 3 = 1.8 with unit parameter
    double len = 0.0;
    const int n = 4;
    for (int i = 0; i < n; ++i) {
        const BoundaryTrace tr = boundary_trace(map, seg, (i + 0.5) / n);
        len += tr.arc_jacobian / n;
    }
    CHECK(len == doctest::Approx(1.8).epsilon(1e-13));
}

namespace {
double adaptive_arc_length(const SurfaceMap& map, const ParamCurve& c, double t0, double t1, int depth) {
    const Vec3 a = map.point(c.point(t0));
    const Vec3 b = map.point(c.point(t1));
    const Vec3 m = map.point(c.point(0.5 * (t0 + t1)));
    const double chord = (b - a).norm();
    const double via = (m - a).norm() + (b - m).norm();
    if (depth > 24 || via - chord < 1e-13 * (1.0 + via))
        return via;
    return adaptive_arc_length(map, c, t0, 0.5 * (t0 + t1), depth + 1) +
           adaptive_arc_length(map, c, 0.5 * (t0 + t1), t1, depth + 1);
}
}  // namespace

TEST_CASE("interface quadrature reproduces the arc length of a curved interface") {
    SurfaceMap map = quarter_cylinder(1.3, 2.0);
    ParamCurve curve = ParamCurve::quadratic(Vec2(0.2, 0.0), Vec2(0.55, 0.5), Vec2(0.4, 1.0));
    const double oracle = adaptive_arc_length(map, curve, 0.0, 1.0, 0);
    // 12 segments x 6-point Gauss on the smooth integrand
    double quad = 0.0;
    const int segs = 12, pts = 6;
    const double gp[6] = {-0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
                          0.2386191860831969, 0.6612093864662645, 0.9324695142031521};
    const double gw[6] = {0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
                          0.4679139345726910, 0.3607615730481386, 0.1713244923791704};
    for (int s = 0; s < segs; ++s) {
        const double a = static_cast<double>(s) / segs, b = static_cast<double>(s + 1) / segs;
        for (int i = 0; i < pts; ++i) {
            const double t = 0.5 * (a + b) + 0.5 * (b - a) * gp[i];
            quad += 0.5 * (b - a) * gw[i] * boundary_trace(map, curve, t).arc_jacobian;
        }
    }
    CHECK(std::abs(quad - oracle) < 1e-10 * std::max(1.0, oracle));
}

TEST_CASE("geometry refit after knot insertion is exact") {
    SurfaceMap map = quarter_cylinder(2.0, 1.5);
    SurfaceMap fine = map.h_refined({{0.2, 0.5, 0.5, 0.8}, {0.33, 0.66}});
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int q = 0; q < 50; ++q) {
        const Vec2 uv(dist(rng), dist(rng));
        CHECK((map.point(uv) - fine.point(uv)).norm() < 1e-13);
    }
}

TEST_CASE("degenerate parametrization is caught") {
    SplineSpace s(KnotVector::uniform_open(1, 1), KnotVector::uniform_open(1, 1));
    std::vector<Vec3> cp = {{0, 0, 0}, {1, 0, 0}, {0, 0, 0}, {1, 0, 0}};  // collapsed in eta
    SurfaceMap map(std::move(s), std::move(cp));
    CHECK_THROWS(frame(map, Vec2(0.5, 0.5), 0));
}

TEST_SUITE_END();
