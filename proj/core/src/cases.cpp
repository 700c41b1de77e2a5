#include "klshell/cases.hpp"

#include <cmath>
#include <stdexcept>

namespace kl {

ExactSolution physical_solution(PhysicalField field) {
    return [field](int, const Vec2&, const SurfaceFrame& fr, Vec3 out[6]) {
        Vec3 u;
        Mat3 grad;
        Mat3 hess[3];
        field(fr.x, u, grad, hess);
        out[deriv_index(0, 0)] = u;
        const Vec3 xa[2] = {fr.a1, fr.a2};
        out[deriv_index(1, 0)] = grad * xa[0];
        out[deriv_index(0, 1)] = grad * xa[1];
        auto second = [&](int a, int b) {
            Vec3 v;
            for (int i = 0; i < 3; ++i)
                v[i] = xa[a].dot(hess[i] * xa[b]) + grad.row(i).dot(fr.da[a][b]);
            return v;
        };
        out[deriv_index(2, 0)] = second(0, 0);
        out[deriv_index(1, 1)] = second(0, 1);
        out[deriv_index(0, 2)] = second(1, 1);
    };
}

namespace {

constexpr double kShift = 0.014142135623730951;  // sqrt(2)/100

// base mesh with the initial interior knots shifted by sqrt(2)/100, then
// dyadically refined; the shift happens once so levels stay nested
KnotVector shifted_uniform(int degree, int base_elements, bool shift, int level) {
    std::vector<double> k;
    for (int i = 0; i <= degree; ++i) k.push_back(0.0);
    for (int i = 1; i < base_elements; ++i) {
        double v = static_cast<double>(i) / base_elements;
        if (shift) v += kShift;
        k.push_back(v);
    }
    for (int i = 0; i <= degree; ++i) k.push_back(1.0);
    KnotVector kv(std::move(k), degree);
    for (int l = 0; l < level; ++l) {
        std::vector<double> mids;
        const auto bp = kv.breakpoints();
        for (std::size_t i = 0; i + 1 < bp.size(); ++i) mids.push_back(0.5 * (bp[i] + bp[i + 1]));
        kv = insert_knots(kv, mids).first;
    }
    return kv;
}

SplineSpace shifted_space(int degree, int nx, int ny, bool shift, int level) {
    return SplineSpace(shifted_uniform(degree, nx, shift, level), shifted_uniform(degree, ny, shift, level));
}

// biquadratic Coons patch from its four quadratic boundary edges (3 control
// points each, shared corners)
SurfaceMap coons_quadratic(const Vec3 south[3], const Vec3 north[3], const Vec3 west[3],
                           const Vec3 east[3]) {
    std::vector<Vec3> cp(9);
    auto at = [&](int i, int j) -> Vec3& { return cp[j * 3 + i]; };
    at(0, 0) = south[0];
    at(1, 0) = south[1];
    at(2, 0) = south[2];
    at(0, 2) = north[0];
    at(1, 2) = north[1];
    at(2, 2) = north[2];
    at(0, 1) = west[1];
    at(2, 1) = east[1];
    at(1, 1) = 0.5 * (south[1] + north[1] + west[1] + east[1]) -
               0.25 * (south[0] + south[2] + north[0] + north[2]);
    SplineSpace s(KnotVector::uniform_open(2, 1), KnotVector::uniform_open(2, 1));
    return SurfaceMap(std::move(s), std::move(cp));
}

PhysicalField sine_field(bool transverse_only) {
    return [transverse_only](const Vec3& x, Vec3& u, Mat3& grad, Mat3 hess[3]) {
        const double pi = M_PI;
        const double s = std::sin(pi * x[0]) * std::sin(pi * x[1]);
        const double dx = pi * std::cos(pi * x[0]) * std::sin(pi * x[1]);
        const double dy = pi * std::sin(pi * x[0]) * std::cos(pi * x[1]);
        const double dxx = -pi * pi * s;
        const double dyy = -pi * pi * s;
        const double dxy = pi * pi * std::cos(pi * x[0]) * std::cos(pi * x[1]);
        grad.setZero();
        for (int i = 0; i < 3; ++i) hess[i].setZero();
        const int c0 = transverse_only ? 2 : 0;
        for (int c = c0; c < 3; ++c) {
            u[c] = s;
            grad(c, 0) = dx;
            grad(c, 1) = dy;
            hess[c](0, 0) = dxx;
            hess[c](1, 1) = dyy;
            hess[c](0, 1) = hess[c](1, 0) = dxy;
        }
        if (transverse_only) {
            u[0] = u[1] = 0.0;
        }
    };
}

std::vector<DirichletEdge> zero_boundary(int patches) {
    std::vector<DirichletEdge> bcs;
    for (int p = 0; p < patches; ++p)
        for (PatchEdge e : {PatchEdge::UMin, PatchEdge::UMax, PatchEdge::VMin, PatchEdge::VMax})
            bcs.push_back({p, e, 7, false, nullptr});
    return bcs;
}

// ---------------------------------------------------------------- four-patch

CaseLevel build_four_patch(int level, int degree, double thickness) {
    const int n = 4;
    const Material mat = Material::isotropic(1e6, 0.3, thickness);
    const double d = 0.15;

    // shared edge curves of the 2x2 layout on [0,2]^2, all quadratic
    const Vec3 cross(1, 1, 0);
    const Vec3 vlo[3] = {{1, 0, 0}, {1 + d, 0.5, 0}, cross};      // SW | SE
    const Vec3 hlo[3] = {{0, 1, 0}, {0.5, 1 - d, 0}, cross};      // SW | NW
    const Vec3 vhi_c[3] = {cross, {1 - d, 1.5, 0}, {1, 2, 0}};    // NW | NE
    const Vec3 hhi_c[3] = {cross, {1.5, 1 + d, 0}, {2, 1, 0}};    // SE | NE

    auto straight = [](const Vec3& a, const Vec3& b) {
        return std::array<Vec3, 3>{a, 0.5 * (a + b), b};
    };

    const auto s00 = straight({0, 0, 0}, {1, 0, 0});
    const auto s01 = straight({1, 0, 0}, {2, 0, 0});
    const auto w0 = straight({0, 0, 0}, {0, 1, 0});
    const auto w1 = straight({0, 1, 0}, {0, 2, 0});
    const auto e0 = straight({2, 0, 0}, {2, 1, 0});
    const auto e1 = straight({2, 1, 0}, {2, 2, 0});
    const auto n10 = straight({0, 2, 0}, {1, 2, 0});
    const auto n11 = straight({1, 2, 0}, {2, 2, 0});

    std::vector<Patch> patches;
    // SW: south s00, north hlo, west w0, east vlo
    patches.emplace_back(coons_quadratic(s00.data(), hlo, w0.data(), vlo),
                         shifted_space(degree, n, n, true, level), mat);
    // SE: south s01, north hhi_c, west vlo, east e0
    patches.emplace_back(coons_quadratic(s01.data(), hhi_c, vlo, e0.data()),
                         shifted_space(degree, n, n, false, level), mat);
    // NW: south hlo, north n10, west w1, east vhi_c
    patches.emplace_back(coons_quadratic(hlo, n10.data(), w1.data(), vhi_c),
                         shifted_space(degree, n, n, false, level), mat);
    // NE: south hhi_c, north n11, west vhi_c, east e1
    patches.emplace_back(coons_quadratic(hhi_c, n11.data(), vhi_c, e1.data()),
                         shifted_space(degree, n, n, true, level), mat);

    CaseLevel lvl{PatchSet(std::move(patches)), {}, {}, {}, {}, {}, {}};

    auto edge = [](const Vec2& a, const Vec2& b) { return ParamCurve::line(a, b); };
    // SW east <-> SE west
    lvl.model.interfaces.push_back({0, 1, edge(Vec2(1, 0), Vec2(1, 1)), edge(Vec2(0, 0), Vec2(0, 1)), -1});
    // NW east <-> NE west
    lvl.model.interfaces.push_back({2, 3, edge(Vec2(1, 0), Vec2(1, 1)), edge(Vec2(0, 0), Vec2(0, 1)), -1});
    // SW north <-> NW south
    lvl.model.interfaces.push_back({0, 2, edge(Vec2(0, 1), Vec2(1, 1)), edge(Vec2(0, 0), Vec2(1, 0)), -1});
    // SE north <-> NE south
    lvl.model.interfaces.push_back({1, 3, edge(Vec2(0, 1), Vec2(1, 1)), edge(Vec2(0, 0), Vec2(1, 0)), -1});

    CrossPointDef cp;
    cp.incidents = {{0, Vec2(1, 1)}, {1, Vec2(0, 1)}, {2, Vec2(1, 0)}, {3, Vec2(0, 0)}};
    lvl.model.cross_points.push_back(cp);

    lvl.exact = physical_solution(sine_field(false));
    lvl.loads.manufactured = lvl.exact;
    // outer edges only; the shared edges are coupling interfaces
    lvl.bcs = {{0, PatchEdge::VMin, 7, false, nullptr}, {0, PatchEdge::UMin, 7, false, nullptr},
               {1, PatchEdge::VMin, 7, false, nullptr}, {1, PatchEdge::UMax, 7, false, nullptr},
               {2, PatchEdge::VMax, 7, false, nullptr}, {2, PatchEdge::UMin, 7, false, nullptr},
               {3, PatchEdge::VMax, 7, false, nullptr}, {3, PatchEdge::UMax, 7, false, nullptr}};
    return lvl;
}

// --------------------------------------------------------------- scordelis-lo

struct ArcData {
    Vec2 p0, p1, p2;  // (y, z) control points
    double w1 = 1.0;
};

ArcData arc_segment(double radius, double phi0, double phi1) {
    ArcData a;
    const double mid = 0.5 * (phi0 + phi1);
    const double half = 0.5 * (phi1 - phi0);
    a.p0 = radius * Vec2(std::sin(phi0), std::cos(phi0));
    a.p2 = radius * Vec2(std::sin(phi1), std::cos(phi1));
    a.p1 = (radius / std::cos(half)) * Vec2(std::sin(mid), std::cos(mid));
    a.w1 = std::cos(half);
    return a;
}

SurfaceMap cylinder_panel(double x0, double x1, double radius, double phi0, double phi1) {
    // xi axial (degree 1), eta circumferential (degree 2, rational)
    const ArcData arc = arc_segment(radius, phi0, phi1);
    KnotVector kx = KnotVector::uniform_open(1, 1);
    KnotVector ke = KnotVector::uniform_open(2, 1);
    std::vector<double> w = {1, 1, arc.w1, arc.w1, 1, 1};
    SplineSpace s(kx, ke, w);
    std::vector<Vec3> cp = {
        {x0, arc.p0[0], arc.p0[1]}, {x1, arc.p0[0], arc.p0[1]},
        {x0, arc.p1[0], arc.p1[1]}, {x1, arc.p1[0], arc.p1[1]},
        {x0, arc.p2[0], arc.p2[1]}, {x1, arc.p2[0], arc.p2[1]}};
    return SurfaceMap(std::move(s), std::move(cp));
}

CaseLevel build_scordelis(int level, int degree, double thickness, double load) {
    const double radius = 25.0, length = 50.0;
    const double phi_max = 40.0 * M_PI / 180.0;
    const Material mat = Material::isotropic(4.32e8, 0.0, thickness);
    const int n = 4;

    // 3 axial columns x 2 circumferential rows, index p = row * 3 + col
    const double xs[4] = {0.0, length / 3, 2 * length / 3, length};
    const double phis[3] = {-phi_max, 0.0, phi_max};

    std::vector<Patch> patches;
    for (int row = 0; row < 2; ++row)
        for (int col = 0; col < 3; ++col) {
            const bool shift = ((row * 3 + col) % 2) == 1;
            patches.emplace_back(cylinder_panel(xs[col], xs[col + 1], radius, phis[row], phis[row + 1]),
                                 shifted_space(degree, n, n, shift, level), mat);
        }
    CaseLevel lvl{PatchSet(std::move(patches)), {}, {}, {}, {}, {}, {}};

    auto edge = [](const Vec2& a, const Vec2& b) { return ParamCurve::line(a, b); };
    // axial interfaces between columns
    for (int row = 0; row < 2; ++row)
        for (int col = 0; col < 2; ++col)
            lvl.model.interfaces.push_back({row * 3 + col, row * 3 + col + 1,
                                            edge(Vec2(1, 0), Vec2(1, 1)), edge(Vec2(0, 0), Vec2(0, 1)), -1});
    // circumferential interfaces between rows
    for (int col = 0; col < 3; ++col)
        lvl.model.interfaces.push_back({col, 3 + col, edge(Vec2(0, 1), Vec2(1, 1)),
                                        edge(Vec2(0, 0), Vec2(1, 0)), -1});
    // the two interior vertices where four patches meet
    for (int col = 0; col < 2; ++col) {
        CrossPointDef cp;
        cp.incidents = {{col, Vec2(1, 1)}, {col + 1, Vec2(0, 1)}, {3 + col, Vec2(1, 0)},
                        {3 + col + 1, Vec2(0, 0)}};
        lvl.model.cross_points.push_back(cp);
    }

    lvl.loads.area_force = [load](const Vec3&) { return Vec3(0, 0, -load); };
    // rigid diaphragms: u_y = u_z = 0 at both axial ends; the diaphragms
    // leave the axial translation free, so one u_x dof pins it
    for (int row = 0; row < 2; ++row) {
        lvl.bcs.push_back({row * 3 + 0, PatchEdge::UMin, 6, false, nullptr});
        lvl.bcs.push_back({row * 3 + 2, PatchEdge::UMax, 6, false, nullptr});
    }
    lvl.pin_dofs.push_back({0, Vec2(0, 0), 0});

    lvl.qois = [](const PatchSet& ps, const Eigen::VectorXd& coeffs) {
        // free-edge midpoint: middle column, top row, eta = 1
        const Vec3 u = ps.displacement(4, coeffs, Vec2(0.5, 1.0));
        return std::vector<std::pair<std::string, double>>{
            {"uz", u[2]}, {"uz_normalized", u[2] / -32.01045}};
    };
    return lvl;
}

// ------------------------------------------------------------------- l-beam

CaseLevel build_lbeam(int level, int degree, double thickness, double length, double leg) {
    const Material mat = Material::isotropic(1e7, 0.3, thickness);
    const int nx = 8;
    const int ny = 4;

    SplineSpace lin(KnotVector::uniform_open(1, 1), KnotVector::uniform_open(1, 1));
    std::vector<Vec3> flange = {{0, 0, 0}, {length, 0, 0}, {0, leg, 0}, {length, leg, 0}};
    std::vector<Vec3> web = {{0, 0, 0}, {length, 0, 0}, {0, 0, leg}, {length, 0, leg}};

    std::vector<Patch> patches;
    patches.emplace_back(
        SurfaceMap(lin, flange),
        SplineSpace(shifted_uniform(degree, nx, false, level), shifted_uniform(degree, ny, false, level)),
        mat);
    patches.emplace_back(
        SurfaceMap(lin, web),
        SplineSpace(shifted_uniform(degree, nx, true, level), shifted_uniform(degree, ny, false, level)),
        mat);
    CaseLevel lvl{PatchSet(std::move(patches)), {}, {}, {}, {}, {}, {}};

    lvl.model.interfaces.push_back({0, 1, ParamCurve::line(Vec2(0, 0), Vec2(1, 0)),
                                    ParamCurve::line(Vec2(0, 0), Vec2(1, 0)), -1});
    // clamp at x = 0
    lvl.bcs.push_back({0, PatchEdge::UMin, 7, true, nullptr});
    lvl.bcs.push_back({1, PatchEdge::UMin, 7, true, nullptr});
    lvl.loads.point_loads.push_back({0, Vec2(1, 0), Vec3(0, 0, -10.0)});

    lvl.qois = [](const PatchSet& ps, const Eigen::VectorXd& coeffs) {
        const Vec2 corner(1, 0);
        // linearized deformed normals of both patches at the free corner
        auto deformed_normal = [&](int p) {
            const SurfaceFrame fr = frame(ps[p].geometry, corner, 0);
            const std::vector<Vec3> du = ps.displacement_derivatives(p, coeffs, corner, 1);
            const Vec3 d1 = du[deriv_index(1, 0)], d2 = du[deriv_index(0, 1)];
            const Vec3 da3 = -(fr.a3.dot(d1)) * fr.acontra[0] - (fr.a3.dot(d2)) * fr.acontra[1];
            return (fr.a3 + da3).normalized();
        };
        const double angle = std::acos(std::clamp(deformed_normal(0).dot(deformed_normal(1)), -1.0, 1.0));
        const Vec3 u = ps.displacement(0, coeffs, corner);
        return std::vector<std::pair<std::string, double>>{
            {"tip_uz", u[2]}, {"angle_error", std::abs(angle - M_PI / 2)}};
    };
    return lvl;
}

// ------------------------------------------------- trimmed planar multi-patch

SurfaceMap planar_rectangle(double lx, double ly) {
    SplineSpace s(KnotVector::uniform_open(1, 1), KnotVector::uniform_open(1, 1));
    std::vector<Vec3> cp = {{0, 0, 0}, {lx, 0, 0}, {0, ly, 0}, {lx, ly, 0}};
    return SurfaceMap(std::move(s), std::move(cp));
}

CaseLevel build_three_patch(int level, int degree, double thickness) {
    const Material mat = Material::isotropic(1e6, 0.3, thickness);
    const int nx = 8;
    const int ny = 4;

    // gentle quadratic interfaces near xi = 1/3 and 2/3 of the unit
    // parameter domain (x = 2/3 and 4/3 physically)
    const ParamCurve c1 = ParamCurve::quadratic(Vec2(0.36, 0), Vec2(0.28, 0.5), Vec2(0.30, 1));
    const ParamCurve c2 = ParamCurve::quadratic(Vec2(0.64, 0), Vec2(0.72, 0.5), Vec2(0.70, 1));

    std::vector<Patch> patches;
    patches.emplace_back(planar_rectangle(2.0, 1.0), shifted_space(degree, nx, ny, false, level),
                         std::vector<TrimCurve>{{c1, true}}, mat);
    patches.emplace_back(planar_rectangle(2.0, 1.0), shifted_space(degree, nx, ny, true, level),
                         std::vector<TrimCurve>{{c1, false}, {c2, true}}, mat);
    patches.emplace_back(planar_rectangle(2.0, 1.0), shifted_space(degree, nx, ny, false, level),
                         std::vector<TrimCurve>{{c2, false}}, mat);
    CaseLevel lvl{PatchSet(std::move(patches)), {}, {}, {}, {}, {}, {}};

    lvl.model.interfaces.push_back({0, 1, c1, c1, -1});
    lvl.model.interfaces.push_back({1, 2, c2, c2, -1});

    lvl.exact = physical_solution(sine_field(true));
    lvl.loads.manufactured = lvl.exact;
    lvl.bcs = zero_boundary(3);
    return lvl;
}

// ------------------------------------------------------------------- astroid

SurfaceMap astroid_geometry() {
    SplineSpace s(KnotVector::uniform_open(2, 1), KnotVector::uniform_open(2, 1));
    std::vector<Vec3> cp = {
        {0, 0, 0},       {0.5, 1.0 / 3, 0}, {1, 0, 0},
        {1.0 / 3, 0.5, 0}, {0.5, 0.5, 0},   {2.0 / 3, 0.5, 0},
        {0, 1, 0},       {0.5, 2.0 / 3, 0}, {1, 1, 0}};
    return SurfaceMap(std::move(s), std::move(cp));
}

// parametric manufactured field of the astroid case
void astroid_exact(const Vec2& uv, Vec3 out[6]) {
    const double x = uv[0], e = uv[1];
    const double pi = M_PI;

    // u_x = f(x) g(e),  f = x^2 (x-1)^2,  g = (1/2 - e) e (1 - e)
    const double f = x * x * (x - 1) * (x - 1);
    const double fd = 2 * x * (x - 1) * (2 * x - 1);
    const double fdd = 12 * x * x - 12 * x + 2;
    const double g = (0.5 - e) * e * (1 - e);
    const double gd = 0.5 - 3 * e + 3 * e * e;
    const double gdd = -3 + 6 * e;

    // u_y mirrors it with the roles swapped
    const double fy = e * e * (e - 1) * (e - 1);
    const double fyd = 2 * e * (e - 1) * (2 * e - 1);
    const double fydd = 12 * e * e - 12 * e + 2;
    const double gy = (x - 0.5) * x * (1 - x);
    const double gyd = -(0.5 - 3 * x + 3 * x * x);
    const double gydd = 3 - 6 * x;

    // u_z = h(x) sin(pi e),  h = x (1 - x) sin(pi x)
    const double sx = std::sin(pi * x), cx = std::cos(pi * x);
    const double h = x * (1 - x) * sx;
    const double hd = (1 - 2 * x) * sx + x * (1 - x) * pi * cx;
    const double hdd = -2 * sx + 2 * (1 - 2 * x) * pi * cx - x * (1 - x) * pi * pi * sx;
    const double se = std::sin(pi * e), ce = std::cos(pi * e);

    out[deriv_index(0, 0)] = Vec3(f * g, gy * fy, h * se);
    out[deriv_index(1, 0)] = Vec3(fd * g, gyd * fy, hd * se);
    out[deriv_index(0, 1)] = Vec3(f * gd, gy * fyd, h * pi * ce);
    out[deriv_index(2, 0)] = Vec3(fdd * g, gydd * fy, hdd * se);
    out[deriv_index(1, 1)] = Vec3(fd * gd, gyd * fyd, hd * pi * ce);
    out[deriv_index(0, 2)] = Vec3(f * gdd, gy * fydd, -h * pi * pi * se);
}

CaseLevel build_astroid(int level, int degree, double thickness) {
    const Material mat = Material::isotropic(1e6, 0.3, thickness);
    const int n = 4;

    const ParamCurve c1 = ParamCurve::quadratic(Vec2(0.36, 0), Vec2(0.28, 0.5), Vec2(0.30, 1));
    const ParamCurve c2 = ParamCurve::quadratic(Vec2(0.64, 0), Vec2(0.72, 0.5), Vec2(0.70, 1));

    std::vector<Patch> patches;
    patches.emplace_back(astroid_geometry(), shifted_space(degree, n, n, false, level),
                         std::vector<TrimCurve>{{c1, true}}, mat);
    patches.emplace_back(astroid_geometry(), shifted_space(degree, n, n, true, level),
                         std::vector<TrimCurve>{{c1, false}, {c2, true}}, mat);
    patches.emplace_back(astroid_geometry(), shifted_space(degree, n, n, false, level),
                         std::vector<TrimCurve>{{c2, false}}, mat);
    CaseLevel lvl{PatchSet(std::move(patches)), {}, {}, {}, {}, {}, {}};

    lvl.model.interfaces.push_back({0, 1, c1, c1, -1});
    lvl.model.interfaces.push_back({1, 2, c2, c2, -1});

    lvl.exact = [](int, const Vec2& uv, const SurfaceFrame&, Vec3 out[6]) { astroid_exact(uv, out); };
    lvl.loads.manufactured = lvl.exact;
    lvl.bcs = zero_boundary(3);
    return lvl;
}

// ------------------------------------------------------------------ cylinder

CaseLevel build_cylinder(int level, int degree, double thickness, const CaseConfig& cfg) {
    const Material mat = Material::isotropic(1e7, 0.3, thickness);
    const int n = 4;
    const double half_span = 0.5 * cfg.cylinder_span_deg * M_PI / 180.0;

    SurfaceMap geo = [&] {
        const ArcData arc = arc_segment(cfg.cylinder_radius, -half_span, half_span);
        KnotVector ka = KnotVector::uniform_open(2, 1);
        KnotVector kh = KnotVector::uniform_open(1, 1);
        std::vector<double> w = {1, arc.w1, 1, 1, arc.w1, 1};
        SplineSpace s(ka, kh, w);
        // xi circumferential, eta axial (y)
        std::vector<Vec3> cp = {
            {arc.p0[0], 0, arc.p0[1]}, {arc.p1[0], 0, arc.p1[1]}, {arc.p2[0], 0, arc.p2[1]},
            {arc.p0[0], cfg.cylinder_height, arc.p0[1]},
            {arc.p1[0], cfg.cylinder_height, arc.p1[1]},
            {arc.p2[0], cfg.cylinder_height, arc.p2[1]}};
        return SurfaceMap(std::move(s), std::move(cp));
    }();

    // interface arms meeting at the central cross-point (0.5, 0.5)
    const Vec2 center(0.5, 0.5);
    const ParamCurve arm_s = ParamCurve::quadratic(Vec2(0.55, 0), Vec2(0.53, 0.25), center);
    const ParamCurve arm_n = ParamCurve::quadratic(center, Vec2(0.47, 0.75), Vec2(0.45, 1));
    const ParamCurve arm_w = ParamCurve::quadratic(Vec2(0, 0.45), Vec2(0.25, 0.47), center);
    const ParamCurve arm_e = ParamCurve::quadratic(center, Vec2(0.75, 0.53), Vec2(1, 0.55));

    // kinked per-patch trim paths, 2-span quadratics through the center
    auto path = [&](const Vec2& a, const Vec2& ca, const Vec2& cb, const Vec2& b) {
        SplineSpace cs{KnotVector({0, 0, 0, 0.5, 0.5, 1, 1, 1}, 2)};
        return ParamCurve(std::move(cs), {a, ca, center, cb, b});
    };
    const ParamCurve path_sw = path(Vec2(0.55, 0), Vec2(0.53, 0.25), Vec2(0.25, 0.47), Vec2(0, 0.45));
    const ParamCurve path_se = path(Vec2(1, 0.55), Vec2(0.75, 0.53), Vec2(0.53, 0.25), Vec2(0.55, 0));
    const ParamCurve path_ne = path(Vec2(0.45, 1), Vec2(0.47, 0.75), Vec2(0.75, 0.53), Vec2(1, 0.55));
    const ParamCurve path_nw = path(Vec2(0, 0.45), Vec2(0.25, 0.47), Vec2(0.47, 0.75), Vec2(0.45, 1));

    std::vector<Patch> patches;  // SW, SE, NW, NE
    patches.emplace_back(geo, shifted_space(degree, n, n, false, level),
                         std::vector<TrimCurve>{{path_sw, true}}, mat);
    patches.emplace_back(geo, shifted_space(degree, n, n, true, level),
                         std::vector<TrimCurve>{{path_se, true}}, mat);
    patches.emplace_back(geo, shifted_space(degree, n, n, true, level),
                         std::vector<TrimCurve>{{path_nw, true}}, mat);
    patches.emplace_back(geo, shifted_space(degree, n, n, false, level),
                         std::vector<TrimCurve>{{path_ne, true}}, mat);
    CaseLevel lvl{PatchSet(std::move(patches)), {}, {}, {}, {}, {}, {}};

    lvl.model.interfaces.push_back({0, 1, arm_s, arm_s, -1});  // SW | SE
    lvl.model.interfaces.push_back({0, 2, arm_w, arm_w, -1});  // SW | NW
    lvl.model.interfaces.push_back({2, 3, arm_n, arm_n, -1});  // NW | NE
    lvl.model.interfaces.push_back({1, 3, arm_e, arm_e, -1});  // SE | NE

    CrossPointDef cp;
    cp.incidents = {{0, center}, {1, center}, {2, center}, {3, center}};
    lvl.model.cross_points.push_back(cp);

    lvl.exact = [](int, const Vec2& uv, const SurfaceFrame& fr, Vec3 out[6]) {
        const double x = uv[0], e = uv[1];
        const double f = -(x - 1) * (x - 1) * x * x;
        const double fd = -2 * x * (x - 1) * (2 * x - 1);
        const double fdd = -(12 * x * x - 12 * x + 2);
        const double g = e * (e - 1);
        const double gd = 2 * e - 1;
        const double gdd = 2.0;
        out[deriv_index(0, 0)] = f * g * fr.a3;
        out[deriv_index(1, 0)] = fd * g * fr.a3 + f * g * fr.da3[0];
        out[deriv_index(0, 1)] = f * gd * fr.a3 + f * g * fr.da3[1];
        out[deriv_index(2, 0)] = fdd * g * fr.a3 + 2 * fd * g * fr.da3[0] + f * g * fr.dda3[0][0];
        out[deriv_index(1, 1)] =
            fd * gd * fr.a3 + fd * g * fr.da3[1] + f * gd * fr.da3[0] + f * g * fr.dda3[0][1];
        out[deriv_index(0, 2)] = f * gdd * fr.a3 + 2 * f * gd * fr.da3[1] + f * g * fr.dda3[1][1];
    };
    lvl.loads.manufactured = lvl.exact;
    lvl.bcs = zero_boundary(4);
    return lvl;
}

}  // namespace

std::vector<BenchmarkCase> case_catalogue(const CaseConfig& config) {
    std::vector<BenchmarkCase> cases;

    cases.push_back({"four-patch",
                     "four non-trimmed planar patches, curved interfaces, manufactured sine field",
                     {0.005},
                     true,
                     5,
                     [](int l, int p, double t) { return build_four_patch(l, p, t); }});

    cases.push_back({"scordelis-lo",
                     "cylindrical roof on rigid diaphragms under areal load, six patches",
                     {0.025},
                     false,
                     5,
                     [config](int l, int p, double t) {
                         return build_scordelis(l, p, t, config.scordelis_load);
                     }});

    cases.push_back({"l-beam",
                     "two patches meeting at a right angle, clamped, tip point load",
                     {0.05},
                     false,
                     4,
                     [config](int l, int p, double t) {
                         return build_lbeam(l, p, t, config.lbeam_length, config.lbeam_leg);
                     }});

    cases.push_back({"three-patch",
                     "pure bending of three trimmed planar patches, quadratic interfaces",
                     {0.05, 0.5, 0.01},
                     true,
                     5,
                     [](int l, int p, double t) { return build_three_patch(l, p, t); }});

    cases.push_back({"astroid",
                     "trimmed astroid with a parametric manufactured field",
                     {0.1, 0.01, 0.005},
                     true,
                     5,
                     [](int l, int p, double t) { return build_astroid(l, p, t); }});

    cases.push_back({"cylinder",
                     "four trimmed cylinder patches with a central cross-point",
                     {0.001},
                     true,
                     4,
                     [config](int l, int p, double t) { return build_cylinder(l, p, t, config); }});

    return cases;
}

BenchmarkCase find_case(const std::string& id, const CaseConfig& config) {
    for (BenchmarkCase& c : case_catalogue(config))
        if (c.id == id) return c;
    throw std::invalid_argument("unknown case id: " + id);
}

}  // namespace kl
