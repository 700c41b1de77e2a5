#include "klshell/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kl {

ParamCurve::ParamCurve(SplineSpace space, std::vector<Vec2> control_points)
    : space_(std::move(space)), points_(std::move(control_points)) {
    if (space_.dim() != 1) throw std::invalid_argument("ParamCurve: expected a univariate space");
    if (static_cast<int>(points_.size()) != space_.num_functions())
        throw std::invalid_argument("ParamCurve: control point count mismatch");
    if (space_.degree(0) > 3) throw std::invalid_argument("ParamCurve: degree capped at 3");
}

ParamCurve ParamCurve::line(const Vec2& a, const Vec2& b) {
    return ParamCurve(SplineSpace(KnotVector::uniform_open(1, 1)), {a, b});
}

ParamCurve ParamCurve::quadratic(const Vec2& a, const Vec2& c, const Vec2& b) {
    return ParamCurve(SplineSpace(KnotVector::uniform_open(2, 1)), {a, c, b});
}

Vec2 ParamCurve::point(double t) const {
    const TensorBasisEval e = space_.evaluate(t, 0);
    const int first = e.span[0] - degree();
    Vec2 p = Vec2::Zero();
    for (int i = 0; i < e.count[0]; ++i) p += e.value(0, i) * points_[first + i];
    return p;
}

Vec2 ParamCurve::derivative(double t, int order) const {
    const TensorBasisEval e = space_.evaluate(t, order);
    const int first = e.span[0] - degree();
    Vec2 p = Vec2::Zero();
    for (int i = 0; i < e.count[0]; ++i) p += e.value(order, i) * points_[first + i];
    return p;
}

std::vector<double> ParamCurve::monotone_split_parameters() const {
    std::vector<double> splits;
    const auto& kv = space_.knot_vector(0);
    // knots of multiplicity >= degree are potential kinks
    const auto& knots = kv.knots();
    for (std::size_t i = degree() + 1; i + degree() + 1 < knots.size(); ++i) {
        int mult = 1;
        while (i + 1 < knots.size() && knots[i + 1] == knots[i]) { ++mult; ++i; }
        if (mult >= degree()) splits.push_back(knots[i]);
    }
    // extrema of each coordinate: sample the derivative for sign changes
    const int samples = 64;
    for (int comp = 0; comp < 2; ++comp) {
        double prev = derivative(0.0, 1)[comp];
        double tprev = 0.0;
        for (int s = 1; s <= samples; ++s) {
            const double t = static_cast<double>(s) / samples;
            const double d = derivative(t, 1)[comp];
            if (prev * d < 0.0) {
                // bisection on the derivative component
                double lo = tprev, hi = t, flo = prev;
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = derivative(mid, 1)[comp];
                    if (flo * fm <= 0.0) hi = mid; else { lo = mid; flo = fm; }
                }
                const double root = 0.5 * (lo + hi);
                if (root > 1e-10 && root < 1.0 - 1e-10) splits.push_back(root);
            }
            prev = d;
            tprev = t;
        }
    }
    std::sort(splits.begin(), splits.end());
    splits.erase(std::unique(splits.begin(), splits.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-10; }),
                 splits.end());
    return splits;
}

std::vector<double> ParamCurve::axis_crossings(int component, double c, double t0, double t1) const {
    std::vector<double> roots;
    auto f = [&](double t) { return point(t)[component] - c; };

    // work per knot span so each segment is polynomial
    std::vector<double> bp = space_.knot_vector(0).breakpoints();
    bp.insert(bp.begin(), t0);
    bp.push_back(t1);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::remove_if(bp.begin(), bp.end(), [&](double t) { return t < t0 - 1e-14 || t > t1 + 1e-14; }),
             bp.end());
    bp.erase(std::unique(bp.begin(), bp.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }),
             bp.end());

    const int samples = 32;
    for (std::size_t seg = 0; seg + 1 < bp.size(); ++seg) {
        const double a = bp[seg], b = bp[seg + 1];
        if (b - a < 1e-14) continue;
        double tprev = a, fprev = f(a);
        // flat-on-line detection: the whole sample set nearly constant at c
        bool all_near = std::abs(fprev) < 1e-12;
        for (int s = 1; s <= samples; ++s) {
            const double t = a + (b - a) * s / samples;
            const double ft = f(t);
            all_near = all_near && std::abs(ft) < 1e-12;
            if (fprev == 0.0) {
                roots.push_back(tprev);
            } else if (fprev * ft < 0.0) {
                // safeguarded Newton within [tprev, t]
                double lo = tprev, hi = t, flo = fprev;
                double x = 0.5 * (lo + hi);
                for (int it = 0; it < 100; ++it) {
                    const double fx = f(x);
                    if (std::abs(fx) < 1e-13) break;
                    if (flo * fx <= 0.0) hi = x; else { lo = x; flo = fx; }
                    const double dfx = derivative(x, 1)[component];
                    double xn = (dfx != 0.0) ? x - fx / dfx : 0.5 * (lo + hi);
                    if (xn <= lo || xn >= hi) xn = 0.5 * (lo + hi);
                    x = xn;
                }
                roots.push_back(x);
            }
            tprev = t;
            fprev = ft;
        }
        if (std::abs(f(b)) == 0.0 && (roots.empty() || std::abs(roots.back() - b) > 1e-10)) roots.push_back(b);
        if (all_near)
            throw std::runtime_error("trim curve runs along a knot line: classification is ambiguous");
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-10; }),
                roots.end());
    return roots;
}

SurfaceMap::SurfaceMap(SplineSpace space, std::vector<Vec3> control_points)
    : space_(std::move(space)), points_(std::move(control_points)) {
    if (space_.dim() != 2) throw std::invalid_argument("SurfaceMap: expected a surface space");
    if (static_cast<int>(points_.size()) != space_.num_functions())
        throw std::invalid_argument("SurfaceMap: control point count mismatch");
}

std::vector<Vec3> SurfaceMap::derivatives(const Vec2& uv, int order) const {
    const TensorBasisEval e = space_.evaluate(uv, order);
    const std::vector<int> idx = space_.global_indices(e);
    std::vector<Vec3> out(num_derivs_2d(order), Vec3::Zero());
    for (int d = 0; d < num_derivs_2d(order); ++d)
        for (int f = 0; f < e.num_local(); ++f) out[d] += e.value(d, f) * points_[idx[f]];
    return out;
}

Vec3 SurfaceMap::point(const Vec2& uv) const { return derivatives(uv, 0)[0]; }

SurfaceMap SurfaceMap::h_refined(const std::vector<std::vector<double>>& new_knots) const {
    // homogeneous coordinates so rational geometry is reproduced exactly
    const bool rat = space_.rational();
    const auto& w = space_.weights();
    const int n0c = space_.num_functions(0);
    const int n1c = (space_.dim() == 2) ? space_.num_functions(1) : 1;

    auto refined = space_.h_refined(new_knots);
    const auto& tx = refined.transfer[0];
    const auto& ty = refined.transfer[1];
    const int n0f = refined.space.num_functions(0);
    const int n1f = refined.space.num_functions(1);

    auto hom = [&](int j, int i) -> Eigen::Vector4d {
        const int k = j * n0c + i;
        const double wk = rat ? w[k] : 1.0;
        return Eigen::Vector4d(points_[k][0] * wk, points_[k][1] * wk, points_[k][2] * wk, wk);
    };

    std::vector<Eigen::Vector4d> tmp(static_cast<std::size_t>(n0f) * n1c, Eigen::Vector4d::Zero());
    for (int j = 0; j < n1c; ++j)
        for (int i = 0; i < n0f; ++i)
            for (int k = 0; k < n0c; ++k) {
                const double t = tx[static_cast<std::size_t>(i) * n0c + k];
                if (t != 0.0) tmp[static_cast<std::size_t>(j) * n0f + i] += t * hom(j, k);
            }

    std::vector<Vec3> fine(static_cast<std::size_t>(n0f) * n1f);
    for (int j = 0; j < n1f; ++j)
        for (int i = 0; i < n0f; ++i) {
            Eigen::Vector4d h = Eigen::Vector4d::Zero();
            for (int l = 0; l < n1c; ++l) {
                const double t = ty[static_cast<std::size_t>(j) * n1c + l];
                if (t != 0.0) h += t * tmp[static_cast<std::size_t>(l) * n0f + i];
            }
            fine[static_cast<std::size_t>(j) * n0f + i] = h.head<3>() / h[3];
        }
    return SurfaceMap(std::move(refined.space), std::move(fine));
}

SurfaceFrame frame(const SurfaceMap& map, const Vec2& uv, int order) {
    if (order > 2) throw std::invalid_argument("frame: derivative order capped at 2");
    const std::vector<Vec3> F = map.derivatives(uv, order + 1);

    SurfaceFrame fr;
    fr.uv = uv;
    fr.order = order;
    fr.x = F[deriv_index(0, 0)];
    fr.a1 = F[deriv_index(1, 0)];
    fr.a2 = F[deriv_index(0, 1)];

    const Vec3 w = fr.a1.cross(fr.a2);
    fr.jacobian = w.norm();
    if (fr.jacobian < 1e-14)
        throw std::runtime_error("degenerate parametrization: |a1 x a2| vanishes at (" +
                                 std::to_string(uv[0]) + ", " + std::to_string(uv[1]) + ")");
    fr.a3 = w / fr.jacobian;

    fr.metric << fr.a1.dot(fr.a1), fr.a1.dot(fr.a2), fr.a2.dot(fr.a1), fr.a2.dot(fr.a2);
    fr.metric_inv = fr.metric.inverse();
    fr.acontra[0] = fr.metric_inv(0, 0) * fr.a1 + fr.metric_inv(0, 1) * fr.a2;
    fr.acontra[1] = fr.metric_inv(1, 0) * fr.a1 + fr.metric_inv(1, 1) * fr.a2;

    if (order < 1) return fr;

    const Vec3 ders2[2][2] = {
        {F[deriv_index(2, 0)], F[deriv_index(1, 1)]},
        {F[deriv_index(1, 1)], F[deriv_index(0, 2)]}};
    Vec3 dw[2];
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) fr.da[a][b] = ders2[a][b];
    for (int a = 0; a < 2; ++a) {
        dw[a] = fr.da[0][a].cross(fr.a2) + fr.a1.cross(fr.da[1][a]);
        const double dj = fr.a3.dot(dw[a]);
        fr.da3[a] = (dw[a] - dj * fr.a3) / fr.jacobian;
    }
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int g = 0; g < 2; ++g) fr.christoffel[g][a][b] = fr.acontra[g].dot(fr.da[a][b]);

    if (order < 2) return fr;

    auto F3 = [&](int du, int dv) { return F[deriv_index(du, dv)]; };
    // third derivatives of F indexed by the two extra differentiations
    auto d3 = [&](int a, int b, int g) {
        const int du = (a == 0) + (b == 0) + (g == 0);
        return F3(du, 3 - du);
    };
    const double j = fr.jacobian;
    double djv[2];
    for (int a = 0; a < 2; ++a) djv[a] = fr.a3.dot(dw[a]);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            for (int g = 0; g < 2; ++g) fr.dda[a][b][g] = d3(a, b, g);
            const Vec3 dwab = d3(0, a, b).cross(fr.a2) + fr.da[0][a].cross(fr.da[1][b]) +
                              fr.da[0][b].cross(fr.da[1][a]) + fr.a1.cross(d3(1, a, b));
            const double djab = fr.da3[b].dot(dw[a]) + fr.a3.dot(dwab);
            fr.dda3[a][b] = (dwab - djv[a] * fr.da3[b] - djab * fr.a3) / j -
                            (dw[a] - djv[a] * fr.a3) * djv[b] / (j * j);
        }
    return fr;
}

Mat3 cartesian_to_curvilinear(const SurfaceFrame& frame) {
    Mat3 q;
    q.col(0) = frame.a1;
    q.col(1) = frame.a2;
    q.col(2) = frame.a3;
    return q;
}

BoundaryTrace boundary_trace(const SurfaceMap& map, const ParamCurve& curve, double t, int frame_order) {
    BoundaryTrace tr;
    tr.t = t;
    tr.uv = curve.point(t);
    const Vec2 dc = curve.derivative(t, 1);
    tr.frame = frame(map, tr.uv, frame_order);
    tr.x = tr.frame.x;

    const Vec3 tangent = dc[0] * tr.frame.a1 + dc[1] * tr.frame.a2;
    tr.arc_jacobian = tangent.norm();
    if (tr.arc_jacobian < 1e-14) throw std::runtime_error("degenerate curve: zero tangent");
    tr.tangent = tangent / tr.arc_jacobian;

    Vec3 n = tr.frame.a3.cross(tr.tangent);
    n.normalize();
    // orient to the right of the parametric travel direction
    Vec2 ncontra(n.dot(tr.frame.acontra[0]), n.dot(tr.frame.acontra[1]));
    const double side = ncontra[0] * dc[1] - ncontra[1] * dc[0];
    if (side < 0.0) {
        n = -n;
        ncontra = -ncontra;
    }
    tr.normal = n;
    tr.normal_contra = ncontra;
    return tr;
}

}  // namespace kl
