#include "klshell/trimming.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace kl {

namespace {

constexpr double kSliverRatio = 1e-12;

double rect_scale(const Vec2& lo, const Vec2& hi) { return std::max(hi[0] - lo[0], hi[1] - lo[1]); }

struct Segment {
    int curve = 0;
    double ta = 0.0, tb = 0.0;  ///< ta < tb, monotone in both coordinates
};

// Signed side of q relative to the curve (positive = left of travel). The
// nearest point is found per polynomial span; when it sits at a
// reduced-continuity joint, the side follows the wedge of the two one-sided
// tangents: half-plane intersection for a left-turn corner, union for a
// right turn.
double side_of_curve(const ParamCurve& c, const Vec2& q) {
    const std::vector<double> bp = c.space().knot_vector(0).breakpoints();

    double tglobal = 0.0, dglobal = std::numeric_limits<double>::infinity();
    for (std::size_t seg = 0; seg + 1 < bp.size(); ++seg) {
        const double ta = bp[seg], tb = bp[seg + 1];
        const int samples = 24;
        double tbest = ta, dbest = std::numeric_limits<double>::infinity();
        for (int s = 0; s <= samples; ++s) {
            const double t = ta + (tb - ta) * s / samples;
            const double d = (c.point(t) - q).squaredNorm();
            if (d < dbest) { dbest = d; tbest = t; }
        }
        double t = tbest;
        for (int it = 0; it < 40; ++it) {
            const Vec2 d = c.point(t) - q;
            const Vec2 d1 = c.derivative(t, 1);
            const Vec2 d2 = (c.degree() >= 2) ? c.derivative(t, 2) : Vec2::Zero();
            const double g = d.dot(d1);
            const double h = d1.squaredNorm() + d.dot(d2);
            if (h <= 0.0) break;
            double tn = std::clamp(t - g / h, ta, tb);
            if (std::abs(tn - t) < 1e-14) { t = tn; break; }
            t = tn;
        }
        const double dist = (c.point(t) - q).squaredNorm();
        if (dist < dglobal) { dglobal = dist; tglobal = t; }
    }

    // joint handling when the winner is a breakpoint with a genuine kink
    const int p = c.degree();
    const auto& knots = c.space().knot_vector(0).knots();
    for (std::size_t i = p + 1; i + p + 1 < knots.size(); ++i) {
        int mult = 1;
        while (i + 1 < knots.size() && knots[i + 1] == knots[i]) { ++mult; ++i; }
        if (mult < p) continue;
        const double tk = knots[i];
        if (std::abs(tglobal - tk) > 1e-9) continue;
        const double eps = 1e-7;
        const Vec2 ck = c.point(tk);
        const Vec2 d = q - ck;
        const Vec2 t1 = (ck - c.point(std::max(0.0, tk - eps))) / eps;
        const Vec2 t2 = (c.point(std::min(1.0, tk + eps)) - ck) / eps;
        const double s1 = t1[0] * d[1] - t1[1] * d[0];
        const double s2 = t2[0] * d[1] - t2[1] * d[0];
        const double turn = t1[0] * t2[1] - t1[1] * t2[0];
        return (turn >= 0.0) ? std::min(s1, s2) : std::max(s1, s2);
    }

    const Vec2 tan = c.derivative(tglobal, 1);
    const Vec2 d = q - c.point(tglobal);
    return tan[0] * d[1] - tan[1] * d[0];
}

// Clips the monotone piece [ta, tb] of a curve to a rectangle; at most one
// sub-interval survives for monotone pieces, but the scan handles more.
std::vector<std::pair<double, double>> clip_to_rect(const ParamCurve& c, double ta, double tb,
                                                    const Vec2& lo, const Vec2& hi) {
    std::vector<double> ts{ta, tb};
    for (int comp = 0; comp < 2; ++comp)
        for (double v : {lo[comp], hi[comp]})
            for (double r : c.axis_crossings(comp, v, ta, tb)) ts.push_back(r);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             ts.end());

    const double eps = 1e-12 * rect_scale(lo, hi);
    std::vector<std::pair<double, double>> out;
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        if (ts[k + 1] - ts[k] < 1e-12) continue;
        const Vec2 p = c.point(0.5 * (ts[k] + ts[k + 1]));
        if (p[0] > lo[0] + eps && p[0] < hi[0] - eps && p[1] > lo[1] + eps && p[1] < hi[1] - eps) {
            if (!out.empty() && std::abs(out.back().second - ts[k]) < 1e-12)
                out.back().second = ts[k + 1];
            else
                out.emplace_back(ts[k], ts[k + 1]);
        }
    }
    return out;
}

Vec2 snap_to_rect(Vec2 p, const Vec2& lo, const Vec2& hi, double tol) {
    for (int c = 0; c < 2; ++c) {
        if (std::abs(p[c] - lo[c]) < tol) p[c] = lo[c];
        if (std::abs(p[c] - hi[c]) < tol) p[c] = hi[c];
    }
    return p;
}

bool on_rect_boundary(const Vec2& p, const Vec2& lo, const Vec2& hi, double tol) {
    const bool inx = p[0] > lo[0] - tol && p[0] < hi[0] + tol;
    const bool iny = p[1] > lo[1] - tol && p[1] < hi[1] + tol;
    if (!inx || !iny) return false;
    return std::abs(p[0] - lo[0]) < tol || std::abs(p[0] - hi[0]) < tol ||
           std::abs(p[1] - lo[1]) < tol || std::abs(p[1] - hi[1]) < tol;
}

// CCW perimeter coordinate, starting at (lo.x, lo.y) along the bottom edge.
double perimeter_coord(const Vec2& p, const Vec2& lo, const Vec2& hi) {
    const double w = hi[0] - lo[0], h = hi[1] - lo[1];
    const double tol = 1e-10 * std::max(w, h);
    if (std::abs(p[1] - lo[1]) < tol && p[0] < hi[0] - tol) return p[0] - lo[0];
    if (std::abs(p[0] - hi[0]) < tol && p[1] < hi[1] - tol) return w + (p[1] - lo[1]);
    if (std::abs(p[1] - hi[1]) < tol && p[0] > lo[0] + tol) return w + h + (hi[0] - p[0]);
    return 2 * w + h + (hi[1] - p[1]);
}

std::vector<QuadSubcell> single_segment_subcells(const std::vector<TrimCurve>& curves, const Segment& seg,
                                                 const Vec2& lo, const Vec2& hi) {
    const TrimCurve& tc = curves[seg.curve];
    const double u0 = tc.keep_left ? seg.ta : seg.tb;
    const double u1 = tc.keep_left ? seg.tb : seg.ta;
    const double tol = 1e-9 * rect_scale(lo, hi);

    const Vec2 a = snap_to_rect(tc.curve.point(u0), lo, hi, tol);
    const Vec2 b = snap_to_rect(tc.curve.point(u1), lo, hi, tol);
    if (!on_rect_boundary(a, lo, hi, tol) || !on_rect_boundary(b, lo, hi, tol))
        throw std::runtime_error("trim reparametrization: segment endpoint off the cell boundary");

    // walk the rectangle boundary counterclockwise from b back to a,
    // collecting the corners strictly in between
    const double w = hi[0] - lo[0], h = hi[1] - lo[1];
    const double perim = 2 * (w + h);
    const double sb = perimeter_coord(b, lo, hi);
    const double sa = perimeter_coord(a, lo, hi);
    const Vec2 rect_corners[4] = {lo, Vec2(hi[0], lo[1]), hi, Vec2(lo[0], hi[1])};
    const double corner_coord[4] = {0.0, w, w + h, 2 * w + h};

    double span = sa - sb;
    if (span <= tol) span += perim;
    std::vector<Vec2> walk;
    for (int c = 0; c < 4; ++c) {
        double d = corner_coord[c] - sb;
        while (d <= tol) d += perim;
        if (d < span - tol) walk.push_back(rect_corners[c]);
    }
    std::sort(walk.begin(), walk.end(), [&](const Vec2& x, const Vec2& y) {
        double dx = perimeter_coord(x, lo, hi) - sb;
        double dy = perimeter_coord(y, lo, hi) - sb;
        while (dx <= tol) dx += perim;
        while (dy <= tol) dy += perim;
        return dx < dy;
    });

    std::vector<QuadSubcell> cells;
    const int k = static_cast<int>(walk.size());
    switch (k) {
        case 0:
            cells.push_back(QuadSubcell::ruled(tc.curve, u0, u1, a, b));
            break;
        case 1:
            cells.push_back(QuadSubcell::cone(tc.curve, u0, u1, walk[0]));
            break;
        case 2:
            cells.push_back(QuadSubcell::ruled(tc.curve, u0, u1, walk[1], walk[0]));
            break;
        case 3:
            cells.push_back(QuadSubcell::cone(tc.curve, u0, u1, walk[1]));
            cells.push_back(QuadSubcell::bilinear(b, walk[0], walk[1], walk[1]));
            cells.push_back(QuadSubcell::bilinear(walk[2], a, walk[1], walk[1]));
            break;
        default:
            throw std::runtime_error("trim reparametrization: unsupported cut-cell topology");
    }
    return cells;
}

std::vector<QuadSubcell> process_rect(const std::vector<TrimCurve>& curves, const Vec2& lo, const Vec2& hi,
                                      const std::vector<Segment>& segments, int depth) {
    if (depth > 8) throw std::runtime_error("trim reparametrization: unsupported cut-cell topology (recursion limit)");
    const double tol = 1e-9 * rect_scale(lo, hi);

    if (segments.empty()) {
        const Vec2 center = 0.5 * (lo + hi);
        std::vector<QuadSubcell> cells;
        if (point_in_kept_region(curves, center))
            cells.push_back(QuadSubcell::bilinear(lo, Vec2(hi[0], lo[1]), Vec2(lo[0], hi[1]), hi));
        return cells;
    }

    // interior segment endpoint (kink or extremum): subdivide there
    Vec2 split(0, 0);
    bool found = false;
    for (const Segment& s : segments) {
        for (double t : {s.ta, s.tb}) {
            const Vec2 p = curves[s.curve].curve.point(t);
            if (p[0] > lo[0] + tol && p[0] < hi[0] - tol && p[1] > lo[1] + tol && p[1] < hi[1] - tol) {
                split = p;
                found = true;
                break;
            }
        }
        if (found) break;
    }
    if (!found && segments.size() > 1) {
        split = 0.5 * (lo + hi);
        found = true;
    }

    if (found) {
        std::vector<double> xs{lo[0], hi[0]}, ys{lo[1], hi[1]};
        if (split[0] > lo[0] + tol && split[0] < hi[0] - tol) xs.insert(xs.begin() + 1, split[0]);
        if (split[1] > lo[1] + tol && split[1] < hi[1] - tol) ys.insert(ys.begin() + 1, split[1]);
        std::vector<QuadSubcell> cells;
        for (std::size_t j = 0; j + 1 < ys.size(); ++j)
            for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
                const Vec2 slo(xs[i], ys[j]);
                const Vec2 shi(xs[i + 1], ys[j + 1]);
                std::vector<Segment> sub;
                for (const Segment& s : segments)
                    for (auto [ta, tb] : clip_to_rect(curves[s.curve].curve, s.ta, s.tb, slo, shi))
                        sub.push_back({s.curve, ta, tb});
                auto part = process_rect(curves, slo, shi, sub, depth + 1);
                cells.insert(cells.end(), part.begin(), part.end());
            }
        return cells;
    }

    return single_segment_subcells(curves, segments[0], lo, hi);
}

std::vector<Segment> monotone_segments(const std::vector<TrimCurve>& curves) {
    std::vector<Segment> pieces;
    for (std::size_t c = 0; c < curves.size(); ++c) {
        std::vector<double> cuts = curves[c].curve.monotone_split_parameters();
        cuts.insert(cuts.begin(), 0.0);
        cuts.push_back(1.0);
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
            if (cuts[k + 1] - cuts[k] > 1e-12) pieces.push_back({static_cast<int>(c), cuts[k], cuts[k + 1]});
    }
    return pieces;
}

}  // namespace

bool point_in_kept_region(const std::vector<TrimCurve>& curves, const Vec2& q) {
    for (const TrimCurve& tc : curves) {
        const double s = side_of_curve(tc.curve, q);
        if (tc.keep_left ? (s <= 0.0) : (s >= 0.0)) return false;
    }
    return true;
}

std::vector<QuadSubcell> reparametrize_cut_element(const std::vector<TrimCurve>& curves, const Vec2& lo,
                                                   const Vec2& hi) {
    std::vector<Segment> segs;
    for (const Segment& piece : monotone_segments(curves))
        for (auto [ta, tb] : clip_to_rect(curves[piece.curve].curve, piece.ta, piece.tb, lo, hi))
            segs.push_back({piece.curve, ta, tb});

    std::vector<QuadSubcell> cells = process_rect(curves, lo, hi, segs, 0);
    const double cell_area = (hi[0] - lo[0]) * (hi[1] - lo[1]);
    const GaussRule& rule = gauss_rule(4);
    std::vector<QuadSubcell> kept;
    for (QuadSubcell& c : cells) {
        c.orient();
        if (c.area(rule) > kSliverRatio * cell_area) kept.push_back(std::move(c));
    }
    return kept;
}

QuadSubcell QuadSubcell::bilinear(const Vec2& c00, const Vec2& c10, const Vec2& c01, const Vec2& c11) {
    QuadSubcell q;
    q.kind_ = Kind::Bilinear;
    q.corners_[0] = c00;
    q.corners_[1] = c10;
    q.corners_[2] = c01;
    q.corners_[3] = c11;
    return q;
}

QuadSubcell QuadSubcell::ruled(ParamCurve curve, double u0, double u1, const Vec2& d0, const Vec2& d1) {
    QuadSubcell q;
    q.kind_ = Kind::Ruled;
    q.curve_ = std::move(curve);
    q.u0_ = u0;
    q.u1_ = u1;
    q.corners_[0] = d0;
    q.corners_[1] = d1;
    return q;
}

QuadSubcell QuadSubcell::cone(ParamCurve curve, double u0, double u1, const Vec2& apex) {
    QuadSubcell q;
    q.kind_ = Kind::Cone;
    q.curve_ = std::move(curve);
    q.u0_ = u0;
    q.u1_ = u1;
    q.corners_[0] = apex;
    return q;
}

Vec2 QuadSubcell::curve_point(double s, Vec2* dcurve) const {
    const double u = u0_ + s * (u1_ - u0_);
    if (dcurve) *dcurve = curve_->derivative(u, 1) * (u1_ - u0_);
    return curve_->point(u);
}

Vec2 QuadSubcell::eval(double s, double t, Mat2* jacobian) const {
    switch (kind_) {
        case Kind::Bilinear: {
            const Vec2 p = (1 - s) * (1 - t) * corners_[0] + s * (1 - t) * corners_[1] +
                           (1 - s) * t * corners_[2] + s * t * corners_[3];
            if (jacobian) {
                const Vec2 ds = (1 - t) * (corners_[1] - corners_[0]) + t * (corners_[3] - corners_[2]);
                const Vec2 dt = (1 - s) * (corners_[2] - corners_[0]) + s * (corners_[3] - corners_[1]);
                jacobian->col(0) = ds;
                jacobian->col(1) = dt;
            }
            return p;
        }
        case Kind::Ruled: {
            Vec2 dc;
            const Vec2 c = curve_point(s, jacobian ? &dc : nullptr);
            const Vec2 d = (1 - s) * corners_[0] + s * corners_[1];
            if (jacobian) {
                jacobian->col(0) = (1 - t) * dc + t * (corners_[1] - corners_[0]);
                jacobian->col(1) = d - c;
            }
            return (1 - t) * c + t * d;
        }
        case Kind::Cone: {
            Vec2 dc;
            const Vec2 c = curve_point(s, jacobian ? &dc : nullptr);
            if (jacobian) {
                jacobian->col(0) = (1 - t) * dc;
                jacobian->col(1) = corners_[0] - c;
            }
            return (1 - t) * c + t * corners_[0];
        }
    }
    return Vec2::Zero();
}

double QuadSubcell::jacobian_det(double s, double t) const {
    Mat2 j;
    eval(s, t, &j);
    return j.determinant();
}

void QuadSubcell::orient() {
    if (jacobian_det(0.5, 0.5) >= 0.0) return;
    if (kind_ == Kind::Bilinear) {
        std::swap(corners_[0], corners_[1]);
        std::swap(corners_[2], corners_[3]);
    } else {
        std::swap(u0_, u1_);
        if (kind_ == Kind::Ruled) std::swap(corners_[0], corners_[1]);
    }
}

double QuadSubcell::area(const GaussRule& rule) const {
    double a = 0.0;
    for (int j = 0; j < rule.size(); ++j) {
        const auto [t, wt] = rule.mapped(j, 0.0, 1.0);
        for (int i = 0; i < rule.size(); ++i) {
            const auto [s, ws] = rule.mapped(i, 0.0, 1.0);
            a += ws * wt * jacobian_det(s, t);
        }
    }
    return a;
}

std::vector<Vec2> QuadSubcell::boundary_polyline(int samples_per_side) const {
    std::vector<Vec2> poly;
    auto emit = [&](double s0, double t0, double s1, double t1) {
        for (int k = 0; k < samples_per_side; ++k) {
            const double f = static_cast<double>(k) / samples_per_side;
            poly.push_back(eval(s0 + f * (s1 - s0), t0 + f * (t1 - t0)));
        }
    };
    emit(0, 0, 1, 0);
    emit(1, 0, 1, 1);
    emit(1, 1, 0, 1);
    emit(0, 1, 0, 0);
    poly.push_back(eval(0, 0));
    return poly;
}

TrimmedDomain::TrimmedDomain(const SplineSpace& space) : TrimmedDomain(space, {}) {}

TrimmedDomain::TrimmedDomain(const SplineSpace& space, std::vector<TrimCurve> curves)
    : curves_(std::move(curves)) {
    if (space.dim() != 2) throw std::invalid_argument("TrimmedDomain: expected a surface space");
    bx_ = space.breakpoints(0);
    by_ = space.breakpoints(1);
    nex_ = static_cast<int>(bx_.size()) - 1;
    ney_ = static_cast<int>(by_.size()) - 1;
    deg_[0] = space.degree(0);
    deg_[1] = space.degree(1);
    labels_.assign(static_cast<std::size_t>(nex_) * ney_, CellLabel::Inside);
    cut_subcells_.resize(labels_.size());
    classify(space);
}

void TrimmedDomain::element_bounds(int element, Vec2& lo, Vec2& hi) const {
    const int ei = element % nex_;
    const int ej = element / nex_;
    lo = Vec2(bx_[ei], by_[ej]);
    hi = Vec2(bx_[ei + 1], by_[ej + 1]);
}

const std::vector<QuadSubcell>& TrimmedDomain::subcells(int element) const { return cut_subcells_[element]; }

bool TrimmedDomain::contains(const Vec2& q) const { return point_in_kept_region(curves_, q); }

namespace {
int locate(const std::vector<double>& bp, double v) {
    int i = static_cast<int>(std::upper_bound(bp.begin(), bp.end(), v) - bp.begin()) - 1;
    return std::clamp(i, 0, static_cast<int>(bp.size()) - 2);
}
}  // namespace

void TrimmedDomain::classify(const SplineSpace& space) {
    std::vector<std::vector<Segment>> items(labels_.size());

    if (!curves_.empty()) {
        for (const Segment& piece : monotone_segments(curves_)) {
            const ParamCurve& c = curves_[piece.curve].curve;
            std::vector<double> ts{piece.ta, piece.tb};
            for (int k = 1; k < nex_; ++k)
                for (double r : c.axis_crossings(0, bx_[k], piece.ta, piece.tb)) ts.push_back(r);
            for (int k = 1; k < ney_; ++k)
                for (double r : c.axis_crossings(1, by_[k], piece.ta, piece.tb)) ts.push_back(r);
            std::sort(ts.begin(), ts.end());
            ts.erase(std::unique(ts.begin(), ts.end(),
                                 [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                     ts.end());
            for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
                if (ts[k + 1] - ts[k] < 1e-12) continue;
                const Vec2 mid = c.point(0.5 * (ts[k] + ts[k + 1]));
                const int e = locate(by_, mid[1]) * nex_ + locate(bx_, mid[0]);
                labels_[e] = CellLabel::Cut;
                items[e].push_back({piece.curve, ts[k], ts[k + 1]});
            }
        }
    }

    for (int e = 0; e < num_elements(); ++e) {
        Vec2 lo, hi;
        element_bounds(e, lo, hi);
        if (labels_[e] == CellLabel::Cut) {
            std::vector<QuadSubcell> cells = process_rect(curves_, lo, hi, items[e], 0);
            const double cell_area = (hi[0] - lo[0]) * (hi[1] - lo[1]);
            const GaussRule& rule = gauss_rule(4);
            for (QuadSubcell& c : cells) {
                c.orient();
                if (c.area(rule) > kSliverRatio * cell_area) cut_subcells_[e].push_back(std::move(c));
            }
            if (cut_subcells_[e].empty()) labels_[e] = CellLabel::Outside;
        } else if (!curves_.empty()) {
            labels_[e] = contains(0.5 * (lo + hi)) ? CellLabel::Inside : CellLabel::Outside;
        }
    }

    // a function is active when any element of its open support carries a
    // kept subregion
    const auto& kx = space.knot_vector(0).knots();
    const auto& ky = space.knot_vector(1).knots();
    const int n0 = space.num_functions(0);
    const int n1 = space.num_functions(1);
    active_.assign(static_cast<std::size_t>(n0) * n1, 0);
    for (int j = 0; j < n1; ++j) {
        const int ej0 = locate(by_, ky[j] + 1e-14);
        const int ej1 = locate(by_, ky[j + deg_[1] + 1] - 1e-14);
        for (int i = 0; i < n0; ++i) {
            const int ei0 = locate(bx_, kx[i] + 1e-14);
            const int ei1 = locate(bx_, kx[i + deg_[0] + 1] - 1e-14);
            bool act = false;
            for (int ej = ej0; ej <= ej1 && !act; ++ej)
                for (int ei = ei0; ei <= ei1 && !act; ++ei) {
                    const CellLabel l = labels_[ej * nex_ + ei];
                    act = (l == CellLabel::Inside) ||
                          (l == CellLabel::Cut && !cut_subcells_[ej * nex_ + ei].empty());
                }
            if (act) {
                active_[space.flat_index(i, j)] = 1;
                active_list_.push_back(space.flat_index(i, j));
            }
        }
    }
}

std::vector<QuadPoint2D> TrimmedDomain::element_quadrature(int element, const GaussRule& rule) const {
    std::vector<QuadPoint2D> pts;
    Vec2 lo, hi;
    element_bounds(element, lo, hi);
    switch (labels_[element]) {
        case CellLabel::Outside:
            break;
        case CellLabel::Inside:
            pts = tensor_rule(rule, lo, hi);
            break;
        case CellLabel::Cut: {
            // curved subcells get one extra point: the composed integrand has
            // higher polynomial degree than on straight elements
            const GaussRule& cut_rule = gauss_rule(std::min(rule.size() + 1, 30));
            for (const QuadSubcell& cell : cut_subcells_[element]) {
                for (int j = 0; j < cut_rule.size(); ++j) {
                    const auto [t, wt] = cut_rule.mapped(j, 0.0, 1.0);
                    for (int i = 0; i < cut_rule.size(); ++i) {
                        const auto [s, ws] = cut_rule.mapped(i, 0.0, 1.0);
                        Mat2 jac;
                        const Vec2 uv = cell.eval(s, t, &jac);
                        const double dj = jac.determinant();
                        if (dj <= 0.0)
                            throw std::runtime_error("trim reparametrization: non-positive subcell Jacobian");
                        pts.push_back({uv, ws * wt * dj});
                    }
                }
            }
            break;
        }
    }
    return pts;
}

double TrimmedDomain::kept_area(const GaussRule& rule) const {
    double a = 0.0;
    for (int e = 0; e < num_elements(); ++e)
        for (const QuadPoint2D& qp : element_quadrature(e, rule)) a += qp.weight;
    return a;
}

void TrimmedDomain::dump_subcells(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open subcell dump file " + path);
    for (int e = 0; e < num_elements(); ++e)
        for (const QuadSubcell& cell : cut_subcells_[e]) {
            for (const Vec2& p : cell.boundary_polyline()) out << p[0] << ' ' << p[1] << '\n';
            out << '\n';
        }
}

}  // namespace kl
