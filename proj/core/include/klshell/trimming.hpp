#pragma once

#include <optional>
#include <string>
#include <vector>

#include "klshell/geometry.hpp"
#include "klshell/quadrature.hpp"
#include "klshell/spline_space.hpp"

namespace kl {

/// Trimming boundary in parameter space. The retained region lies on the
/// left of the travel direction when keep_left is set, on the right
/// otherwise. Endpoints sit on the parametric boundary or at a kink shared
/// with another segment of the same loop.
struct TrimCurve {
    ParamCurve curve;
    bool keep_left = true;
};

/// Bi-polynomial map from [0,1]^2 onto part of one parametric element. One
/// edge traces the trim-curve segment; the rest are straight.
class QuadSubcell {
public:
    /// Plain bilinear quad (triangles collapse two corners).
    static QuadSubcell bilinear(const Vec2& c00, const Vec2& c10, const Vec2& c01, const Vec2& c11);
    /// Ruled blend between the curve segment (t=0 side) and the straight
    /// segment d0 -> d1 (t=1 side).
    static QuadSubcell ruled(ParamCurve curve, double u0, double u1, const Vec2& d0, const Vec2& d1);
    /// Cone from the apex over the curve segment.
    static QuadSubcell cone(ParamCurve curve, double u0, double u1, const Vec2& apex);

    Vec2 eval(double s, double t, Mat2* jacobian = nullptr) const;
    double jacobian_det(double s, double t) const;

    /// Signed area by quadrature (positive after orientation normalization).
    double area(const GaussRule& rule) const;

    /// Flips the s direction so the Jacobian determinant is positive.
    void orient();

    /// Polyline approximation of the mapped boundary, for debug dumps.
    std::vector<Vec2> boundary_polyline(int samples_per_side = 8) const;

private:
    enum class Kind { Bilinear, Ruled, Cone };
    Kind kind_ = Kind::Bilinear;
    std::optional<ParamCurve> curve_;
    double u0_ = 0.0, u1_ = 1.0;
    Vec2 corners_[4];

    Vec2 curve_point(double s, Vec2* dcurve) const;
};

enum class CellLabel { Inside, Outside, Cut };

/// Active/cut/inactive element classification of a spline space against a
/// set of trim curves, with reparametrized quadrature subcells on the cut
/// elements and the active basis-function index set.
class TrimmedDomain {
public:
    /// Untrimmed domain: every element inside, every function active.
    explicit TrimmedDomain(const SplineSpace& space);
    TrimmedDomain(const SplineSpace& space, std::vector<TrimCurve> curves);

    int num_elements() const { return static_cast<int>(labels_.size()); }
    int num_elements(int dir) const { return dir == 0 ? nex_ : ney_; }
    CellLabel label(int element) const { return labels_[element]; }
    CellLabel label(int ei, int ej) const { return labels_[ej * nex_ + ei]; }

    /// Parametric bounds of an element.
    void element_bounds(int element, Vec2& lo, Vec2& hi) const;

    const std::vector<TrimCurve>& curves() const { return curves_; }
    const std::vector<QuadSubcell>& subcells(int element) const;

    bool is_active_function(int flat_index) const { return active_[flat_index] != 0; }
    const std::vector<int>& active_functions() const { return active_list_; }

    /// Quadrature points in parameter space with parametric weights; empty
    /// for outside elements.
    std::vector<QuadPoint2D> element_quadrature(int element, const GaussRule& rule) const;

    /// Kept parametric area by quadrature.
    double kept_area(const GaussRule& rule) const;

    /// Membership test against the trim curves.
    bool contains(const Vec2& q) const;

    /// Writes subcell boundaries as a gnuplot-style polyline file.
    void dump_subcells(const std::string& path) const;

private:
    std::vector<double> bx_, by_;
    int nex_ = 0, ney_ = 0;
    int deg_[2] = {0, 0};
    std::vector<TrimCurve> curves_;
    std::vector<CellLabel> labels_;
    std::vector<std::vector<QuadSubcell>> cut_subcells_;  ///< per element, empty unless cut
    std::vector<char> active_;
    std::vector<int> active_list_;

    void classify(const SplineSpace& space);
};

/// Classification entry point mirroring the pipeline: returns the trimmed
/// domain of `space` for the given curves.
inline TrimmedDomain classify_elements(const SplineSpace& space, std::vector<TrimCurve> curves) {
    return TrimmedDomain(space, std::move(curves));
}

/// Membership of a point in the kept region defined by the curves.
bool point_in_kept_region(const std::vector<TrimCurve>& curves, const Vec2& q);

/// Reparametrizes the kept part of one parametric rectangle into 1-3
/// subcells per monotone curve segment. Throws on unsupported topology.
std::vector<QuadSubcell> reparametrize_cut_element(const std::vector<TrimCurve>& curves, const Vec2& lo,
                                                   const Vec2& hi);

}  // namespace kl
