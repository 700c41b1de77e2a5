#pragma once

#include <utility>
#include <vector>

#include "klshell/shell.hpp"

namespace kl {

/// One coupling edge between two patches, with the parametric preimage of
/// the shared physical curve on both sides.
struct InterfaceDef {
    int patch_a = 0;
    int patch_b = 0;
    ParamCurve preimage_a;
    ParamCurve preimage_b;
    int active = -1;  ///< -1 auto (finer side along the curve), else 0 or 1
};

/// Vertex where at least three interface edges meet; carries the incident
/// (patch, parametric location) pairs.
struct CrossPointDef {
    std::vector<std::pair<int, Vec2>> incidents;
};

struct MultiPatchModel {
    std::vector<InterfaceDef> interfaces;
    std::vector<CrossPointDef> cross_points;
};

enum class PenaltyMethod { Classic, Scaled, Projected };

struct PenaltyStrategy {
    PenaltyMethod method = PenaltyMethod::Projected;
    int beta_offset = 1;  ///< beta = p + beta_offset, offset in {-1, 0, +1}
    double delta = 1e3;   ///< constant for the classic and scaled baselines
};

struct PenaltyCoefficients {
    double disp = 0.0;
    double rot = 0.0;
};

/// Quadrature point of the interface intersection mesh: active-side curve
/// parameter, arc-length weight and the parametric preimages on both sides.
struct InterfaceQuadPoint {
    double t = 0.0;
    double weight = 0.0;  ///< includes the arc Jacobian
    double t_b = 0.0;
    Vec2 uv_a, uv_b;
};

/// Interface knot vector, degree-reduced space and intersection mesh of one
/// coupling edge.
struct InterfaceSpace {
    int active = 0;  ///< 0: patch_a side is active
    int degree = 0;  ///< discretization degree p of the active side
    KnotVector xi;
    SplineSpace reduced;
    std::vector<double> intersection;  ///< breakpoints in the active curve parameter
    std::vector<InterfaceQuadPoint> qpoints;
    double length = 0.0;  ///< |gamma| [m]
    double h = 0.0;       ///< characteristic interface mesh size [m]
};

/// Builds the interface space: Xi from the active-side knot-line crossings
/// (internal knots of the coupling curve disregarded), reduced p-2 space,
/// intersection mesh merging both sides, p+1 Gauss points per segment.
/// Throws when the preimages are not watertight.
InterfaceSpace build_interface(const PatchSet& patches, const InterfaceDef& def);

/// Penalty pair per the selected strategy. Isotropic pairs use
/// alpha_disp = |gamma|^(beta-1) E t / (h^beta (1 - nu^2)) and
/// alpha_rot = alpha_disp t^2 / 12 (projected), the Herrema scaling with
/// delta / h (scaled), or delta * E for both (classic); laminates switch to
/// the minimum-local-stiffness composite rule.
PenaltyCoefficients penalty_parameters(const PenaltyStrategy& strategy, const InterfaceSpace& iface,
                                       const PatchSet& patches, const InterfaceDef& def);

/// Mass matrix of the reduced space (arc measure) and right-hand-side
/// matrices pairing the reduced basis with the displacement jump and the
/// two complementary rotation-jump terms.
struct ProjectionOperator {
    Eigen::MatrixXd mass;
    Eigen::MatrixXd f_disp;          ///< m x n_scalar, per displacement component
    Eigen::MatrixXd f_rot1, f_rot2;  ///< m x 3 n_scalar
    std::vector<std::pair<int, int>> scalar_dofs;  ///< (patch, function)
};

ProjectionOperator projection_matrices(const PatchSet& patches, const InterfaceDef& def,
                                       const InterfaceSpace& iface);

/// Adds the coupling terms to the system: the projected realization
/// alpha F^T M^{-1} F for the projected strategy, the plain pointwise
/// penalty on the intersection mesh otherwise.
void assemble_penalty(const PatchSet& patches, const InterfaceDef& def, const InterfaceSpace& iface,
                      const ProjectionOperator& proj, const PenaltyCoefficients& coef,
                      PenaltyMethod method, SparseSymmetricSystem& system);

struct BuiltInterface {
    InterfaceDef def;
    InterfaceSpace space;
    PenaltyCoefficients coef;
};

/// C0 continuity at cross-points: master-slave corner ties when every
/// incident location is a patch corner, a point-penalty with coefficient
/// alpha_disp * h per incident interface otherwise.
void cross_point_constraints(const PatchSet& patches, const std::vector<CrossPointDef>& cross_points,
                             const std::vector<BuiltInterface>& interfaces,
                             SparseSymmetricSystem& system);

/// Full coupling pass over a model; returns the built interfaces.
std::vector<BuiltInterface> couple_patches(const PatchSet& patches, const MultiPatchModel& model,
                                           const PenaltyStrategy& strategy, SparseSymmetricSystem& system);

}  // namespace kl
