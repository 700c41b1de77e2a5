#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "klshell/linear_system.hpp"
#include "klshell/material.hpp"
#include "klshell/trimming.hpp"

namespace kl {

/// One shell mid-surface: geometry map, discretization space, trimmed
/// domain over that space and the material assignment.
struct Patch {
    SurfaceMap geometry;
    SplineSpace space;
    TrimmedDomain domain;
    Material material;

    Patch(SurfaceMap g, SplineSpace s, Material m)
        : geometry(std::move(g)), space(std::move(s)), domain(space), material(std::move(m)) {}
    Patch(SurfaceMap g, SplineSpace s, std::vector<TrimCurve> trims, Material m)
        : geometry(std::move(g)),
          space(std::move(s)),
          domain(space, std::move(trims)),
          material(std::move(m)) {}
};

/// Patch collection with the global dof layout: three Cartesian components
/// per basis function, functions patch by patch.
class PatchSet {
public:
    explicit PatchSet(std::vector<Patch> patches);

    int size() const { return static_cast<int>(patches_.size()); }
    const Patch& operator[](int i) const { return patches_[i]; }
    Patch& operator[](int i) { return patches_[i]; }

    int total_dofs() const { return total_dofs_; }
    int dof(int patch, int function, int component) const {
        return offsets_[patch] + 3 * function + component;
    }
    int active_scalar_dofs() const;

    /// Fixes every inactive-function dof to zero.
    void eliminate_inactive(SparseSymmetricSystem& system) const;

    /// Displacement of a solved coefficient vector at a parametric point.
    Vec3 displacement(int patch, const Eigen::VectorXd& coeffs, const Vec2& uv) const;
    /// Parametric derivatives of the displacement up to `order` (<= 2).
    std::vector<Vec3> displacement_derivatives(int patch, const Eigen::VectorXd& coeffs, const Vec2& uv,
                                               int order) const;

private:
    std::vector<Patch> patches_;
    std::vector<int> offsets_;
    int total_dofs_ = 0;
};

/// Membrane and bending strain operator rows at one quadrature point, Voigt
/// ordering (11, 22, 2*12), columns over local dofs (function-major, three
/// Cartesian components each).
struct StrainOps {
    Eigen::Matrix<double, 3, Eigen::Dynamic> membrane;
    Eigen::Matrix<double, 3, Eigen::Dynamic> bending;
    std::vector<int> functions;  ///< global function indices, one per triple of columns
};

StrainOps strain_ops(const SurfaceFrame& frame, const TensorBasisEval& basis,
                     const std::vector<int>& function_indices);

/// Normal-rotation rows theta_n = Q^i_3 u_{i,alpha} n^alpha over local dofs.
Eigen::RowVectorXd normal_rotation(const SurfaceFrame& frame, const BoundaryTrace& boundary,
                                   const TensorBasisEval& basis);

/// Covariant membrane/bending strains of a displacement field given by its
/// value and parametric derivatives (deriv_index layout, order 2).
void field_strains(const SurfaceFrame& frame, const Vec3 derivs[6], Eigen::Vector3d& membrane,
                   Eigen::Vector3d& bending);

/// Manufactured solution: value and parametric derivatives up to order 2 in
/// the patch parameter domain. out[deriv_index(a,b)] with a+b <= 2.
using ExactSolution = std::function<void(int patch, const Vec2& uv, const SurfaceFrame& frame, Vec3 out[6])>;

struct PointLoad {
    int patch = 0;
    Vec2 uv;
    Vec3 force;  ///< [N]
};

struct EdgeMoment {
    int patch = 0;
    ParamCurve edge;
    std::function<double(const Vec3&)> moment;  ///< B~_nn per arc length
};

/// Loads of a case; any subset may be present.
struct Loads {
    std::function<Vec3(const Vec3&)> area_force;  ///< per undeformed area
    std::vector<PointLoad> point_loads;
    std::vector<EdgeMoment> edge_moments;
    std::optional<ExactSolution> manufactured;  ///< adds f(v) = a(u_ex, v)
};

/// Stiffness of the Kirchhoff-Love bilinear form over all patches,
/// quadrature (p+1)^2 per (sub)element. Throws on degenerate Jacobians
/// naming the element.
void assemble_stiffness(const PatchSet& patches, SparseSymmetricSystem& system);

void assemble_loads(const PatchSet& patches, const Loads& loads, SparseSymmetricSystem& system);

enum class PatchEdge { UMin, UMax, VMin, VMax };

/// Strong Dirichlet data on a patch edge. Without data, the masked
/// components are fixed to zero; with data, the boundary trace is
/// L2-projected per component onto the (possibly trimmed) edge space and
/// corner dofs take exact values. `clamp` also fixes the second row of
/// control points (normal rotation).
struct DirichletEdge {
    int patch = 0;
    PatchEdge edge = PatchEdge::UMin;
    int component_mask = 7;
    bool clamp = false;
    std::function<Vec3(const Vec3&)> data;
};

void apply_dirichlet(const PatchSet& patches, const std::vector<DirichletEdge>& edges,
                     SparseSymmetricSystem& system);

struct ErrorNorms {
    double l2 = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;
    double energy = 0.0;
};

/// Quadrature of |e|^2, |grad e|^2, |grad^2 e|^2 (parametric pullback with
/// the inverse metric) and a(e, e) for e = u_h - u_ex.
ErrorNorms error_norms(const PatchSet& patches, const Eigen::VectorXd& coeffs, const ExactSolution& exact);

/// Legacy-VTK export of the displacement field sampled on a per-element grid.
void write_vtk(const PatchSet& patches, const Eigen::VectorXd& coeffs, const std::string& path,
               int samples_per_element = 3);

}  // namespace kl
