#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "klshell/coupling.hpp"

namespace kl {

/// Geometry knobs with documented defaults; every benchmark quantity that
/// the acceptance checks use is insensitive to them.
struct CaseConfig {
    double scordelis_load = 90.0;     ///< areal load magnitude, -z [N/m^2]
    double lbeam_length = 2.0;        ///< [m]
    double lbeam_leg = 0.25;          ///< both legs [m]
    double cylinder_radius = 1.0;     ///< [m]
    double cylinder_height = 1.0;     ///< [m]
    double cylinder_span_deg = 90.0;  ///< angular span [deg]
};

/// Single-dof pin at the basis function interpolating a parametric corner,
/// used to remove residual rigid modes.
struct DofPin {
    int patch = 0;
    Vec2 corner;
    int component = 0;
};

/// One assembled refinement level of a benchmark.
struct CaseLevel {
    PatchSet patches;
    MultiPatchModel model;
    Loads loads;
    std::vector<DirichletEdge> bcs;
    std::vector<DofPin> pin_dofs;
    std::optional<ExactSolution> exact;
    std::function<std::vector<std::pair<std::string, double>>(const PatchSet&, const Eigen::VectorXd&)> qois;
};

/// Benchmark descriptor: thickness variants and a level builder. Levels are
/// dyadic refinements of the documented starting meshes; the non-conformity
/// perturbations (sqrt(2)/100 knot shifts, mismatched meshes) are baked in.
struct BenchmarkCase {
    std::string id;
    std::string description;
    std::vector<double> thickness_variants;  ///< first entry is the default
    bool manufactured = false;
    int default_levels = 5;
    std::function<CaseLevel(int level, int degree, double thickness)> build;
};

/// The six shipped benchmarks: four-patch, scordelis-lo, l-beam,
/// three-patch, astroid, cylinder.
std::vector<BenchmarkCase> case_catalogue(const CaseConfig& config = {});

/// Lookup by id; throws on unknown ids.
BenchmarkCase find_case(const std::string& id, const CaseConfig& config = {});

/// Wraps a field given in physical coordinates (value, gradient du_i/dx_j
/// and per-component Hessians) into the parametric closure the assembly
/// expects, chaining through the surface map.
using PhysicalField = std::function<void(const Vec3& x, Vec3& value, Mat3& grad, Mat3 hess[3])>;
ExactSolution physical_solution(PhysicalField field);

}  // namespace kl
