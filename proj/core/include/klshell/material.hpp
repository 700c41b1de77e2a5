#pragma once

#include <vector>

#include "klshell/geometry.hpp"
#include "klshell/types.hpp"

namespace kl {

/// Orthotropic in-plane ply constants with the fiber angle measured in the
/// local tangent frame and the ply thickness.
struct Ply {
    double e1 = 0.0;        ///< [Pa]
    double e2 = 0.0;        ///< [Pa]
    double g12 = 0.0;       ///< [Pa]
    double nu12 = 0.0;      ///< [-]
    double angle = 0.0;     ///< fiber angle [rad]
    double thickness = 0.0; ///< [m]
};

/// Shell material: homogeneous isotropic or a laminate stack.
class Material {
public:
    static Material isotropic(double youngs, double poisson, double thickness);
    static Material laminate(std::vector<Ply> plies);

    bool is_isotropic() const { return plies_.empty(); }
    double youngs() const { return e_; }
    double poisson() const { return nu_; }
    double thickness() const { return t_; }  ///< total thickness
    const std::vector<Ply>& plies() const { return plies_; }

    /// Centroid offset of ply n from the laminate mid-plane.
    double ply_offset(int n) const;

private:
    double e_ = 0.0, nu_ = 0.0, t_ = 0.0;
    std::vector<Ply> plies_;
};

/// Homogenized extensional (A), coupling (B) and bending (D) stiffness in
/// Voigt form over the curvilinear frame, strain ordering
/// (e_11, e_22, 2 e_12) in covariant components.
struct ABD {
    Mat3 a = Mat3::Zero();
    Mat3 b = Mat3::Zero();
    Mat3 d = Mat3::Zero();
};

/// Voigt matrix of the homogeneous isotropic constitutive tensor
/// C^{ab,lm} = E/(2(1+nu)) (a^al a^bm + a^am a^bl + 2nu/(1-nu) a^ab a^lm).
Mat3 constitutive_isotropic(const SurfaceFrame& frame, double youngs, double poisson);

/// Ply tensor rotated by the fiber angle and transformed from the local
/// orthonormal tangent frame to curvilinear contravariant components.
Mat3 ply_constitutive(const SurfaceFrame& frame, const Ply& ply);

/// Classical lamination theory sums: A = sum C_n t_n, B = sum C_n t_n z_n,
/// D = sum C_n (t_n z_n^2 + t_n^3/12). Isotropic materials reduce to
/// A = t C, B = 0, D = t^3/12 C.
ABD laminate_abd(const Material& material, const SurfaceFrame& frame);

}  // namespace kl
