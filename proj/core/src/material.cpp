#include "klshell/material.hpp"

#include <cmath>
#include <stdexcept>

namespace kl {

Material Material::isotropic(double youngs, double poisson, double thickness) {
    if (!(youngs > 0.0)) throw std::invalid_argument("material: Young's modulus must be positive");
    if (!(poisson > -1.0 && poisson < 0.5)) throw std::invalid_argument("material: Poisson ratio out of range");
    if (!(thickness > 0.0)) throw std::invalid_argument("material: thickness must be positive");
    Material m;
    m.e_ = youngs;
    m.nu_ = poisson;
    m.t_ = thickness;
    return m;
}

Material Material::laminate(std::vector<Ply> plies) {
    if (plies.empty()) throw std::invalid_argument("laminate: empty stack");
    Material m;
    for (const Ply& p : plies) {
        if (!(p.e1 > 0.0 && p.e2 > 0.0 && p.g12 > 0.0 && p.thickness > 0.0))
            throw std::invalid_argument("laminate: ply constants must be positive");
        if (!(p.nu12 * p.nu12 * p.e2 / p.e1 < 1.0))
            throw std::invalid_argument("laminate: thermodynamically inadmissible ply");
        m.t_ += p.thickness;
    }
    m.plies_ = std::move(plies);
    return m;
}

double Material::ply_offset(int n) const {
    double z = -0.5 * t_;
    for (int k = 0; k < n; ++k) z += plies_[k].thickness;
    return z + 0.5 * plies_[n].thickness;
}

Mat3 constitutive_isotropic(const SurfaceFrame& frame, double youngs, double poisson) {
    const Mat2& ai = frame.metric_inv;
    const double k1 = youngs / (2.0 * (1.0 + poisson));
    const double k2 = k1 * 2.0 * poisson / (1.0 - poisson);
    auto full = [&](int a, int b, int l, int m) {
        return k1 * (ai(a, l) * ai(b, m) + ai(a, m) * ai(b, l)) + k2 * ai(a, b) * ai(l, m);
    };
    // Voigt pairs (11), (22), (12) over contravariant components
    const int pa[3] = {0, 1, 0};
    const int pb[3] = {0, 1, 1};
    Mat3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c(i, j) = full(pa[i], pb[i], pa[j], pb[j]);
    return c;
}

Mat3 ply_constitutive(const SurfaceFrame& frame, const Ply& ply) {
    // reduced stiffness in the fiber frame
    const double nu21 = ply.nu12 * ply.e2 / ply.e1;
    const double den = 1.0 - ply.nu12 * nu21;
    const double q11 = ply.e1 / den;
    const double q22 = ply.e2 / den;
    const double q12 = ply.nu12 * ply.e2 / den;
    const double q66 = ply.g12;

    // rotate by the fiber angle into the local orthonormal tangent frame
    const double c = std::cos(ply.angle), s = std::sin(ply.angle);
    const double c2 = c * c, s2 = s * s;
    const double qb11 = q11 * c2 * c2 + 2 * (q12 + 2 * q66) * s2 * c2 + q22 * s2 * s2;
    const double qb12 = (q11 + q22 - 4 * q66) * s2 * c2 + q12 * (s2 * s2 + c2 * c2);
    const double qb22 = q11 * s2 * s2 + 2 * (q12 + 2 * q66) * s2 * c2 + q22 * c2 * c2;
    const double qb16 = (q11 - q12 - 2 * q66) * s * c2 * c + (q12 - q22 + 2 * q66) * s2 * s * c;
    const double qb26 = (q11 - q12 - 2 * q66) * s2 * s * c + (q12 - q22 + 2 * q66) * s * c2 * c;
    const double qb66 = (q11 + q22 - 2 * q12 - 2 * q66) * s2 * c2 + q66 * (s2 * s2 + c2 * c2);

    // full tensor components in the orthonormal frame
    double q[2][2][2][2] = {};
    q[0][0][0][0] = qb11;
    q[1][1][1][1] = qb22;
    q[0][0][1][1] = q[1][1][0][0] = qb12;
    q[0][1][0][1] = q[1][0][0][1] = q[0][1][1][0] = q[1][0][1][0] = qb66;
    q[0][0][0][1] = q[0][0][1][0] = q[0][1][0][0] = q[1][0][0][0] = qb16;
    q[1][1][0][1] = q[1][1][1][0] = q[0][1][1][1] = q[1][0][1][1] = qb26;

    // local orthonormal tangent frame
    const Vec3 e1 = frame.a1.normalized();
    const Vec3 e2 = frame.a3.cross(e1);
    // components of the contravariant base vectors in that frame
    double m[2][2];  // m[i][alpha] = e_i . a^alpha
    for (int al = 0; al < 2; ++al) {
        m[0][al] = e1.dot(frame.acontra[al]);
        m[1][al] = e2.dot(frame.acontra[al]);
    }

    auto curv = [&](int a, int b, int l, int mu) {
        double v = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int n = 0; n < 2; ++n) v += q[i][j][k][n] * m[i][a] * m[j][b] * m[k][l] * m[n][mu];
        return v;
    };
    const int pa[3] = {0, 1, 0};
    const int pb[3] = {0, 1, 1};
    Mat3 out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out(i, j) = curv(pa[i], pb[i], pa[j], pb[j]);
    return out;
}

ABD laminate_abd(const Material& material, const SurfaceFrame& frame) {
    ABD abd;
    if (material.is_isotropic()) {
        const Mat3 c = constitutive_isotropic(frame, material.youngs(), material.poisson());
        const double t = material.thickness();
        abd.a = t * c;
        abd.d = (t * t * t / 12.0) * c;
        return abd;
    }
    for (std::size_t n = 0; n < material.plies().size(); ++n) {
        const Ply& ply = material.plies()[n];
        const Mat3 c = ply_constitutive(frame, ply);
        const double t = ply.thickness;
        const double z = material.ply_offset(static_cast<int>(n));
        abd.a += c * t;
        abd.b += c * t * z;
        abd.d += c * (t * z * z + t * t * t / 12.0);
    }
    return abd;
}

}  // namespace kl
