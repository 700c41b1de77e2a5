#include "klshell/shell.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace kl {

PatchSet::PatchSet(std::vector<Patch> patches) : patches_(std::move(patches)) {
    offsets_.resize(patches_.size());
    int off = 0;
    for (std::size_t i = 0; i < patches_.size(); ++i) {
        offsets_[i] = off;
        off += 3 * patches_[i].space.num_functions();
    }
    total_dofs_ = off;
}

int PatchSet::active_scalar_dofs() const {
    int n = 0;
    for (const Patch& p : patches_) n += static_cast<int>(p.domain.active_functions().size());
    return 3 * n;
}

void PatchSet::eliminate_inactive(SparseSymmetricSystem& system) const {
    for (int p = 0; p < size(); ++p) {
        const Patch& patch = patches_[p];
        for (int f = 0; f < patch.space.num_functions(); ++f)
            if (!patch.domain.is_active_function(f))
                for (int c = 0; c < 3; ++c) system.fix_dof(dof(p, f, c), 0.0);
    }
}

Vec3 PatchSet::displacement(int patch, const Eigen::VectorXd& coeffs, const Vec2& uv) const {
    const Patch& pa = patches_[patch];
    const TensorBasisEval e = pa.space.evaluate(uv, 0);
    const std::vector<int> idx = pa.space.global_indices(e);
    Vec3 u = Vec3::Zero();
    for (int f = 0; f < e.num_local(); ++f)
        for (int c = 0; c < 3; ++c) u[c] += e.value(0, f) * coeffs[dof(patch, idx[f], c)];
    return u;
}

std::vector<Vec3> PatchSet::displacement_derivatives(int patch, const Eigen::VectorXd& coeffs,
                                                     const Vec2& uv, int order) const {
    const Patch& pa = patches_[patch];
    const TensorBasisEval e = pa.space.evaluate(uv, order);
    const std::vector<int> idx = pa.space.global_indices(e);
    std::vector<Vec3> out(num_derivs_2d(order), Vec3::Zero());
    for (int d = 0; d < num_derivs_2d(order); ++d)
        for (int f = 0; f < e.num_local(); ++f)
            for (int c = 0; c < 3; ++c) out[d][c] += e.value(d, f) * coeffs[dof(patch, idx[f], c)];
    return out;
}

StrainOps strain_ops(const SurfaceFrame& frame, const TensorBasisEval& basis,
                     const std::vector<int>& function_indices) {
    const int nf = basis.num_local();
    StrainOps ops;
    ops.functions = function_indices;
    ops.membrane.setZero(3, 3 * nf);
    ops.bending.setZero(3, 3 * nf);

    for (int f = 0; f < nf; ++f) {
        const double n1 = basis.value(deriv_index(1, 0), f);
        const double n2 = basis.value(deriv_index(0, 1), f);
        const double n11 = basis.value(deriv_index(2, 0), f);
        const double n12 = basis.value(deriv_index(1, 1), f);
        const double n22 = basis.value(deriv_index(0, 2), f);

        // covariant second derivatives of the scalar function
        const double b11 = n11 - frame.christoffel[0][0][0] * n1 - frame.christoffel[1][0][0] * n2;
        const double b22 = n22 - frame.christoffel[0][1][1] * n1 - frame.christoffel[1][1][1] * n2;
        const double b12 = n12 - frame.christoffel[0][0][1] * n1 - frame.christoffel[1][0][1] * n2;

        for (int c = 0; c < 3; ++c) {
            const int col = 3 * f + c;
            ops.membrane(0, col) = n1 * frame.a1[c];
            ops.membrane(1, col) = n2 * frame.a2[c];
            ops.membrane(2, col) = n1 * frame.a2[c] + n2 * frame.a1[c];
            ops.bending(0, col) = -b11 * frame.a3[c];
            ops.bending(1, col) = -b22 * frame.a3[c];
            ops.bending(2, col) = -2.0 * b12 * frame.a3[c];
        }
    }
    return ops;
}

Eigen::RowVectorXd normal_rotation(const SurfaceFrame& frame, const BoundaryTrace& boundary,
                                   const TensorBasisEval& basis) {
    const int nf = basis.num_local();
    Eigen::RowVectorXd row(3 * nf);
    for (int f = 0; f < nf; ++f) {
        const double dn = basis.value(deriv_index(1, 0), f) * boundary.normal_contra[0] +
                          basis.value(deriv_index(0, 1), f) * boundary.normal_contra[1];
        for (int c = 0; c < 3; ++c) row[3 * f + c] = frame.a3[c] * dn;
    }
    return row;
}

void field_strains(const SurfaceFrame& frame, const Vec3 derivs[6], Eigen::Vector3d& membrane,
                   Eigen::Vector3d& bending) {
    const Vec3& d1 = derivs[deriv_index(1, 0)];
    const Vec3& d2 = derivs[deriv_index(0, 1)];
    const Vec3& d11 = derivs[deriv_index(2, 0)];
    const Vec3& d12 = derivs[deriv_index(1, 1)];
    const Vec3& d22 = derivs[deriv_index(0, 2)];

    membrane[0] = frame.a1.dot(d1);
    membrane[1] = frame.a2.dot(d2);
    membrane[2] = frame.a1.dot(d2) + frame.a2.dot(d1);

    const Vec3 c11 = d11 - frame.christoffel[0][0][0] * d1 - frame.christoffel[1][0][0] * d2;
    const Vec3 c22 = d22 - frame.christoffel[0][1][1] * d1 - frame.christoffel[1][1][1] * d2;
    const Vec3 c12 = d12 - frame.christoffel[0][0][1] * d1 - frame.christoffel[1][0][1] * d2;
    bending[0] = -frame.a3.dot(c11);
    bending[1] = -frame.a3.dot(c22);
    bending[2] = -2.0 * frame.a3.dot(c12);
}

namespace {

int quad_points(const Patch& patch) { return std::max(patch.space.degree(0), patch.space.degree(1)) + 1; }

}  // namespace

void assemble_stiffness(const PatchSet& patches, SparseSymmetricSystem& system) {
    for (int p = 0; p < patches.size(); ++p) {
        const Patch& patch = patches[p];
        const GaussRule& rule = gauss_rule(quad_points(patch));
        for (int e = 0; e < patch.domain.num_elements(); ++e) {
            std::vector<QuadPoint2D> qps;
            try {
                qps = patch.domain.element_quadrature(e, rule);
            } catch (const std::exception& ex) {
                throw std::runtime_error("assembly failed on patch " + std::to_string(p) + " element " +
                                         std::to_string(e) + ": " + ex.what());
            }
            if (qps.empty()) continue;

            Eigen::MatrixXd klocal;
            std::vector<int> funcs;
            bool first = true;
            for (const QuadPoint2D& qp : qps) {
                const SurfaceFrame fr = frame(patch.geometry, qp.uv, 1);
                const TensorBasisEval basis = patch.space.evaluate(qp.uv, 2);
                const std::vector<int> idx = patch.space.global_indices(basis);
                if (first) {
                    funcs = idx;
                    klocal.setZero(3 * idx.size(), 3 * idx.size());
                    first = false;
                }
                const StrainOps ops = strain_ops(fr, basis, idx);
                const ABD abd = laminate_abd(patch.material, fr);
                const double w = qp.weight * fr.jacobian;
                klocal.noalias() += w * (ops.membrane.transpose() * abd.a * ops.membrane +
                                         ops.membrane.transpose() * abd.b * ops.bending +
                                         ops.bending.transpose() * abd.b * ops.membrane +
                                         ops.bending.transpose() * abd.d * ops.bending);
            }
            for (std::size_t i = 0; i < funcs.size(); ++i)
                for (std::size_t j = 0; j < funcs.size(); ++j)
                    for (int ci = 0; ci < 3; ++ci)
                        for (int cj = 0; cj < 3; ++cj)
                            system.add(patches.dof(p, funcs[i], ci), patches.dof(p, funcs[j], cj),
                                       klocal(3 * i + ci, 3 * j + cj));
        }
    }
}

void assemble_loads(const PatchSet& patches, const Loads& loads, SparseSymmetricSystem& system) {
    for (int p = 0; p < patches.size(); ++p) {
        const Patch& patch = patches[p];
        const GaussRule& rule = gauss_rule(quad_points(patch));
        const bool manufactured = loads.manufactured.has_value();
        if (loads.area_force || manufactured) {
            for (int e = 0; e < patch.domain.num_elements(); ++e) {
                for (const QuadPoint2D& qp : patch.domain.element_quadrature(e, rule)) {
                    const SurfaceFrame fr = frame(patch.geometry, qp.uv, manufactured ? 2 : 0);
                    const TensorBasisEval basis = patch.space.evaluate(qp.uv, manufactured ? 2 : 0);
                    const std::vector<int> idx = patch.space.global_indices(basis);
                    const double w = qp.weight * fr.jacobian;

                    if (loads.area_force) {
                        const Vec3 f = loads.area_force(fr.x);
                        for (int i = 0; i < basis.num_local(); ++i) {
                            const double v = w * basis.value(0, i);
                            for (int c = 0; c < 3; ++c)
                                system.add_rhs(patches.dof(p, idx[i], c), v * f[c]);
                        }
                    }
                    if (manufactured) {
                        Vec3 uex[6];
                        (*loads.manufactured)(p, qp.uv, fr, uex);
                        Eigen::Vector3d mex, bex;
                        field_strains(fr, uex, mex, bex);
                        const ABD abd = laminate_abd(patch.material, fr);
                        const Eigen::Vector3d nres = abd.a * mex + abd.b * bex;
                        const Eigen::Vector3d mres = abd.b * mex + abd.d * bex;
                        const StrainOps ops = strain_ops(fr, basis, idx);
                        const Eigen::VectorXd fe =
                            w * (ops.membrane.transpose() * nres + ops.bending.transpose() * mres);
                        for (int i = 0; i < basis.num_local(); ++i)
                            for (int c = 0; c < 3; ++c)
                                system.add_rhs(patches.dof(p, idx[i], c), fe[3 * i + c]);
                    }
                }
            }
        }
    }

    for (const PointLoad& pl : loads.point_loads) {
        const Patch& patch = patches[pl.patch];
        if (!patch.domain.contains(pl.uv))
            throw std::runtime_error("point load lies outside the kept region of its patch");
        const TensorBasisEval basis = patch.space.evaluate(pl.uv, 0);
        const std::vector<int> idx = patch.space.global_indices(basis);
        for (int i = 0; i < basis.num_local(); ++i)
            for (int c = 0; c < 3; ++c)
                system.add_rhs(patches.dof(pl.patch, idx[i], c), basis.value(0, i) * pl.force[c]);
    }

    for (const EdgeMoment& em : loads.edge_moments) {
        const Patch& patch = patches[em.patch];
        const GaussRule& rule = gauss_rule(quad_points(patch));
        // segment the edge curve at the patch knot-line crossings
        std::vector<double> ts{0.0, 1.0};
        for (int comp = 0; comp < 2; ++comp) {
            double cmin = em.edge.control_points()[0][comp], cmax = cmin;
            for (const Vec2& cp : em.edge.control_points()) {
                cmin = std::min(cmin, cp[comp]);
                cmax = std::max(cmax, cp[comp]);
            }
            if (cmax - cmin < 1e-12) continue;  // edge runs along this coordinate
            for (double v : patch.space.breakpoints(comp)) {
                if (v < cmin + 1e-12 || v > cmax - 1e-12) continue;
                for (double r : em.edge.axis_crossings(comp, v)) ts.push_back(r);
            }
        }
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                 ts.end());
        for (std::size_t s = 0; s + 1 < ts.size(); ++s) {
            for (int g = 0; g < rule.size(); ++g) {
                const auto [t, wt] = rule.mapped(g, ts[s], ts[s + 1]);
                const BoundaryTrace tr = boundary_trace(patch.geometry, em.edge, t);
                const TensorBasisEval basis = patch.space.evaluate(tr.uv, 1);
                const std::vector<int> idx = patch.space.global_indices(basis);
                const Eigen::RowVectorXd theta = normal_rotation(tr.frame, tr, basis);
                const double w = wt * tr.arc_jacobian * em.moment(tr.x);
                for (int i = 0; i < basis.num_local(); ++i)
                    for (int c = 0; c < 3; ++c)
                        system.add_rhs(patches.dof(em.patch, idx[i], c), w * theta[3 * i + c]);
            }
        }
    }
}

namespace {

struct EdgeGeometry {
    ParamCurve curve;       ///< edge as a parametric curve, t in [0, 1]
    int row_dir;            ///< direction across the edge (0: xi rows, 1: eta rows)
    int along_dir;          ///< direction along the edge
};

EdgeGeometry edge_geometry(const Patch&, PatchEdge edge) {
    switch (edge) {
        case PatchEdge::UMin:
            return {ParamCurve::line(Vec2(0, 0), Vec2(0, 1)), 0, 1};
        case PatchEdge::UMax:
            return {ParamCurve::line(Vec2(1, 0), Vec2(1, 1)), 0, 1};
        case PatchEdge::VMin:
            return {ParamCurve::line(Vec2(0, 0), Vec2(1, 0)), 1, 0};
        case PatchEdge::VMax:
            return {ParamCurve::line(Vec2(0, 1), Vec2(1, 1)), 1, 0};
    }
    throw std::logic_error("bad edge");
}

int edge_function(const Patch& patch, PatchEdge edge, int row, int along) {
    switch (edge) {
        case PatchEdge::UMin:
            return patch.space.flat_index(row, along);
        case PatchEdge::UMax:
            return patch.space.flat_index(patch.space.num_functions(0) - 1 - row, along);
        case PatchEdge::VMin:
            return patch.space.flat_index(along, row);
        case PatchEdge::VMax:
            return patch.space.flat_index(along, patch.space.num_functions(1) - 1 - row);
    }
    throw std::logic_error("bad edge");
}

// kept sub-intervals of the edge parameter against the patch trimming
std::vector<std::pair<double, double>> edge_kept_intervals(const Patch& patch, const EdgeGeometry& eg) {
    std::vector<double> ts{0.0, 1.0};
    const Vec2 p0 = eg.curve.point(0.0);
    for (const TrimCurve& tc : patch.domain.curves()) {
        // crossings with the edge line (constant in the row direction)
        for (double r : tc.curve.axis_crossings(eg.row_dir, p0[eg.row_dir])) {
            const Vec2 q = tc.curve.point(r);
            ts.push_back(q[eg.along_dir]);
        }
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end(), [](double a, double b) { return std::abs(a - b) < 1e-10; }),
             ts.end());

    std::vector<std::pair<double, double>> kept;
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        if (ts[k + 1] - ts[k] < 1e-10) continue;
        // probe slightly inside the domain
        Vec2 probe = eg.curve.point(0.5 * (ts[k] + ts[k + 1]));
        probe[eg.row_dir] += (probe[eg.row_dir] < 0.5) ? 1e-7 : -1e-7;
        if (patch.domain.contains(probe)) kept.emplace_back(ts[k], ts[k + 1]);
    }
    return kept;
}

}  // namespace

void apply_dirichlet(const PatchSet& patches, const std::vector<DirichletEdge>& edges,
                     SparseSymmetricSystem& system) {
    for (const DirichletEdge& bc : edges) {
        const Patch& patch = patches[bc.patch];
        const EdgeGeometry eg = edge_geometry(patch, bc.edge);
        const KnotVector& kv = patch.space.knot_vector(eg.along_dir);
        const int n_along = kv.num_functions();
        const int p = kv.degree();

        const auto kept = edge_kept_intervals(patch, eg);
        auto overlaps_kept = [&](int j) {
            const double lo = kv.knots()[j];
            const double hi = kv.knots()[j + p + 1];
            for (auto [a, b] : kept)
                if (std::min(hi, b) - std::max(lo, a) > 1e-10) return true;
            return false;
        };

        if (bc.data && bc.clamp)
            throw std::invalid_argument("clamped edges with nonzero data are not supported");

        if (!bc.data) {
            for (int j = 0; j < n_along; ++j) {
                if (!overlaps_kept(j)) continue;
                for (int c = 0; c < 3; ++c) {
                    if (!(bc.component_mask & (1 << c))) continue;
                    system.fix_dof(patches.dof(bc.patch, edge_function(patch, bc.edge, 0, j), c), 0.0);
                    if (bc.clamp)
                        system.fix_dof(patches.dof(bc.patch, edge_function(patch, bc.edge, 1, j), c), 0.0);
                }
            }
            continue;
        }

        // L2 projection of the data onto the edge trace space over the kept
        // intervals, arc-length measure
        std::vector<int> funcs;
        for (int j = 0; j < n_along; ++j)
            if (overlaps_kept(j)) funcs.push_back(j);
        if (funcs.empty()) continue;
        std::vector<int> pos(n_along, -1);
        for (std::size_t k = 0; k < funcs.size(); ++k) pos[funcs[k]] = static_cast<int>(k);

        const int m = static_cast<int>(funcs.size());
        Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(m, m);
        Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m, 3);
        const GaussRule& rule = gauss_rule(p + 2);
        for (auto [a, b] : kept) {
            // refine by the knot spans inside the interval
            std::vector<double> seg{a, b};
            for (double t : kv.breakpoints())
                if (t > a + 1e-12 && t < b - 1e-12) seg.push_back(t);
            std::sort(seg.begin(), seg.end());
            for (std::size_t s = 0; s + 1 < seg.size(); ++s)
                for (int g = 0; g < rule.size(); ++g) {
                    const auto [t, wt] = rule.mapped(g, seg[s], seg[s + 1]);
                    const BoundaryTrace tr = boundary_trace(patch.geometry, eg.curve, t, 0);
                    const BasisEval1D be = kv.evaluate(t, 0);
                    const Vec3 g3 = bc.data(tr.x);
                    const double w = wt * tr.arc_jacobian;
                    for (int i = 0; i <= p; ++i) {
                        const int gi = pos[be.first_function() + i];
                        if (gi < 0) continue;
                        for (int j = 0; j <= p; ++j) {
                            const int gj = pos[be.first_function() + j];
                            if (gj < 0) continue;
                            mass(gi, gj) += w * be.value(0, i) * be.value(0, j);
                        }
                        for (int c = 0; c < 3; ++c) rhs(gi, c) += w * be.value(0, i) * g3[c];
                    }
                }
        }
        const Eigen::MatrixXd sol = mass.ldlt().solve(rhs);
        for (int k = 0; k < m; ++k)
            for (int c = 0; c < 3; ++c) {
                if (!(bc.component_mask & (1 << c))) continue;
                system.fix_dof(patches.dof(bc.patch, edge_function(patch, bc.edge, 0, funcs[k]), c),
                               sol(k, c));
            }
        // corner control points interpolate: take exact values where kept
        for (int corner : {0, n_along - 1}) {
            const double t = (corner == 0) ? 0.0 : 1.0;
            bool corner_kept = false;
            for (auto [a, b] : kept)
                if (t > a - 1e-10 && t < b + 1e-10) corner_kept = true;
            if (!corner_kept) continue;
            const BoundaryTrace tr = boundary_trace(patch.geometry, eg.curve, t, 0);
            const Vec3 g3 = bc.data(tr.x);
            for (int c = 0; c < 3; ++c) {
                if (!(bc.component_mask & (1 << c))) continue;
                system.fix_dof(patches.dof(bc.patch, edge_function(patch, bc.edge, 0, corner), c), g3[c]);
            }
        }
    }
}

ErrorNorms error_norms(const PatchSet& patches, const Eigen::VectorXd& coeffs, const ExactSolution& exact) {
    double l2 = 0.0, h1s = 0.0, h2s = 0.0, en = 0.0;
    for (int p = 0; p < patches.size(); ++p) {
        const Patch& patch = patches[p];
        const GaussRule& rule = gauss_rule(quad_points(patch) + 1);
        for (int e = 0; e < patch.domain.num_elements(); ++e) {
            for (const QuadPoint2D& qp : patch.domain.element_quadrature(e, rule)) {
                const SurfaceFrame fr = frame(patch.geometry, qp.uv, 2);
                Vec3 uex[6];
                exact(p, qp.uv, fr, uex);
                const std::vector<Vec3> uh = patches.displacement_derivatives(p, coeffs, qp.uv, 2);
                Vec3 err[6];
                for (int d = 0; d < 6; ++d) err[d] = uh[d] - uex[d];

                const double w = qp.weight * fr.jacobian;
                l2 += w * err[0].squaredNorm();
                const Mat2& ai = fr.metric_inv;
                const Vec3 g[2] = {err[deriv_index(1, 0)], err[deriv_index(0, 1)]};
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) h1s += w * ai(a, b) * g[a].dot(g[b]);
                const Vec3 h[2][2] = {
                    {err[deriv_index(2, 0)], err[deriv_index(1, 1)]},
                    {err[deriv_index(1, 1)], err[deriv_index(0, 2)]}};
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        for (int c = 0; c < 2; ++c)
                            for (int d = 0; d < 2; ++d)
                                h2s += w * ai(a, c) * ai(b, d) * h[a][b].dot(h[c][d]);

                Eigen::Vector3d me, be;
                field_strains(fr, err, me, be);
                const ABD abd = laminate_abd(patch.material, fr);
                en += w * (me.dot(abd.a * me) + 2.0 * me.dot(abd.b * be) + be.dot(abd.d * be));
            }
        }
    }
    ErrorNorms norms;
    norms.l2 = std::sqrt(l2);
    norms.h1 = std::sqrt(l2 + h1s);
    norms.h2 = std::sqrt(l2 + h1s + h2s);
    norms.energy = std::sqrt(std::max(0.0, en));
    return norms;
}

void write_vtk(const PatchSet& patches, const Eigen::VectorXd& coeffs, const std::string& path,
               int samples_per_element) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open VTK output file " + path);
    const int m = std::max(2, samples_per_element);

    std::vector<Vec3> points;
    std::vector<Vec3> values;
    std::vector<std::array<int, 4>> cells;
    for (int p = 0; p < patches.size(); ++p) {
        const Patch& patch = patches[p];
        for (int e = 0; e < patch.domain.num_elements(); ++e) {
            if (patch.domain.label(e) == CellLabel::Outside) continue;
            Vec2 lo, hi;
            patch.domain.element_bounds(e, lo, hi);
            const int base = static_cast<int>(points.size());
            for (int j = 0; j < m; ++j)
                for (int i = 0; i < m; ++i) {
                    const Vec2 uv(lo[0] + (hi[0] - lo[0]) * i / (m - 1.0),
                                  lo[1] + (hi[1] - lo[1]) * j / (m - 1.0));
                    points.push_back(patch.geometry.point(uv));
                    values.push_back(patches.displacement(p, coeffs, uv));
                }
            for (int j = 0; j + 1 < m; ++j)
                for (int i = 0; i + 1 < m; ++i)
                    cells.push_back({base + j * m + i, base + j * m + i + 1, base + (j + 1) * m + i + 1,
                                     base + (j + 1) * m + i});
        }
    }

    out << "# vtk DataFile Version 3.0\nshell displacement\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << points.size() << " double\n";
    for (const Vec3& x : points) out << x[0] << ' ' << x[1] << ' ' << x[2] << '\n';
    out << "CELLS " << cells.size() << ' ' << 5 * cells.size() << '\n';
    for (const auto& c : cells) out << "4 " << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << c[3] << '\n';
    out << "CELL_TYPES " << cells.size() << '\n';
    for (std::size_t i = 0; i < cells.size(); ++i) out << "9\n";
    out << "POINT_DATA " << points.size() << "\nVECTORS displacement double\n";
    for (const Vec3& v : values) out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
}

}  // namespace kl
