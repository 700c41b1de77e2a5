#include "klshell/coupling.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace kl {

namespace {

double model_scale(const PatchSet& patches) {
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (int p = 0; p < patches.size(); ++p)
        for (const Vec3& c : patches[p].geometry.control_points()) {
            lo = lo.cwiseMin(c);
            hi = hi.cwiseMax(c);
        }
    return std::max((hi - lo).norm(), 1e-12);
}

// curve parameters where the preimage crosses the interior knot lines of
// its patch's discretization space
std::vector<double> knot_line_crossings(const ParamCurve& curve, const SplineSpace& space) {
    std::vector<double> ts;
    for (int comp = 0; comp < 2; ++comp) {
        double cmin = curve.control_points()[0][comp], cmax = cmin;
        for (const Vec2& cp : curve.control_points()) {
            cmin = std::min(cmin, cp[comp]);
            cmax = std::max(cmax, cp[comp]);
        }
        if (cmax - cmin < 1e-12) continue;  // curve runs along this coordinate
        const std::vector<double> bp = space.breakpoints(comp);
        for (std::size_t k = 1; k + 1 < bp.size(); ++k) {
            if (bp[k] < cmin - 1e-12 || bp[k] > cmax + 1e-12) continue;
            for (double r : curve.axis_crossings(comp, bp[k])) ts.push_back(r);
        }
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end(), [](double a, double b) { return std::abs(a - b) < 1e-10; }),
             ts.end());
    return ts;
}

// matches the passive-side curve parameter to a physical point by damped
// Gauss-Newton along the curve
double match_parameter(const SurfaceMap& map, const ParamCurve& curve, const Vec3& x, double guess) {
    double t = std::clamp(guess, 0.0, 1.0);
    for (int it = 0; it < 60; ++it) {
        const Vec2 uv = curve.point(t);
        const Vec2 du = curve.derivative(t, 1);
        const std::vector<Vec3> F = map.derivatives(uv, 1);
        const Vec3 r = F[0] - x;
        const Vec3 tang = F[deriv_index(1, 0)] * du[0] + F[deriv_index(0, 1)] * du[1];
        const double denom = tang.squaredNorm();
        if (denom < 1e-30) break;
        const double step = r.dot(tang) / denom;
        double tn = std::clamp(t - step, 0.0, 1.0);
        if (std::abs(tn - t) < 1e-15) { t = tn; break; }
        t = tn;
    }
    return t;
}

struct SideFrames {
    BoundaryTrace a, b;
};

// per-quadrature-point penalty rows over the interface-local dofs
struct QpRows {
    Eigen::RowVectorXd jump;        ///< scalar displacement jump (per component)
    Eigen::RowVectorXd rot1, rot2;  ///< rotation jump terms over 3n dofs
};

struct LocalDofs {
    std::vector<std::pair<int, int>> scalar;        ///< (patch, function)
    std::map<std::pair<int, int>, int> index;

    int add(int patch, int function) {
        const auto key = std::make_pair(patch, function);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        const int id = static_cast<int>(scalar.size());
        scalar.push_back(key);
        index.emplace(key, id);
        return id;
    }
};

}  // namespace

InterfaceSpace build_interface(const PatchSet& patches, const InterfaceDef& def) {
    const Patch& pa = patches[def.patch_a];
    const Patch& pb = patches[def.patch_b];

    const std::vector<double> cross_a = knot_line_crossings(def.preimage_a, pa.space);
    const std::vector<double> cross_b = knot_line_crossings(def.preimage_b, pb.space);

    int active = def.active;
    if (active < 0) active = (cross_b.size() > cross_a.size()) ? 1 : 0;

    const Patch& act = (active == 0) ? pa : pb;
    const Patch& pas = (active == 0) ? pb : pa;
    const ParamCurve& curve_act = (active == 0) ? def.preimage_a : def.preimage_b;
    const ParamCurve& curve_pas = (active == 0) ? def.preimage_b : def.preimage_a;
    const std::vector<double>& ts_act = (active == 0) ? cross_a : cross_b;
    const std::vector<double>& ts_pas = (active == 0) ? cross_b : cross_a;

    if (act.space.degree(0) != act.space.degree(1))
        throw std::invalid_argument("interface: anisotropic degrees are not supported");
    const int p = act.space.degree(0);

    // interface knot vector from the active-side crossings, open ends
    std::vector<double> knots;
    for (int i = 0; i <= p; ++i) knots.push_back(0.0);
    for (double t : ts_act)
        if (t > 1e-10 && t < 1.0 - 1e-10) knots.push_back(t);
    for (int i = 0; i <= p; ++i) knots.push_back(1.0);
    KnotVector xi(knots, p);

    InterfaceSpace iface{active, p, xi, SplineSpace(reduced_knot_vector(xi)), {}, {}, 0.0, 0.0};

    const double wtol = 1e-10 * model_scale(patches);

    // quick identity check: do the preimages traverse the same physical curve
    // with the same parameter?
    bool identical = true;
    for (int s = 0; s <= 6; ++s) {
        const double t = static_cast<double>(s) / 6;
        if ((act.geometry.point(curve_act.point(t)) - pas.geometry.point(curve_pas.point(t))).norm() > wtol) {
            identical = false;
            break;
        }
    }

    // intersection mesh: active breakpoints plus passive crossings mapped to
    // the active parameter
    std::vector<double> merged{0.0, 1.0};
    merged.insert(merged.end(), ts_act.begin(), ts_act.end());
    for (double tau : ts_pas) {
        if (identical) {
            merged.push_back(tau);
        } else {
            const Vec3 x = pas.geometry.point(curve_pas.point(tau));
            const double t = match_parameter(act.geometry, curve_act, x, tau);
            if ((act.geometry.point(curve_act.point(t)) - x).norm() > 10 * wtol)
                throw std::runtime_error("interface preimages are not watertight");
            merged.push_back(t);
        }
    }
    std::sort(merged.begin(), merged.end());
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](double t) { return t < -1e-12 || t > 1.0 + 1e-12; }),
                 merged.end());
    merged.erase(std::unique(merged.begin(), merged.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-10; }),
                 merged.end());
    iface.intersection = merged;

    const GaussRule& rule = gauss_rule(p + 1);
    double prev_match = 0.0;
    for (std::size_t s = 0; s + 1 < merged.size(); ++s) {
        for (int g = 0; g < rule.size(); ++g) {
            const auto [t, wt] = rule.mapped(g, merged[s], merged[s + 1]);
            InterfaceQuadPoint qp;
            qp.t = t;
            qp.uv_a = curve_act.point(t);
            const Vec2 dc = curve_act.derivative(t, 1);
            const std::vector<Vec3> F = act.geometry.derivatives(qp.uv_a, 1);
            const Vec3 tang = F[deriv_index(1, 0)] * dc[0] + F[deriv_index(0, 1)] * dc[1];
            qp.weight = wt * tang.norm();

            if (identical) {
                qp.t_b = t;
            } else {
                qp.t_b = match_parameter(pas.geometry, curve_pas, F[0], prev_match > 0 ? prev_match : t);
                prev_match = qp.t_b;
            }
            qp.uv_b = curve_pas.point(qp.t_b);
            if ((pas.geometry.point(qp.uv_b) - F[0]).norm() > 10 * wtol)
                throw std::runtime_error("interface preimages are not watertight");
            iface.qpoints.push_back(qp);
            iface.length += qp.weight;
        }
    }
    const int segments = std::max(1, static_cast<int>(iface.xi.breakpoints().size()) - 1);
    iface.h = iface.length / segments;
    return iface;
}

PenaltyCoefficients penalty_parameters(const PenaltyStrategy& strategy, const InterfaceSpace& iface,
                                       const PatchSet& patches, const InterfaceDef& def) {
    const Material& ma = patches[def.patch_a].material;
    const Material& mb = patches[def.patch_b].material;
    PenaltyCoefficients coef;

    const bool iso = ma.is_isotropic() && mb.is_isotropic();
    if (strategy.method == PenaltyMethod::Classic) {
        if (!iso) throw std::invalid_argument("classic penalty requires isotropic materials");
        const double e = std::min(ma.youngs(), mb.youngs());
        coef.disp = strategy.delta * e;
        coef.rot = strategy.delta * e;
        return coef;
    }

    if (iso) {
        auto pair_for = [&](const Material& m) {
            PenaltyCoefficients c;
            const double stiff = m.youngs() * m.thickness() / (1.0 - m.poisson() * m.poisson());
            if (strategy.method == PenaltyMethod::Scaled) {
                c.disp = strategy.delta * stiff / iface.h;
                c.rot = strategy.delta * stiff * m.thickness() * m.thickness() / (12.0 * iface.h);
            } else {
                const double beta = iface.degree + strategy.beta_offset;
                const double scale = std::pow(iface.length, beta - 1.0) / std::pow(iface.h, beta);
                c.disp = scale * stiff;
                c.rot = scale * stiff * m.thickness() * m.thickness() / 12.0;
            }
            return c;
        };
        const PenaltyCoefficients ca = pair_for(ma);
        const PenaltyCoefficients cb = pair_for(mb);
        coef.disp = std::min(ca.disp, cb.disp);
        coef.rot = std::min(ca.rot, cb.rot);
        return coef;
    }

    // composite rule: minimum over the patches of the largest ABD entry,
    // evaluated at the middle of the interface
    const InterfaceQuadPoint& mid = iface.qpoints[iface.qpoints.size() / 2];
    const SurfaceFrame fa = frame(patches[def.patch_a].geometry, (iface.active == 0) ? mid.uv_a : mid.uv_b, 0);
    const SurfaceFrame fb = frame(patches[def.patch_b].geometry, (iface.active == 0) ? mid.uv_b : mid.uv_a, 0);
    const ABD abd_a = laminate_abd(ma, fa);
    const ABD abd_b = laminate_abd(mb, fb);
    const double amax = std::min(abd_a.a.cwiseAbs().maxCoeff(), abd_b.a.cwiseAbs().maxCoeff());
    const double dmax = std::min(abd_a.d.cwiseAbs().maxCoeff(), abd_b.d.cwiseAbs().maxCoeff());
    double scale;
    if (strategy.method == PenaltyMethod::Scaled) {
        scale = strategy.delta / iface.h;
    } else {
        const double beta = iface.degree + strategy.beta_offset;
        scale = std::pow(iface.length, beta - 1.0) / std::pow(iface.h, beta);
    }
    coef.disp = scale * amax;
    coef.rot = scale * dmax;
    return coef;
}

namespace {

// assembles the per-point rows; shared by the projection and the plain
// pointwise penalties
void interface_rows(const PatchSet& patches, const InterfaceDef& def, const InterfaceSpace& iface,
                    LocalDofs& dofs, std::vector<QpRows>& rows) {
    const int pa = (iface.active == 0) ? def.patch_a : def.patch_b;
    const int pb = (iface.active == 0) ? def.patch_b : def.patch_a;
    const ParamCurve& ca = (iface.active == 0) ? def.preimage_a : def.preimage_b;
    const ParamCurve& cb = (iface.active == 0) ? def.preimage_b : def.preimage_a;

    // first pass: collect the local scalar dofs
    std::vector<TensorBasisEval> eva, evb;
    std::vector<std::vector<int>> ida, idb;
    eva.reserve(iface.qpoints.size());
    for (const InterfaceQuadPoint& qp : iface.qpoints) {
        eva.push_back(patches[pa].space.evaluate(qp.uv_a, 1));
        evb.push_back(patches[pb].space.evaluate(qp.uv_b, 1));
        ida.push_back(patches[pa].space.global_indices(eva.back()));
        idb.push_back(patches[pb].space.global_indices(evb.back()));
        for (int f : ida.back()) dofs.add(pa, f);
        for (int f : idb.back()) dofs.add(pb, f);
    }
    const int n = static_cast<int>(dofs.scalar.size());

    rows.resize(iface.qpoints.size());
    for (std::size_t q = 0; q < iface.qpoints.size(); ++q) {
        const InterfaceQuadPoint& qp = iface.qpoints[q];
        QpRows& r = rows[q];
        r.jump.setZero(n);
        r.rot1.setZero(3 * n);
        r.rot2.setZero(3 * n);

        const BoundaryTrace tra = boundary_trace(patches[pa].geometry, ca, qp.t, 1);
        const BoundaryTrace trb = boundary_trace(patches[pb].geometry, cb, qp.t_b, 1);
        const Vec3 T = tra.tangent;
        const Vec3 n_a = tra.normal;
        const double sigma = (tra.frame.a3.cross(T).dot(n_a) >= 0.0) ? 1.0 : -1.0;

        // active side
        for (int f = 0; f < eva[q].num_local(); ++f) {
            const int lf = dofs.index.at({pa, ida[q][f]});
            const double n1 = eva[q].value(deriv_index(1, 0), f);
            const double n2 = eva[q].value(deriv_index(0, 1), f);
            r.jump[lf] += eva[q].value(0, f);

            const Vec3 gvec = n1 * tra.frame.acontra[0] + n2 * tra.frame.acontra[1];
            const double dT = n1 * T.dot(tra.frame.acontra[0]) + n2 * T.dot(tra.frame.acontra[1]);
            for (int c = 0; c < 3; ++c) {
                const Vec3 da3 = -tra.frame.a3[c] * gvec;
                Vec3 dTvec = Vec3::Zero();
                dTvec[c] = dT;
                dTvec -= T * (dT * T[c]);
                const Vec3 dan = sigma * (da3.cross(T) + tra.frame.a3.cross(dTvec));
                r.rot1[3 * lf + c] += da3.dot(trb.frame.a3);
                r.rot2[3 * lf + c] += dan.dot(trb.frame.a3);
            }
        }
        // passive side
        for (int f = 0; f < evb[q].num_local(); ++f) {
            const int lf = dofs.index.at({pb, idb[q][f]});
            const double n1 = evb[q].value(deriv_index(1, 0), f);
            const double n2 = evb[q].value(deriv_index(0, 1), f);
            r.jump[lf] -= evb[q].value(0, f);

            const Vec3 gvec = n1 * trb.frame.acontra[0] + n2 * trb.frame.acontra[1];
            for (int c = 0; c < 3; ++c) {
                const Vec3 da3 = -trb.frame.a3[c] * gvec;
                r.rot1[3 * lf + c] += tra.frame.a3.dot(da3);
                r.rot2[3 * lf + c] += n_a.dot(da3);
            }
        }
    }
}

}  // namespace

ProjectionOperator projection_matrices(const PatchSet& patches, const InterfaceDef& def,
                                       const InterfaceSpace& iface) {
    LocalDofs dofs;
    std::vector<QpRows> rows;
    interface_rows(patches, def, iface, dofs, rows);
    const int n = static_cast<int>(dofs.scalar.size());
    const int m = iface.reduced.num_functions();
    if (m == 0 || iface.qpoints.empty()) throw std::runtime_error("empty interface: singular mass matrix");

    ProjectionOperator proj;
    proj.scalar_dofs = dofs.scalar;
    proj.mass.setZero(m, m);
    proj.f_disp.setZero(m, n);
    proj.f_rot1.setZero(m, 3 * n);
    proj.f_rot2.setZero(m, 3 * n);

    for (std::size_t q = 0; q < iface.qpoints.size(); ++q) {
        const InterfaceQuadPoint& qp = iface.qpoints[q];
        const TensorBasisEval red = iface.reduced.evaluate(qp.t, 0);
        const std::vector<int> ridx = iface.reduced.global_indices(red);
        for (int i = 0; i < red.num_local(); ++i) {
            const double bi = red.value(0, i);
            if (bi == 0.0) continue;
            const double wbi = qp.weight * bi;
            for (int j = 0; j < red.num_local(); ++j)
                proj.mass(ridx[i], ridx[j]) += wbi * red.value(0, j);
            proj.f_disp.row(ridx[i]) += wbi * rows[q].jump;
            proj.f_rot1.row(ridx[i]) += wbi * rows[q].rot1;
            proj.f_rot2.row(ridx[i]) += wbi * rows[q].rot2;
        }
    }
    return proj;
}

void assemble_penalty(const PatchSet& patches, const InterfaceDef& def, const InterfaceSpace& iface,
                      const ProjectionOperator& proj, const PenaltyCoefficients& coef,
                      PenaltyMethod method, SparseSymmetricSystem& system) {
    const int n = static_cast<int>(proj.scalar_dofs.size());
    using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

    // the coupling blocks carry the h^{-beta} super-penalty scale, so they
    // are formed and scattered in extended precision
    LMat dk_scalar;   // n x n, scattered per component
    LMat dk_rot;      // 3n x 3n

    if (method == PenaltyMethod::Projected) {
        const LMat lmass = proj.mass.cast<long double>();
        const Eigen::LDLT<LMat> mass(lmass);
        auto triple = [&](const Eigen::MatrixXd& f, long double alpha) {
            const LMat lf = f.cast<long double>();
            const LMat w = mass.solve(lf);
            return LMat(alpha * lf.transpose() * w);
        };
        dk_scalar = triple(proj.f_disp, coef.disp);
        dk_rot = triple(proj.f_rot1, coef.rot) + triple(proj.f_rot2, coef.rot);
    } else {
        LocalDofs dofs;
        std::vector<QpRows> rows;
        interface_rows(patches, def, iface, dofs, rows);
        dk_scalar.setZero(n, n);
        dk_rot.setZero(3 * n, 3 * n);
        for (std::size_t q = 0; q < rows.size(); ++q) {
            const long double w = iface.qpoints[q].weight;
            dk_scalar.noalias() +=
                (coef.disp * w) * (rows[q].jump.transpose() * rows[q].jump).cast<long double>();
            dk_rot.noalias() += (coef.rot * w) * (rows[q].rot1.transpose() * rows[q].rot1 +
                                                  rows[q].rot2.transpose() * rows[q].rot2)
                                                     .cast<long double>();
        }
    }

    // symmetrize against roundoff before scattering
    dk_scalar = 0.5L * (dk_scalar + dk_scalar.transpose()).eval();
    dk_rot = 0.5L * (dk_rot + dk_rot.transpose()).eval();

    std::vector<int> gdof(3 * n);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < 3; ++c)
            gdof[3 * i + c] = patches.dof(proj.scalar_dofs[i].first, proj.scalar_dofs[i].second, c);

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (dk_scalar(i, j) == 0.0L) continue;
            for (int c = 0; c < 3; ++c) system.add(gdof[3 * i + c], gdof[3 * j + c], dk_scalar(i, j));
        }
    for (int i = 0; i < 3 * n; ++i)
        for (int j = 0; j < 3 * n; ++j)
            if (dk_rot(i, j) != 0.0L) system.add(gdof[i], gdof[j], dk_rot(i, j));
}

void cross_point_constraints(const PatchSet& patches, const std::vector<CrossPointDef>& cross_points,
                             const std::vector<BuiltInterface>& interfaces,
                             SparseSymmetricSystem& system) {
    const double tol = 1e-10 * model_scale(patches);

    for (const CrossPointDef& cp : cross_points) {
        if (cp.incidents.empty()) continue;
        const Vec3 x0 =
            patches[cp.incidents[0].first].geometry.point(cp.incidents[0].second);
        bool corners = true;
        for (const auto& [p, uv] : cp.incidents) {
            if ((patches[p].geometry.point(uv) - x0).norm() > tol)
                throw std::runtime_error("cross-point preimages disagree beyond the watertight tolerance");
            const bool cu = std::abs(uv[0]) < 1e-12 || std::abs(uv[0] - 1.0) < 1e-12;
            const bool cv = std::abs(uv[1]) < 1e-12 || std::abs(uv[1] - 1.0) < 1e-12;
            corners = corners && cu && cv;
        }

        if (corners) {
            // strong ties between the interpolatory corner dofs
            auto corner_function = [&](int p, const Vec2& uv) {
                const int i = (uv[0] > 0.5) ? patches[p].space.num_functions(0) - 1 : 0;
                const int j = (uv[1] > 0.5) ? patches[p].space.num_functions(1) - 1 : 0;
                return patches[p].space.flat_index(i, j);
            };
            const int mp = cp.incidents[0].first;
            const int mf = corner_function(mp, cp.incidents[0].second);
            for (std::size_t k = 1; k < cp.incidents.size(); ++k) {
                const int sp = cp.incidents[k].first;
                const int sf = corner_function(sp, cp.incidents[k].second);
                for (int c = 0; c < 3; ++c)
                    system.tie_dofs(patches.dof(mp, mf, c), patches.dof(sp, sf, c));
            }
            continue;
        }

        // point-penalty fallback over the incident interfaces
        for (const BuiltInterface& bi : interfaces) {
            const int pa = (bi.space.active == 0) ? bi.def.patch_a : bi.def.patch_b;
            const int pb = (bi.space.active == 0) ? bi.def.patch_b : bi.def.patch_a;
            const ParamCurve& ca = (bi.space.active == 0) ? bi.def.preimage_a : bi.def.preimage_b;
            const ParamCurve& cb = (bi.space.active == 0) ? bi.def.preimage_b : bi.def.preimage_a;
            for (double tend : {0.0, 1.0}) {
                const Vec2 uva = ca.point(tend);
                if ((patches[pa].geometry.point(uva) - x0).norm() > tol) continue;
                // locate the matching end of the passive preimage
                double tb = 0.0;
                if ((patches[pb].geometry.point(cb.point(1.0)) - x0).norm() <
                    (patches[pb].geometry.point(cb.point(0.0)) - x0).norm())
                    tb = 1.0;
                const Vec2 uvb = cb.point(tb);

                const TensorBasisEval ea = patches[pa].space.evaluate(uva, 0);
                const TensorBasisEval eb = patches[pb].space.evaluate(uvb, 0);
                const std::vector<int> ia = patches[pa].space.global_indices(ea);
                const std::vector<int> ib = patches[pb].space.global_indices(eb);

                std::vector<std::pair<int, double>> row;  // (global scalar dof base, value)
                for (int f = 0; f < ea.num_local(); ++f)
                    row.emplace_back(patches.dof(pa, ia[f], 0), ea.value(0, f));
                for (int f = 0; f < eb.num_local(); ++f)
                    row.emplace_back(patches.dof(pb, ib[f], 0), -eb.value(0, f));

                const double k = bi.coef.disp * bi.space.h;
                for (const auto& [di, vi] : row)
                    for (const auto& [dj, vj] : row)
                        for (int c = 0; c < 3; ++c) system.add(di + c, dj + c, k * vi * vj);
            }
        }
    }
}

std::vector<BuiltInterface> couple_patches(const PatchSet& patches, const MultiPatchModel& model,
                                           const PenaltyStrategy& strategy, SparseSymmetricSystem& system) {
    std::vector<BuiltInterface> built;
    built.reserve(model.interfaces.size());
    for (const InterfaceDef& def : model.interfaces) {
        BuiltInterface bi{def, build_interface(patches, def), {}};
        bi.coef = penalty_parameters(strategy, bi.space, patches, def);
        const ProjectionOperator proj = projection_matrices(patches, def, bi.space);
        assemble_penalty(patches, def, bi.space, proj, bi.coef, strategy.method, system);
        built.push_back(std::move(bi));
    }
    cross_point_constraints(patches, model.cross_points, built, system);
    return built;
}

}  // namespace kl
