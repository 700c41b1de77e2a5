#include "klshell/verify.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <ostream>
#include <random>

#include "klshell/coupling.hpp"
#include "klshell/trimming.hpp"

namespace kl {

namespace {

struct Reporter {
    std::ostream& out;
    bool all_ok = true;

    void check(const std::string& name, bool ok, double value = 0.0, double bound = 0.0) {
        out << (ok ? "[PASS] " : "[FAIL] ") << name;
        if (bound > 0.0) out << "  (" << value << " vs " << bound << ")";
        out << '\n';
        all_ok = all_ok && ok;
    }
};

KnotVector random_open(int degree, int interior, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(0.05, 0.95);
    std::vector<double> mid(interior);
    for (double& m : mid) m = dist(rng);
    std::sort(mid.begin(), mid.end());
    std::vector<double> knots;
    for (int i = 0; i <= degree; ++i) knots.push_back(0.0);
    for (double m : mid) knots.push_back(m);
    for (int i = 0; i <= degree; ++i) knots.push_back(1.0);
    return KnotVector(std::move(knots), degree);
}

SurfaceMap unit_plate(double x0 = 0.0) {
    SplineSpace s(KnotVector::uniform_open(1, 1), KnotVector::uniform_open(1, 1));
    std::vector<Vec3> cp = {{x0, 0, 0}, {x0 + 1, 0, 0}, {x0, 1, 0}, {x0 + 1, 1, 0}};
    return SurfaceMap(std::move(s), std::move(cp));
}

}  // namespace

bool verify_properties(std::ostream& out) {
    Reporter rep{out};
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // partition of unity and derivative sums
    {
        double worst0 = 0.0, worst1 = 0.0;
        for (int p = 2; p <= 4; ++p) {
            const KnotVector kv = random_open(p, 6, rng);
            for (int q = 0; q < 100; ++q) {
                const BasisEval1D e = kv.evaluate(unit(rng), 1);
                double s0 = 0.0, s1 = 0.0;
                for (int i = 0; i <= p; ++i) {
                    s0 += e.value(0, i);
                    s1 += e.value(1, i);
                }
                worst0 = std::max(worst0, std::abs(s0 - 1.0));
                worst1 = std::max(worst1, std::abs(s1));
            }
        }
        rep.check("partition of unity", worst0 < 1e-12, worst0, 1e-12);
        rep.check("derivative rows sum to zero", worst1 < 1e-10, worst1, 1e-10);
    }

    // derivatives against central differences
    {
        double worst = 0.0;
        const double h = 1e-6;
        for (int p = 2; p <= 4; ++p) {
            const KnotVector kv = random_open(p, 4, rng);
            for (int q = 0; q < 30; ++q) {
                const double u = 0.1 + 0.8 * unit(rng);
                bool near = false;
                for (double k : kv.knots())
                    if (std::abs(k - u) < 10 * h) near = true;
                if (near) continue;
                const BasisEval1D e = kv.evaluate(u, 1);
                const BasisEval1D ep = kv.evaluate(u + h, 0);
                const BasisEval1D em = kv.evaluate(u - h, 0);
                if (ep.span != e.span || em.span != e.span) continue;
                for (int i = 0; i <= p; ++i) {
                    const double fd = (ep.value(0, i) - em.value(0, i)) / (2 * h);
                    worst = std::max(worst,
                                     std::abs(fd - e.value(1, i)) / std::max(1.0, std::abs(e.value(1, i))));
                }
            }
        }
        rep.check("derivatives match finite differences", worst < 1e-6, worst, 1e-6);
    }

    // knot-insertion exactness
    {
        const KnotVector base = KnotVector::uniform_open(3, 5);
        std::vector<double> coarse(base.num_functions());
        for (double& c : coarse) c = 2.0 * unit(rng) - 1.0;
        auto [fine, t] = insert_knots(base, {0.15, 0.4, 0.77});
        double worst = 0.0;
        for (int q = 0; q < 50; ++q) {
            const double u = unit(rng);
            const BasisEval1D ec = base.evaluate(u, 0);
            const BasisEval1D ef = fine.evaluate(u, 0);
            double vc = 0.0, vf = 0.0;
            for (int i = 0; i <= 3; ++i) {
                vc += ec.value(0, i) * coarse[ec.first_function() + i];
                double cf = 0.0;
                for (int j = 0; j < base.num_functions(); ++j)
                    cf += t[static_cast<std::size_t>(ef.first_function() + i) * base.num_functions() + j] *
                          coarse[j];
                vf += ef.value(0, i) * cf;
            }
            worst = std::max(worst, std::abs(vc - vf));
        }
        rep.check("knot insertion is exact", worst < 1e-13, worst, 1e-13);
    }

    // rational quarter circle
    {
        const double w = std::sqrt(2.0) / 2.0;
        SplineSpace s(KnotVector::uniform_open(2, 1), std::vector<double>{1.0, w, 1.0});
        const Vec2 p0(1, 0), p1(1, 1), p2(0, 1);
        double worst = 0.0;
        for (int k = 0; k <= 32; ++k) {
            const TensorBasisEval e = s.evaluate(static_cast<double>(k) / 32, 0);
            const Vec2 x = e.value(0, 0) * p0 + e.value(0, 1) * p1 + e.value(0, 2) * p2;
            worst = std::max(worst, std::abs(x.norm() - 1.0));
        }
        rep.check("rational quarter circle stays on the circle", worst < 1e-14, worst, 1e-14);
    }

    // trimming areas
    {
        const ParamCurve parabola = ParamCurve::quadratic(Vec2(0, 0), Vec2(0.5, 0), Vec2(1, 1));
        TrimmedDomain dom(SplineSpace(KnotVector::uniform_open(2, 6), KnotVector::uniform_open(2, 6)),
                          {{parabola, true}});
        const double area = dom.kept_area(gauss_rule(3));
        rep.check("parabola-trimmed area = 2/3", std::abs(area - 2.0 / 3.0) < 1e-10,
                  std::abs(area - 2.0 / 3.0), 1e-10);

        const TrimCurve chord{ParamCurve::line(Vec2(1.0, 0.6), Vec2(0.0, 0.2)), true};
        auto cells = reparametrize_cut_element({chord}, Vec2(0, 0), Vec2(1, 1));
        double carea = 0.0;
        for (const auto& c : cells) carea += c.area(gauss_rule(3));
        rep.check("straight-chord area exact", std::abs(carea - 0.4) < 1e-13, std::abs(carea - 0.4), 1e-13);
    }

    // projection properties on a two-patch interface
    {
        const Material mat = Material::isotropic(1e6, 0.3, 0.01);
        std::vector<Patch> patches;
        patches.emplace_back(unit_plate(0.0),
                             SplineSpace(KnotVector::uniform_open(2, 4), KnotVector::uniform_open(2, 4)),
                             mat);
        patches.emplace_back(unit_plate(1.0),
                             SplineSpace(KnotVector::uniform_open(2, 3), KnotVector::uniform_open(2, 3)),
                             mat);
        PatchSet ps(std::move(patches));
        const InterfaceDef def{0, 1, ParamCurve::line(Vec2(1, 0), Vec2(1, 1)),
                               ParamCurve::line(Vec2(0, 0), Vec2(0, 1)), -1};
        const InterfaceSpace iface = build_interface(ps, def);
        const ProjectionOperator proj = projection_matrices(ps, def, iface);

        Eigen::VectorXd local(proj.scalar_dofs.size());
        for (int i = 0; i < local.size(); ++i) local[i] = 2.0 * unit(rng) - 1.0;
        const Eigen::VectorXd rhs = proj.f_disp * local;
        const Eigen::VectorXd sol = proj.mass.ldlt().solve(rhs);
        const double resid = (proj.mass * sol - rhs).cwiseAbs().maxCoeff();
        rep.check("projection orthogonality residual", resid < 1e-11, resid, 1e-11);

        const int m = iface.reduced.num_functions();
        Eigen::VectorXd c(m);
        for (int i = 0; i < m; ++i) c[i] = 2.0 * unit(rng) - 1.0;
        Eigen::VectorXd rhs2 = Eigen::VectorXd::Zero(m);
        for (const InterfaceQuadPoint& qp : iface.qpoints) {
            const TensorBasisEval red = iface.reduced.evaluate(qp.t, 0);
            const std::vector<int> ridx = iface.reduced.global_indices(red);
            double g = 0.0;
            for (int i = 0; i < red.num_local(); ++i) g += red.value(0, i) * c[ridx[i]];
            for (int i = 0; i < red.num_local(); ++i) rhs2[ridx[i]] += qp.weight * red.value(0, i) * g;
        }
        const double idem = (proj.mass.ldlt().solve(rhs2) - c).cwiseAbs().maxCoeff();
        rep.check("projection idempotence", idem < 1e-12, idem, 1e-12);
    }

    // mechanics invariants on a coupled pair
    {
        const Material mat = Material::isotropic(2e5, 0.3, 0.02);
        std::vector<Patch> patches;
        patches.emplace_back(unit_plate(0.0),
                             SplineSpace(KnotVector::uniform_open(2, 3), KnotVector::uniform_open(2, 3)),
                             mat);
        patches.emplace_back(unit_plate(1.0),
                             SplineSpace(KnotVector::uniform_open(2, 4), KnotVector::uniform_open(2, 4)),
                             mat);
        PatchSet ps(std::move(patches));
        MultiPatchModel model;
        model.interfaces.push_back({0, 1, ParamCurve::line(Vec2(1, 0), Vec2(1, 1)),
                                    ParamCurve::line(Vec2(0, 0), Vec2(0, 1)), -1});

        SparseSymmetricSystem sys(ps.total_dofs());
        assemble_stiffness(ps, sys);
        couple_patches(ps, model, {PenaltyMethod::Projected, 1, 1e3}, sys);
        const double asym = sys.symmetry_error();
        rep.check("stiffness symmetry", asym < 1e-12 * 2e5, asym, 1e-12 * 2e5);

        Eigen::SparseMatrix<double> k = sys.assembled_matrix();
        double knorm = 0.0;
        for (int col = 0; col < k.outerSize(); ++col)
            for (Eigen::SparseMatrix<double>::InnerIterator it(k, col); it; ++it)
                knorm = std::max(knorm, std::abs(it.value()));
        double worst = 0.0;
        for (int c = 0; c < 3; ++c) {
            Eigen::VectorXd rigid = Eigen::VectorXd::Zero(ps.total_dofs());
            for (int p = 0; p < 2; ++p)
                for (int f = 0; f < ps[p].space.num_functions(); ++f) rigid[ps.dof(p, f, c)] = 1.0;
            worst = std::max(worst, (k * rigid).cwiseAbs().maxCoeff() / knorm);
        }
        rep.check("rigid-body null space including penalty terms", worst < 1e-10, worst, 1e-10);
    }

    // laminate/isotropic equivalence
    {
        const double e = 1e6, nu = 0.3, t = 0.02;
        SurfaceMap plate = unit_plate();
        const SurfaceFrame fr = frame(plate, Vec2(0.4, 0.7), 1);
        const ABD iso = laminate_abd(Material::isotropic(e, nu, t), fr);
        const ABD lam =
            laminate_abd(Material::laminate({Ply{e, e, e / (2 * (1 + nu)), nu, 0.0, t}}), fr);
        const double diff = std::max((iso.a - lam.a).cwiseAbs().maxCoeff() / iso.a.cwiseAbs().maxCoeff(),
                                     (iso.d - lam.d).cwiseAbs().maxCoeff() / iso.d.cwiseAbs().maxCoeff());
        rep.check("single-ply laminate equals isotropic", diff < 1e-10, diff, 1e-10);

        const Ply p0{41.63e9, 14.93e9, 5.047e9, 0.241, 0.0, 0.002};
        Ply p90 = p0;
        p90.angle = M_PI / 2;
        const ABD sym = laminate_abd(Material::laminate({p0, p90, p0}), fr);
        const double b = sym.b.cwiseAbs().maxCoeff() / sym.a.cwiseAbs().maxCoeff();
        rep.check("symmetric stack has zero coupling stiffness", b < 1e-12, b, 1e-12);
    }

    out << (rep.all_ok ? "verify: all checks passed\n" : "verify: FAILURES present\n");
    return rep.all_ok;
}

}  // namespace kl
