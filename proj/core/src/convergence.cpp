#include "klshell/convergence.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace kl {

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// manufactured derivative closures must agree with finite differences of
// the value closure; checked once per run on a few interior points
void validate_exact_derivatives(const CaseLevel& cl) {
    if (!cl.exact) return;
    const double h = 1e-5;
    for (int p = 0; p < cl.patches.size(); ++p) {
        for (const Vec2& uv : {Vec2(0.31, 0.43), Vec2(0.67, 0.52)}) {
            if (!cl.patches[p].domain.contains(uv)) continue;
            Vec3 c[6], xp[6], xm[6], yp[6], ym[6];
            const SurfaceMap& geo = cl.patches[p].geometry;
            (*cl.exact)(p, uv, frame(geo, uv, 2), c);
            (*cl.exact)(p, uv + Vec2(h, 0), frame(geo, uv + Vec2(h, 0), 2), xp);
            (*cl.exact)(p, uv - Vec2(h, 0), frame(geo, uv - Vec2(h, 0), 2), xm);
            (*cl.exact)(p, uv + Vec2(0, h), frame(geo, uv + Vec2(0, h), 2), yp);
            (*cl.exact)(p, uv - Vec2(0, h), frame(geo, uv - Vec2(0, h), 2), ym);
            const Vec3 fdx = (xp[0] - xm[0]) / (2 * h);
            const Vec3 fdy = (yp[0] - ym[0]) / (2 * h);
            const double scale = std::max(1.0, c[0].norm());
            if ((fdx - c[deriv_index(1, 0)]).norm() > 1e-7 * std::max(scale, c[deriv_index(1, 0)].norm()) ||
                (fdy - c[deriv_index(0, 1)]).norm() > 1e-7 * std::max(scale, c[deriv_index(0, 1)].norm()))
                throw std::runtime_error("manufactured solution: derivative closure inconsistent with values");
        }
    }
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    return buf;
}

}  // namespace

double ConvergenceReport::slope(const std::function<double(const LevelResult&)>& value, int points) const {
    const int n = static_cast<int>(levels.size());
    const int m = std::min(points, n);
    if (m < 2) return 0.0;
    // least squares on log(value) vs log(sqrt(dofs))
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = n - m; i < n; ++i) {
        const double x = 0.5 * std::log(static_cast<double>(levels[i].dofs));
        const double y = std::log(std::max(value(levels[i]), 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    if (std::abs(denom) < 1e-30) return 0.0;
    return -(m * sxy - sx * sy) / denom;
}

double ConvergenceReport::slope_l2(int points) const {
    return slope([](const LevelResult& l) { return l.norms.l2; }, points);
}
double ConvergenceReport::slope_h1(int points) const {
    return slope([](const LevelResult& l) { return l.norms.h1; }, points);
}
double ConvergenceReport::slope_h2(int points) const {
    return slope([](const LevelResult& l) { return l.norms.h2; }, points);
}
double ConvergenceReport::slope_energy(int points) const {
    return slope([](const LevelResult& l) { return l.norms.energy; }, points);
}

std::string strategy_label(const PenaltyStrategy& strategy) {
    switch (strategy.method) {
        case PenaltyMethod::Classic:
            return "classic";
        case PenaltyMethod::Scaled:
            return "scaled";
        case PenaltyMethod::Projected:
            return "projected";
    }
    return "?";
}

std::string beta_label(int beta_offset) {
    if (beta_offset < 0) return "pm1";
    if (beta_offset == 0) return "p";
    return "pp1";
}

ConvergenceReport run_convergence(const BenchmarkCase& bench, const PenaltyStrategy& strategy, int degree,
                                  int levels, double thickness, const RunOptions& options) {
    if (degree < 2 || degree > 4) throw std::invalid_argument("degree must be 2, 3 or 4");
    if (levels < 1) throw std::invalid_argument("need at least one level");

    ConvergenceReport report;
    report.case_id = bench.id;
    report.strategy = strategy;
    report.degree = degree;
    report.thickness = thickness;
    report.manufactured = bench.manufactured;

    for (int level = 0; level < levels; ++level) {
        CaseLevel cl = bench.build(level, degree, thickness);
        if (level == 0) validate_exact_derivatives(cl);
        LevelResult res;
        res.level = level;

        auto t0 = std::chrono::steady_clock::now();
        SparseSymmetricSystem system(cl.patches.total_dofs());
        assemble_stiffness(cl.patches, system);
        assemble_loads(cl.patches, cl.loads, system);
        res.assemble_seconds = seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        couple_patches(cl.patches, cl.model, strategy, system);
        res.couple_seconds = seconds_since(t0);

        apply_dirichlet(cl.patches, cl.bcs, system);
        for (const DofPin& pin : cl.pin_dofs) {
            const SplineSpace& s = cl.patches[pin.patch].space;
            const int i = (pin.corner[0] > 0.5) ? s.num_functions(0) - 1 : 0;
            const int j = (pin.corner[1] > 0.5) ? s.num_functions(1) - 1 : 0;
            system.fix_dof(cl.patches.dof(pin.patch, s.flat_index(i, j), pin.component), 0.0);
        }
        cl.patches.eliminate_inactive(system);

        t0 = std::chrono::steady_clock::now();
        SparseSymmetricSystem::Solution sol;
        try {
            sol = system.solve();
        } catch (const std::exception& ex) {
            throw std::runtime_error(bench.id + " level " + std::to_string(level) + ": " + ex.what());
        }
        res.solve_seconds = seconds_since(t0);
        res.residual = sol.relative_residual;
        res.diagonal_ratio = sol.diagonal_ratio;
        res.dofs = sol.free_dofs;

        for (int p = 0; p < cl.patches.size(); ++p)
            for (int e = 0; e < cl.patches[p].domain.num_elements(); ++e)
                if (cl.patches[p].domain.label(e) != CellLabel::Outside) ++res.active_elements;

        if (cl.exact) res.norms = error_norms(cl.patches, sol.values, *cl.exact);
        if (cl.qois) res.qois = cl.qois(cl.patches, sol.values);

        if (!options.out_dir.empty() && options.write_vtk) {
            const std::string path = options.out_dir + "/" + bench.id + "_" + strategy_label(strategy) +
                                     "_" + beta_label(strategy.beta_offset) + "_p" + std::to_string(degree) +
                                     "_l" + std::to_string(level) + ".vtk";
            write_vtk(cl.patches, sol.values, path);
        }
        if (!options.out_dir.empty() && options.dump_matrix && level == 0)
            system.dump_matrix(options.out_dir + "/" + bench.id + "_l0_matrix.txt");

        report.levels.push_back(std::move(res));
    }
    return report;
}

void write_csv(const ConvergenceReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open CSV output " + path);
    out << "case,strategy,beta,degree,thickness,level,dofs,active_elements,err_l2,err_h1,err_h2,"
           "err_energy,slope_l2,slope_h2,slope_energy";
    // qoi columns from the first level
    std::vector<std::string> qoi_names;
    if (!report.levels.empty())
        for (const auto& [name, value] : report.levels.front().qois) {
            out << ",qoi_" << name;
            qoi_names.push_back(name);
        }
    out << "\n";

    for (std::size_t i = 0; i < report.levels.size(); ++i) {
        const LevelResult& l = report.levels[i];
        out << report.case_id << ',' << strategy_label(report.strategy) << ','
            << beta_label(report.strategy.beta_offset) << ',' << report.degree << ','
            << format_number(report.thickness) << ',' << l.level << ',' << l.dofs << ','
            << l.active_elements;
        for (double v : {l.norms.l2, l.norms.h1, l.norms.h2, l.norms.energy}) out << ',' << format_number(v);
        // pairwise slopes against the previous level
        if (i == 0 || !report.manufactured) {
            out << ",,,";
        } else {
            const LevelResult& p = report.levels[i - 1];
            const double dx = 0.5 * (std::log(static_cast<double>(l.dofs)) -
                                     std::log(static_cast<double>(p.dofs)));
            auto pair_slope = [&](double a, double b) {
                return format_number(-(std::log(std::max(a, 1e-300)) - std::log(std::max(b, 1e-300))) / dx);
            };
            out << ',' << pair_slope(l.norms.l2, p.norms.l2) << ',' << pair_slope(l.norms.h2, p.norms.h2)
                << ',' << pair_slope(l.norms.energy, p.norms.energy);
        }
        for (const std::string& name : qoi_names) {
            double v = 0.0;
            for (const auto& [n, value] : l.qois)
                if (n == name) v = value;
            out << ',' << format_number(v);
        }
        out << "\n";
    }
}

void write_summary(const std::vector<ConvergenceReport>& reports, std::ostream& out) {
    for (const ConvergenceReport& r : reports) {
        out << "== " << r.case_id << "  strategy=" << strategy_label(r.strategy)
            << "  beta=" << beta_label(r.strategy.beta_offset) << "  p=" << r.degree
            << "  t=" << r.thickness << "\n";
        out << "   level      dofs  elements";
        if (r.manufactured) out << "        L2        H1        H2    energy";
        if (!r.levels.empty())
            for (const auto& [name, value] : r.levels.front().qois) out << "  " << name;
        out << "  assemble[s]  couple[s]  solve[s]\n";
        for (const LevelResult& l : r.levels) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "   %5d %9d %9d", l.level, l.dofs, l.active_elements);
            out << buf;
            if (r.manufactured) {
                std::snprintf(buf, sizeof(buf), "  %.2e  %.2e  %.2e  %.2e", l.norms.l2, l.norms.h1,
                              l.norms.h2, l.norms.energy);
                out << buf;
            }
            for (const auto& [name, value] : l.qois) {
                std::snprintf(buf, sizeof(buf), "  %.6g", value);
                out << buf;
            }
            std::snprintf(buf, sizeof(buf), "  %10.3f  %9.3f  %8.3f", l.assemble_seconds,
                          l.couple_seconds, l.solve_seconds);
            out << buf << "\n";
        }
        if (r.manufactured && r.levels.size() >= 3) {
            char buf[128];
            std::snprintf(buf, sizeof(buf),
                          "   slopes (last two intervals, vs sqrt(dofs)): L2 %.2f  H1 %.2f  H2 %.2f  "
                          "energy %.2f\n",
                          r.slope_l2(), r.slope_h1(), r.slope_h2(), r.slope_energy());
            out << buf;
        }
    }
}

}  // namespace kl
