// Microbenchmarks for the hot kernels: basis evaluation, frame evaluation,
// stiffness assembly and the two coupling-term assembly routes. The penalty
// comparison mirrors the per-stage timing reported by the CLI summary.

#include <benchmark/benchmark.h>

#include "klshell/convergence.hpp"

using namespace kl;

namespace {

SurfaceMap unit_plate(double x0 = 0.0) {
    SplineSpace s(KnotVector::uniform_open(1, 1), KnotVector::uniform_open(1, 1));
    std::vector<Vec3> cp = {{x0, 0, 0}, {x0 + 1, 0, 0}, {x0, 1, 0}, {x0 + 1, 1, 0}};
    return SurfaceMap(std::move(s), std::move(cp));
}

PatchSet coupled_pair(int degree, int elements) {
    const Material mat = Material::isotropic(1e6, 0.3, 0.01);
    std::vector<Patch> patches;
    patches.emplace_back(unit_plate(0.0),
                         SplineSpace(KnotVector::uniform_open(degree, elements),
                                     KnotVector::uniform_open(degree, elements)),
                         mat);
    patches.emplace_back(unit_plate(1.0),
                         SplineSpace(KnotVector::uniform_open(degree, elements + 1),
                                     KnotVector::uniform_open(degree, elements + 1)),
                         mat);
    return PatchSet(std::move(patches));
}

InterfaceDef shared_edge() {
    return {0, 1, ParamCurve::line(Vec2(1, 0), Vec2(1, 1)), ParamCurve::line(Vec2(0, 0), Vec2(0, 1)), -1};
}

void BM_BasisEvaluation(benchmark::State& state) {
    const int p = static_cast<int>(state.range(0));
    SplineSpace space(KnotVector::uniform_open(p, 16), KnotVector::uniform_open(p, 16));
    double u = 0.0;
    for (auto _ : state) {
        u += 0.37;
        if (u > 1.0) u -= 1.0;
        benchmark::DoNotOptimize(space.evaluate(Vec2(u, 1.0 - u), 2));
    }
}
BENCHMARK(BM_BasisEvaluation)->Arg(2)->Arg(3);

void BM_FrameEvaluation(benchmark::State& state) {
    SurfaceMap map = unit_plate();
    double u = 0.0;
    for (auto _ : state) {
        u += 0.41;
        if (u > 0.99) u -= 0.99;
        benchmark::DoNotOptimize(frame(map, Vec2(u, 1.0 - u), 2));
    }
}
BENCHMARK(BM_FrameEvaluation);

void BM_StiffnessAssembly(benchmark::State& state) {
    const int p = static_cast<int>(state.range(0));
    PatchSet ps = coupled_pair(p, 16);
    for (auto _ : state) {
        SparseSymmetricSystem sys(ps.total_dofs());
        assemble_stiffness(ps, sys);
        benchmark::DoNotOptimize(sys.num_dofs());
    }
}
BENCHMARK(BM_StiffnessAssembly)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_PenaltyAssembly(benchmark::State& state) {
    const int p = static_cast<int>(state.range(0));
    const bool projected = state.range(1) != 0;
    PatchSet ps = coupled_pair(p, 32);
    MultiPatchModel model;
    model.interfaces.push_back(shared_edge());
    const PenaltyStrategy strategy{projected ? PenaltyMethod::Projected : PenaltyMethod::Classic, 1, 1e3};
    for (auto _ : state) {
        SparseSymmetricSystem sys(ps.total_dofs());
        couple_patches(ps, model, strategy, sys);
        benchmark::DoNotOptimize(sys.num_dofs());
    }
}
BENCHMARK(BM_PenaltyAssembly)
    ->Args({2, 0})
    ->Args({2, 1})
    ->Args({3, 0})
    ->Args({3, 1})
    ->Unit(benchmark::kMillisecond);

void BM_CutElementQuadrature(benchmark::State& state) {
    const ParamCurve parabola = ParamCurve::quadratic(Vec2(0, 0), Vec2(0.5, 0), Vec2(1, 1));
    SplineSpace space(KnotVector::uniform_open(2, 8), KnotVector::uniform_open(2, 8));
    for (auto _ : state) {
        TrimmedDomain dom(space, {{parabola, true}});
        benchmark::DoNotOptimize(dom.kept_area(gauss_rule(3)));
    }
}
BENCHMARK(BM_CutElementQuadrature)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
