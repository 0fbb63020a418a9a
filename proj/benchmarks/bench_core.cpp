#include "superosc/experiments.hpp"
#include "superosc/kernels.hpp"

#include <benchmark/benchmark.h>

using namespace superosc;

namespace {

const PhysicalConfig cfg{1.0, 1.0, M_PI, 0.0};

ConstraintSet amp_set(int n) {
    IdealTemplate tmpl = ideal_template(cfg, 2.0);
    std::vector<double> nodes;
    std::vector<std::complex<double>> targets;
    for (int k = 0; k < n; ++k) {
        double x = cfg.slit_lo() + cfg.slit_width() * k / (n - 1);
        nodes.push_back(x);
        targets.push_back(tmpl.value(x));
    }
    return ConstraintSet::point_amplitudes(cfg, nodes, targets);
}

void BM_AssembleGramPoints(benchmark::State& state) {
    ConstraintSet cs = amp_set(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        GramMatrix g = assemble_gram(cfg, cs);
        benchmark::DoNotOptimize(g.entries.data());
    }
}
BENCHMARK(BM_AssembleGramPoints)->Arg(9)->Arg(15);

void BM_SolveWithEscalation(benchmark::State& state) {
    ConstraintSet cs = amp_set(static_cast<int>(state.range(0)));
    GramMatrix g = assemble_gram(cfg, cs);
    for (auto _ : state) {
        Solution sol = solve(g, cs.values);
        benchmark::DoNotOptimize(sol.norm_sq);
    }
}
BENCHMARK(BM_SolveWithEscalation)->Arg(9)->Arg(15);

void BM_EvalPosition(benchmark::State& state) {
    ConstraintSet cs = amp_set(9);
    GramMatrix g = assemble_gram(cfg, cs);
    Solution sol = solve(g, cs.values);
    WaveField w = make_wavefield(cfg, cs, sol);
    double x = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(w.position(x));
        x += 1e-6;
    }
}
BENCHMARK(BM_EvalPosition);

void BM_MomentumStats(benchmark::State& state) {
    ConstraintSet cs = amp_set(9);
    GramMatrix g = assemble_gram(cfg, cs);
    Solution sol = solve(g, cs.values);
    EmergingWave e = project_slit(make_wavefield(cfg, cs, sol));
    for (auto _ : state) {
        MomentumStats stats = momentum_stats(as_slit_function(e));
        benchmark::DoNotOptimize(stats.p_std);
    }
}
BENCHMARK(BM_MomentumStats);

}  // namespace

BENCHMARK_MAIN();
