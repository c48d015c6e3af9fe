#include <benchmark/benchmark.h>

#include "gibbs_tree/finite_tree.hpp"
#include "gibbs_tree/invariant_systems.hpp"
#include "gibbs_tree/oracle.hpp"
#include "gibbs_tree/root_solver.hpp"

using namespace gibbs_tree;

static void BM_SolveIm(benchmark::State& state) {
    const auto p = ModelParams::make(3, static_cast<int>(state.range(0)), 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(solve_im(p, 1));
}
BENCHMARK(BM_SolveIm)->Arg(3)->Arg(6)->Arg(12);

static void BM_SolveImPrime(benchmark::State& state) {
    const auto p = ModelParams::make(3, static_cast<int>(state.range(0)), 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(solve_im_prime(p, 1));
}
BENCHMARK(BM_SolveImPrime)->Arg(3)->Arg(6);

static void BM_Poly11(benchmark::State& state) {
    const auto p = ModelParams::make(5, 8, 0.2);
    double z = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(poly11_normalized(z, p, 2));
        z = z < 4.0 ? z * 1.001 : 0.5;
    }
}
BENCHMARK(BM_Poly11);

static void BM_CheckConsistency(benchmark::State& state) {
    const auto p = ModelParams::make(3, 3, 0.1);
    const auto sols = solve_im(p, 1);
    const PeriodTwoField field = embed_pattern(sols.front(), 3);
    const FiniteTree tree = build_tree(3, static_cast<int>(state.range(0)));
    ConsistencyOptions opts;
    opts.random_configs = 4;
    for (auto _ : state) benchmark::DoNotOptimize(check_consistency(tree, p, field, 1e-6, opts));
}
BENCHMARK(BM_CheckConsistency)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
