#include <benchmark/benchmark.h>

#include <codazzi/codazzi_checks.hpp>
#include <codazzi/hess_system.hpp>
#include <codazzi/named_examples.hpp>

using namespace codazzi;

namespace {

const std::vector<std::string> kTxy = {"t", "x", "y"};

void BM_eval_jet2_torus_mu(benchmark::State& state) {
    const ScalarExpr mu = parse("0.5*sin(x)*cos(y)", kTxy);
    Point p(3);
    p << 0.3, 1.1, 2.7;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mu.jet_at(p));
    }
}
BENCHMARK(BM_eval_jet2_torus_mu);

void BM_christoffel_at_family(benchmark::State& state) {
    const NamedExample torus = named_example("torus");
    Point p(3);
    p << 0.3, 1.1, 2.7;
    for (auto _ : state) {
        benchmark::DoNotOptimize(christoffel_at(torus.g, p));
    }
}
BENCHMARK(BM_christoffel_at_family);

void BM_codazzi_residual_torus(benchmark::State& state) {
    const NamedExample torus = named_example("torus");
    const Grid grid(torus.g.chart(), GridSpec::uniform(static_cast<int>(state.range(0)), 3));
    for (auto _ : state) {
        benchmark::DoNotOptimize(codazzi_residual(torus.A, torus.g, grid, 1e-8));
    }
}
BENCHMARK(BM_codazzi_residual_torus)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

void BM_eigen_structure_torus(benchmark::State& state) {
    const NamedExample torus = named_example("torus");
    const Grid grid(torus.g.chart(), GridSpec::uniform(7, 3));
    for (auto _ : state) {
        benchmark::DoNotOptimize(eigen_structure(torus.A, torus.g, grid));
    }
}
BENCHMARK(BM_eigen_structure_torus)->Unit(benchmark::kMillisecond);

void BM_assemble_hess_system(benchmark::State& state) {
    const NamedExample torus = named_example("torus");
    const Grid grid(torus.g.chart(), GridSpec::uniform(static_cast<int>(state.range(0)), 3));
    for (auto _ : state) {
        benchmark::DoNotOptimize(assemble_hess_system(torus.g, grid));
    }
}
BENCHMARK(BM_assemble_hess_system)->Arg(7)->Arg(9)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
