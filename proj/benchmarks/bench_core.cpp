#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "respars/alias.hpp"
#include "respars/generators.hpp"
#include "respars/graph.hpp"
#include "respars/random.hpp"
#include "respars/resistance.hpp"
#include "respars/solver.hpp"
#include "respars/sparsify.hpp"

using namespace respars;

namespace {

WeightedGraph bench_graph(std::int64_t n) {
    return random_connected_graph(static_cast<Vertex>(n), 10 * std::size_t(n), 1234);
}

void BM_LaplacianSpmv(benchmark::State& state) {
    const WeightedGraph g = bench_graph(state.range(0));
    const SparseMatrix lap = laplacian(g);
    std::vector<double> x(g.n(), 1.0), y(g.n());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = double(i % 7) - 3.0;
    for (auto _ : state) {
        spmv(lap, x, y);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * std::int64_t(lap.nnz()));
}
BENCHMARK(BM_LaplacianSpmv)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_LaplacianSolve(benchmark::State& state) {
    const WeightedGraph g = bench_graph(state.range(0));
    const SparseMatrix lap = laplacian(g);
    std::vector<double> b(g.n());
    b[0] = 1.0;
    b[g.n() - 1] = -1.0;
    for (auto _ : state) {
        SolveResult res = solve_laplacian(lap, b, 1e-8, 0);
        benchmark::DoNotOptimize(res.solution.data());
    }
}
BENCHMARK(BM_LaplacianSolve)->Arg(1000)->Arg(10000);

void BM_OracleBuild(benchmark::State& state) {
    const WeightedGraph g = bench_graph(state.range(0));
    OracleBuildOptions opts;
    opts.epsilon = 1.0;
    for (auto _ : state) {
        ResistanceOracle oracle = build_oracle(g, opts, 42);
        benchmark::DoNotOptimize(oracle.values.data());
    }
}
BENCHMARK(BM_OracleBuild)->Unit(benchmark::kMillisecond)->Arg(500)->Arg(2000);

void BM_OracleQuery(benchmark::State& state) {
    const WeightedGraph g = bench_graph(2000);
    OracleBuildOptions opts;
    opts.epsilon = 1.0;
    const ResistanceOracle oracle = build_oracle(g, opts, 42);
    SplitMix64 rng(7);
    for (auto _ : state) {
        const auto u = static_cast<Vertex>(rng.next_below(g.n()));
        const auto v = static_cast<Vertex>(rng.next_below(g.n()));
        benchmark::DoNotOptimize(oracle.query(u, v));
    }
}
BENCHMARK(BM_OracleQuery);

void BM_ExactResistances(benchmark::State& state) {
    const WeightedGraph g = bench_graph(state.range(0));
    for (auto _ : state) {
        std::vector<double> r = exact_resistances(g);
        benchmark::DoNotOptimize(r.data());
    }
}
BENCHMARK(BM_ExactResistances)->Unit(benchmark::kMillisecond)->Arg(200)->Arg(500);

void BM_AliasSample(benchmark::State& state) {
    SplitMix64 setup(3);
    std::vector<double> weights(100000);
    for (double& w : weights) w = setup.next_double() + 0.01;
    const AliasTable table(weights);
    SplitMix64 rng(4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(table.sample(rng));
    }
}
BENCHMARK(BM_AliasSample);

void BM_Sparsify(benchmark::State& state) {
    const WeightedGraph g = bench_graph(state.range(0));
    SampleConfig cfg;
    cfg.epsilon = 1.0;
    cfg.seed = 9;
    for (auto _ : state) {
        SparsifierResult res = sparsify(g, cfg);
        benchmark::DoNotOptimize(res.graph.m());
    }
}
BENCHMARK(BM_Sparsify)->Unit(benchmark::kMillisecond)->Arg(1000)->Arg(5000);

} // namespace

BENCHMARK_MAIN();
