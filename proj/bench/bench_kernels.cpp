#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "orthotile/gridgen.hpp"
#include "orthotile/harmonic.hpp"
#include "orthotile/kernels.hpp"

using namespace orthotile;

namespace {

DomainSpec bench_domain() {
    return DomainSpec(Polygon({{0, 0}, {2, 0}, {2, 1}, {0, 1}}), {Point2{0, 1}, {0, 0}, {2, 0}, {2, 1}});
}

const MarkedRectangleMap& bench_map(int level) {
    static std::vector<std::unique_ptr<MarkedRectangleMap>> cache(8);
    if (!cache[level]) cache[level] = std::make_unique<MarkedRectangleMap>(grid_approximation(bench_domain(), std::ldexp(1.0, -level)).map);
    return *cache[level];
}

void BM_Solve(benchmark::State& state, bool parallel) {
    const auto& m = bench_map(static_cast<int>(state.range(0)));
    SolverOptions opt;
    opt.parallel = parallel;
    const auto s = m.primal().locals(m.arcs().ab), t = m.primal().locals(m.arcs().cd);
    for (auto _ : state) benchmark::DoNotOptimize(unit_potential(m.primal_ptr(), s, t, opt).energy);
    state.counters["faces"] = static_cast<double>(m.map().face_count());
}

void BM_Dot(benchmark::State& state, bool parallel) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::vector<double> a(n, 1.5), b(n, 0.25);
    for (auto _ : state)
        benchmark::DoNotOptimize(parallel ? kernels::dot(a.data(), b.data(), n) : kernels::serial::dot(a.data(), b.data(), n));
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * n * 2 * sizeof(double)));
}

// 5-point Laplacian on a k x k grid.
CsrMatrix grid_laplacian(std::size_t k) {
    CsrMatrix a;
    a.n = k * k;
    a.row_ptr.push_back(0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            auto add = [&](std::size_t c, double v) {
                a.col.push_back(c);
                a.val.push_back(v);
            };
            if (i > 0) add((i - 1) * k + j, -1);
            if (j > 0) add(i * k + j - 1, -1);
            add(i * k + j, 4.0);
            if (j + 1 < k) add(i * k + j + 1, -1);
            if (i + 1 < k) add((i + 1) * k + j, -1);
            a.row_ptr.push_back(a.col.size());
        }
    return a;
}

void BM_Spmv(benchmark::State& state, bool parallel) {
    const CsrMatrix a = grid_laplacian(static_cast<std::size_t>(state.range(0)));
    std::vector<double> x(a.n, 1.0), y(a.n);
    for (auto _ : state) {
        if (parallel)
            kernels::spmv(a, x.data(), y.data());
        else
            kernels::serial::spmv(a, x.data(), y.data());
        benchmark::DoNotOptimize(y.data());
    }
}

}  // namespace

BENCHMARK_CAPTURE(BM_Dot, serial, false)->Range(1 << 12, 1 << 20);
BENCHMARK_CAPTURE(BM_Dot, parallel, true)->Range(1 << 12, 1 << 20);
BENCHMARK_CAPTURE(BM_Spmv, serial, false)->Range(64, 1024);
BENCHMARK_CAPTURE(BM_Spmv, parallel, true)->Range(64, 1024);
BENCHMARK_CAPTURE(BM_Solve, serial, false)->DenseRange(4, 7)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Solve, parallel, true)->DenseRange(4, 7)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
