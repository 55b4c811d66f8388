#include <benchmark/benchmark.h>

#include "sfvem/assembly.hpp"
#include "sfvem/experiment.hpp"
#include "sfvem/problems.hpp"

namespace {

const sfvem::Polygon& hexagon() {
  static const sfvem::Polygon h = [] {
    const sfvem::PolyMesh m = sfvem::generate_voronoi(25, 50, 42);
    for (std::size_t c = 0; c < m.num_cells(); ++c)
      if (m.cells()[c].size() == 6) return m.cell_polygon(c);
    return m.cell_polygon(0);
  }();
  return h;
}

void BM_LocalSpace(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sfvem::LocalSpace(hexagon(), k, 2));
}
BENCHMARK(BM_LocalSpace)->DenseRange(1, 4);

void BM_Probe(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sfvem::probe_min_ell(hexagon(), k));
}
BENCHMARK(BM_Probe)->DenseRange(1, 3);

void BM_AssembleSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const sfvem::PolyMesh mesh = sfvem::generate_cartesian(n, n);
  const sfvem::ProblemData pb = sfvem::problem_test1();
  sfvem::SolveOptions opt;
  opt.k = 2;
  for (auto _ : state) {
    const sfvem::Discretization disc(mesh, pb, opt);
    benchmark::DoNotOptimize(disc.solve());
  }
  state.SetComplexityN(n * n);
}
BENCHMARK(BM_AssembleSolve)->RangeMultiplier(2)->Range(8, 32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
