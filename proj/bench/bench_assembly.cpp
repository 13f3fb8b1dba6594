// Serial reference loops against the OpenMP element loops.
#include <benchmark/benchmark.h>
#include <omp.h>

#include <map>
#include <memory>

#include "hdg/exact_cases.hpp"
#include "hdg/global_solver.hpp"

using namespace hdg;

namespace {

struct Fixture {
  Mesh mesh;
  Spaces spaces;
  ExactCase exact;
  ProblemData data;
  HybridSystem system;
  CVector skeleton;

  Fixture(int n, int k)
      : mesh(tag_boundary(build_structured_cube(n), BoundaryConfig::mixed)),
        spaces(k),
        exact(make_case("varcoeff", 1.0)),
        data(exact.data()) {
    AssemblyOptions opt;
    system = assemble_global(mesh, spaces, exact.material, data, opt);
    skeleton = solve(system);
  }
};

const Fixture& fixture(int n, int k) {
  static std::map<std::pair<int, int>, std::unique_ptr<Fixture>> cache;
  auto& slot = cache[{n, k}];
  if (!slot) slot = std::make_unique<Fixture>(n, k);
  return *slot;
}

ExecutionPolicy policy_of(const benchmark::State& state) {
  return state.range(2) ? ExecutionPolicy::parallel : ExecutionPolicy::serial;
}

void BM_Assemble(benchmark::State& state) {
  const Fixture& f = fixture(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  AssemblyOptions opt;
  opt.policy = policy_of(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_global(f.mesh, f.spaces, f.exact.material, f.data, opt));
  }
  state.counters["elements"] = f.mesh.num_elements();
  state.counters["threads"] = opt.policy == ExecutionPolicy::parallel ? omp_get_max_threads() : 1;
}

void BM_Reconstruct(benchmark::State& state) {
  const Fixture& f = fixture(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const ExecutionPolicy p = policy_of(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(reconstruct(f.mesh, f.spaces, f.exact.material, f.data, f.system, f.skeleton, p));
  }
  state.counters["threads"] = p == ExecutionPolicy::parallel ? omp_get_max_threads() : 1;
}

void BM_Solve(benchmark::State& state) {
  const Fixture& f = fixture(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(solve(f.system));
  state.counters["skeleton_dofs"] = f.system.dofs.size;
}

// args: n, k, parallel
void element_loop_args(benchmark::internal::Benchmark* b) {
  for (int n : {2, 4}) {
    for (int k : {1, 2}) {
      for (int par : {0, 1}) b->Args({n, k, par});
    }
  }
  b->ArgNames({"n", "k", "parallel"})->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_Assemble)->Apply(element_loop_args);
BENCHMARK(BM_Reconstruct)->Apply(element_loop_args);
BENCHMARK(BM_Solve)->Args({2, 1})->Args({4, 1})->Args({4, 2})->ArgNames({"n", "k"})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
