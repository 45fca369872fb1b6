#include <benchmark/benchmark.h>

#include <random>

#include <sdpkit/maxcut.hpp>
#include <sdpkit/qcr.hpp>
#include <sdpkit/symcore.hpp>
#include <sdpkit/theta.hpp>

using namespace sdpkit;

namespace {

SymMatrix random_symmetric(int n, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = u(g);
  return SymMatrix(m);
}

void BM_JacobiEigen(benchmark::State& state) {
  const SymMatrix a = random_symmetric(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(eig_decompose(a));
}
BENCHMARK(BM_JacobiEigen)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_PsdCheck(benchmark::State& state) {
  const SymMatrix a = random_symmetric(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(psd_check(a));
}
BENCHMARK(BM_PsdCheck)->Arg(16)->Arg(64);

void BM_ThetaDual(benchmark::State& state) {
  const Graph g = Graph::random(static_cast<int>(state.range(0)), 0.4, 3);
  const DualSdp d = build_theta_dual(g);
  for (auto _ : state) benchmark::DoNotOptimize(solve(d));
}
BENCHMARK(BM_ThetaDual)->Arg(8)->Arg(16)->Arg(24);

void BM_GwRounding(benchmark::State& state) {
  const WeightedGraph w = WeightedGraph::unit(Graph::random(16, 0.5, 4));
  const GwSolution sol = solve_gw(w);
  for (auto _ : state)
    benchmark::DoNotOptimize(round_hyperplane(sol.X, w, 7, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_GwRounding)->Arg(1000)->Arg(10000);

void BM_QcrSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  BinQp q;
  q.Q = random_symmetric(n, 6);
  q.c = Vector(n);
  for (int i = 0; i < n; ++i) q.c(i) = u(g);
  q.A = Matrix::Ones(1, n);
  q.b = Vector::Constant(1, n / 2);
  for (auto _ : state) benchmark::DoNotOptimize(qcr_solve(q, QcrScheme::R2));
}
BENCHMARK(BM_QcrSolve)->Arg(8)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
