#include <benchmark/benchmark.h>

#include <vector>

#include "gtp/kernels.hpp"
#include "gtp/random.hpp"

namespace {

struct Tree {
  std::vector<double> p;
  std::vector<double> leaves;
};

Tree make_tree(int n) {
  gtp::RandomStream rng(7);
  Tree t;
  for (int k = 0; k < n; ++k) t.p.push_back(rng.next_unit());
  t.leaves.resize(std::size_t{1} << n);
  for (double& v : t.leaves) v = rng.next_unit() < 0.5 ? 1.0 : 0.0;
  return t;
}

void BM_BackwardInductionSerial(benchmark::State& state) {
  const Tree t = make_tree(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gtp::kernels::backward_induction_serial(t.p, t.leaves));
}

void BM_BackwardInductionParallel(benchmark::State& state) {
  const Tree t = make_tree(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gtp::kernels::backward_induction_parallel(t.p, t.leaves));
}

void BM_KolmogorovSerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(gtp::kernels::kolmogorov_batch_serial(
        1, static_cast<std::size_t>(state.range(0)), 1000, gtp::kernels::VarianceScript::Quadratic, 500));
  }
}

void BM_KolmogorovParallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(gtp::kernels::kolmogorov_batch_parallel(
        1, static_cast<std::size_t>(state.range(0)), 1000, gtp::kernels::VarianceScript::Quadratic, 500));
  }
}

}  // namespace

BENCHMARK(BM_BackwardInductionSerial)->Arg(12)->Arg(18)->Arg(22);
BENCHMARK(BM_BackwardInductionParallel)->Arg(12)->Arg(18)->Arg(22);
BENCHMARK(BM_KolmogorovSerial)->Arg(100)->Arg(1000);
BENCHMARK(BM_KolmogorovParallel)->Arg(100)->Arg(1000);

BENCHMARK_MAIN();
