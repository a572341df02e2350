#include <prlab/pr_graph.hpp>

#include <benchmark/benchmark.h>

#include "../tests/dag_testing.hpp"

#include <random>

using namespace prlab;

namespace {

void BM_Normalize(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<AcyclicExpr> dags;
  for (int i = 0; i < 32; ++i) dags.push_back(build_dag(testing::random_system(rng, 8)));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(normalize(dags[i++ % dags.size()]));
  }
}
BENCHMARK(BM_Normalize);

void BM_EvalDagVsNormalForm(benchmark::State& state) {
  std::mt19937_64 rng(2);
  FnRegistry reg = testing::panel_registry();
  AcyclicExpr dag = build_dag(testing::random_system(rng, 8));
  NormalForm nf = normalize(dag);
  FnHandle hole = testing::hole_panel(dag.hole_arity)[1];
  Tuple args(dag.n_inputs(), Nat(5));
  if (state.range(0) == 0) {
    for (auto _ : state) benchmark::DoNotOptimize(eval_dag(dag, reg, hole, args));
  } else {
    for (auto _ : state) benchmark::DoNotOptimize(eval_normal_form(nf, reg, hole, args));
  }
}
BENCHMARK(BM_EvalDagVsNormalForm)->Arg(0)->Arg(1);

}  // namespace
