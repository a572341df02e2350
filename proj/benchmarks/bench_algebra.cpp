#include <prlab/pr_algebra.hpp>

#include <benchmark/benchmark.h>

using namespace prlab;

namespace {

void BM_PairRoundTrip(benchmark::State& state) {
  std::uint64_t z = 0;
  for (auto _ : state) {
    auto [x, y] = unpair_nat(nat(z));
    benchmark::DoNotOptimize(pair_nat(x, y));
    z = (z + 97) % 125000;
  }
}
BENCHMARK(BM_PairRoundTrip);

void BM_FusedComposition(benchmark::State& state) {
  FnHandle add = from_loop(parse_loop("fn add(2){ x0 = x1 loop x2 { inc x0 } }"));
  FnHandle fused = compose(add, {from_loop(parse_loop("fn p1(2){ x0 = x1 }")),
                                 from_loop(parse_loop("fn p2(2){ x0 = x2 }"))});
  const LoopProgram& prog = *fused.source;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_loop(prog, {nat(37), nat(5)}));
  }
}
BENCHMARK(BM_FusedComposition);

void BM_PrefixSumWindow(benchmark::State& state) {
  FnHandle f = native_unary("tri", [](const Nat& x) { return Nat(x % 7); });
  FnHandle g = prefix_sum(f);
  for (auto _ : state) {
    for (std::uint64_t x = 0; x <= 64; ++x) benchmark::DoNotOptimize(g.at(x));
  }
}
BENCHMARK(BM_PrefixSumWindow);

}  // namespace
