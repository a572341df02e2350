#include <prlab/fuel_vm.hpp>

#include <benchmark/benchmark.h>

using namespace prlab;

namespace {

// Countdown loop with a shift-register predecessor: quadratic in k, a good
// stand-in for interpreter-bound workloads.
WhileProgram countdown(std::uint64_t k) {
  std::vector<Stmt> body;
  for (std::uint64_t i = 0; i < k; ++i) body.push_back(Stmt::inc(2));
  std::vector<Stmt> dec;
  dec.push_back(Stmt::clear(3));
  dec.push_back(Stmt::clear(4));
  dec.push_back(Stmt::loop(2, {Stmt::copy(3, 4), Stmt::inc(4)}));
  dec.push_back(Stmt::copy(2, 3));
  body.push_back(Stmt::while_(2, std::move(dec)));
  return WhileProgram{"cd", 1, std::move(body)};
}

void BM_StepMachine(benchmark::State& state) {
  WhileProgram p = countdown(static_cast<std::uint64_t>(state.range(0)));
  std::uint64_t steps = 0;
  for (auto _ : state) {
    StepMachine m(p, {nat(0)});
    while (!m.halted()) m.step();
    steps += m.steps_done();
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(steps));
}
BENCHMARK(BM_StepMachine)->Arg(16)->Arg(64)->Arg(128);

void BM_RunBoundedDiverger(benchmark::State& state) {
  WhileProgram bot = parse_while("fn bot(1){ inc x2 while x2 { inc x2 } }");
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_bounded(bot, {nat(0)}, state.range(0)));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunBoundedDiverger)->Arg(1000)->Arg(20000);

void BM_EncodeDecode(benchmark::State& state) {
  WhileProgram p = countdown(64);
  for (auto _ : state) {
    ProgramIndex ix = encode_program(p);
    benchmark::DoNotOptimize(decode_program(ix));
  }
}
BENCHMARK(BM_EncodeDecode);

void BM_HaltWatcherScan(benchmark::State& state) {
  WhileProgram p = countdown(64);
  for (auto _ : state) {
    HaltWatcher w(p, {nat(0)});
    std::uint64_t zeros = 0;
    for (std::uint64_t t = 0; t <= 20000; ++t) {
      if (w.halted_by(t)) ++zeros;
    }
    benchmark::DoNotOptimize(zeros);
  }
}
BENCHMARK(BM_HaltWatcherScan);

}  // namespace

BENCHMARK_MAIN();
