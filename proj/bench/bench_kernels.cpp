#include <benchmark/benchmark.h>

#include "uro/fct_bounds.hpp"
#include "uro/simnet.hpp"
#include "uro/tablegen.hpp"

namespace {

using namespace uro;

const Schedule& rotor32() {
  static const Schedule s = generate_rotor_schedule(32, 2, 2000, 0);
  return s;
}

const Schedule& staggered24() {
  static const Schedule s = generate_staggered_rotor_schedule(24, 3, 2000, 200);
  return s;
}

void BM_CompileTable(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(compile_lookup_table(rotor32(), {}, 3));
}

void BM_CompileTableSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(compile_lookup_table_serial(rotor32(), {}, 3));
}

void BM_WorstCaseFct(benchmark::State& state) {
  for (auto _ : state) {
    FctModel m(staggered24(), {});
    benchmark::DoNotOptimize(m.worst_case_fct_ns(RoutingMode::kVlb, 1'000'000));
  }
}

void BM_WorstCaseFctSerial(benchmark::State& state) {
  for (auto _ : state) {
    FctModel m(staggered24(), {});
    benchmark::DoNotOptimize(m.worst_case_fct_ns_serial(RoutingMode::kVlb, 1'000'000));
  }
}

struct LossInputs {
  LookupTables tables = compile_lookup_table(rotor32(), {}, 3);
  FailureMask mask = inject_failures(rotor32(), {0.1, 0, 0}, 7);
};

const LossInputs& loss_inputs() {
  static const LossInputs in;
  return in;
}

void BM_ConnectivityLoss(benchmark::State& state) {
  const auto& in = loss_inputs();
  for (auto _ : state)
    benchmark::DoNotOptimize(connectivity_loss(rotor32(), in.tables, in.mask, 3, 3));
}

void BM_ConnectivityLossSerial(benchmark::State& state) {
  const auto& in = loss_inputs();
  for (auto _ : state)
    benchmark::DoNotOptimize(connectivity_loss_serial(rotor32(), in.tables, in.mask, 3, 3));
}

BENCHMARK(BM_CompileTable)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CompileTableSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_WorstCaseFct)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_WorstCaseFctSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ConnectivityLoss)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ConnectivityLossSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
