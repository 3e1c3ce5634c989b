#include <benchmark/benchmark.h>

#include "coaodv/event_queue.h"
#include "coaodv/rng.h"
#include "coaodv/simulator.h"

namespace {

using namespace coaodv;

void BM_EventQueueChurn(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  Rng rng(1);
  for (auto _ : state) {
    EventQueue<int> q;
    for (int i = 0; i < n; ++i) q.schedule(rng.uniform_int(0, 10000), EventKind::ProtocolTimer, i);
    while (!q.empty()) benchmark::DoNotOptimize(q.pop());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_EventQueueChurn)->Arg(1000)->Arg(100000);

void BM_SimulationCell(benchmark::State& state) {
  ScenarioConfig c;
  c.node_count = 50;
  c.area_width_m = 250;
  c.area_height_m = 250;
  c.duration_ms = 60000;
  const auto protocol = static_cast<Protocol>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_cell(c, protocol, 20, 1));
  state.SetLabel(std::string(to_string(protocol)));
}
BENCHMARK(BM_SimulationCell)
    ->Arg(static_cast<int>(Protocol::Aodv))
    ->Arg(static_cast<int>(Protocol::SleepAodv))
    ->Arg(static_cast<int>(Protocol::Coaodv))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
