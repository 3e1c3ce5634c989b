#include "coaodv/sweep.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "coaodv/coaodv.h"
#include "coaodv/simulator.h"

namespace coaodv {

namespace {

std::string describe(const SweepCell& cell) {
  return "cell (connections=" + std::to_string(cell.connections) + ", protocol=" +
         std::string(to_string(cell.protocol)) + ", seed=" + std::to_string(cell.seed) + ")";
}

/// Samples the mean affinity ratio over all nodes at each snapshot.
class AffinitySampler : public SimObserver {
 public:
  void on_snapshot(const Simulator& sim) override {
    for (NodeId n = 0; n < sim.node_count(); ++n) {
      const auto& agent = static_cast<const CoaodvAgent&>(sim.agent(n));
      std::vector<OclLevel> levels;
      for (NodeId peer : sim.neighbors_of(n)) levels.push_back(agent.ocl_toward(peer));
      sum_ += affinity_ratio(levels);
      ++samples_;
    }
  }
  double mean() const { return samples_ ? sum_ / static_cast<double>(samples_) : 0.0; }

 private:
  double sum_ = 0.0;
  std::uint64_t samples_ = 0;
};

}  // namespace

SweepError::SweepError(const SweepCell& cell, const std::string& what)
    : std::runtime_error(describe(cell) + ": " + what), cell_(cell) {}

std::vector<SweepCell> sweep_cells(const ScenarioConfig& config, std::span<const Protocol> protocols) {
  std::vector<SweepCell> cells;
  for (auto connections : config.connections)
    for (auto protocol : protocols)
      for (std::uint32_t s = 0; s < config.seeds; ++s) cells.push_back(SweepCell{connections, protocol, config.seed + s});
  return cells;
}

std::vector<RunMetrics> run_sweep(const ScenarioConfig& config, std::span<const Protocol> protocols,
                                  unsigned workers) {
  config.validate();
  const auto cells = sweep_cells(config, protocols);
  std::vector<RunMetrics> results(cells.size());
  std::vector<std::optional<std::string>> errors(cells.size());

  if (workers == 0) workers = config.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, cells.size())));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        results[i] = run_cell(config, cells[i].protocol, cells[i].connections, cells[i].seed);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (errors[i]) throw SweepError(cells[i], *errors[i]);
  return results;
}

void write_run_csv(std::ostream& out, std::span<const RunMetrics> rows) {
  out << kRunCsvHeader << '\n';
  for (const auto& m : rows) out << run_csv_row(m) << '\n';
}

std::vector<ContactStatsRow> emit_contact_stats(const ScenarioConfig& config) {
  config.validate();
  std::vector<ContactStatsRow> rows;
  const auto max_conn = *std::max_element(config.connections.begin(), config.connections.end());
  for (auto n : config.contact_sweep_nodes) {
    ContactStatsRow row;
    row.nodes = n;
    if (n >= 2) {
      ScenarioConfig c = config;
      c.node_count = n;
      c.connections = {std::min(max_conn, n)};
      AffinitySampler sampler;
      const auto m = run_cell(c, Protocol::Coaodv, c.connections.front(), c.seed, &sampler);
      row.mean_affinity_ratio = sampler.mean();
      row.csl_counts = m.csl_counts;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_contact_csv(std::ostream& out, std::span<const ContactStatsRow> rows) {
  out << kContactCsvHeader << '\n';
  for (const auto& r : rows) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", r.mean_affinity_ratio);
    out << r.nodes << ',' << buf << ',' << r.csl_counts[0] << ',' << r.csl_counts[1] << ',' << r.csl_counts[2]
        << '\n';
  }
}

}  // namespace coaodv
