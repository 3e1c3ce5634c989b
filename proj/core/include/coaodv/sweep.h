#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coaodv/config.h"
#include "coaodv/metrics.h"

namespace coaodv {

struct SweepCell {
  std::uint32_t connections = 0;
  Protocol protocol = Protocol::Coaodv;
  std::uint64_t seed = 0;
};

/// A sweep cell threw; the message names the cell.
class SweepError : public std::runtime_error {
 public:
  SweepError(const SweepCell& cell, const std::string& what);
  const SweepCell& cell() const { return cell_; }

 private:
  SweepCell cell_;
};

/// Cells in output order: connections, then protocol, then seed
/// (config.seed, config.seed + 1, ...).
std::vector<SweepCell> sweep_cells(const ScenarioConfig& config, std::span<const Protocol> protocols);

/// Runs every cell on `workers` threads (0 = config.workers, then hardware
/// concurrency). Results come back in cell order.
std::vector<RunMetrics> run_sweep(const ScenarioConfig& config, std::span<const Protocol> protocols,
                                  unsigned workers = 0);

void write_run_csv(std::ostream& out, std::span<const RunMetrics> rows);

struct ContactStatsRow {
  std::uint32_t nodes = 0;
  double mean_affinity_ratio = 0.0;
  std::array<std::uint64_t, 3> csl_counts{};  // by CSL level
};

inline constexpr std::string_view kContactCsvHeader =
    "nodes,mean_affinity_ratio,csl_not_recommended,csl_recommended,csl_highly_recommended";

/// One COAODV run per `contact_sweep_nodes` value at the largest configured
/// connection count. The affinity ratio is averaged over every node at every
/// metric snapshot.
std::vector<ContactStatsRow> emit_contact_stats(const ScenarioConfig& config);
void write_contact_csv(std::ostream& out, std::span<const ContactStatsRow> rows);

}  // namespace coaodv
