#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>

#include "coaodv/traffic.h"

namespace coaodv {

struct RunMetrics {
  std::uint64_t control_packets = 0;
  std::uint64_t data_sent = 0;      // originated CBR packets
  std::uint64_t data_received = 0;  // unique deliveries
  std::uint64_t total_packets = 0;  // control + per-hop data transmissions
  std::int64_t sum_e2e_delay = 0;   // ms
  std::uint64_t delivered_count = 0;
  std::uint64_t rediscoveries = 0;
  std::uint64_t connections = 0;
  std::uint64_t nodes = 0;
  std::string protocol;
  std::uint64_t seed = 0;

  // Diagnostics outside the per-run CSV row.
  std::uint64_t data_transmissions = 0;
  std::uint64_t discovery_rounds = 0;
  std::uint64_t rreq_originated = 0;
  std::uint64_t rerr_originated = 0;
  std::uint64_t handovers = 0;
  std::uint64_t route_degraded = 0;
  std::uint64_t carry_drops = 0;
  std::uint64_t lost_asleep = 0;
  std::array<std::uint64_t, 3> csl_counts{};  // indexed by CSL level

  void count_control() {
    ++control_packets;
    ++total_packets;
  }
  void count_data_transmission() {
    ++data_transmissions;
    ++total_packets;
  }
  /// Returns false if the packet was already delivered once.
  bool record_delivery(const PacketId& id, std::int64_t delay_ms);

 private:
  std::set<PacketId> delivered_;
};

double pdr(const RunMetrics& m);
double otr(const RunMetrics& m);
std::optional<double> mean_e2e_delay(const RunMetrics& m);
/// Throws std::invalid_argument when the run had no connections.
double control_per_connection(const RunMetrics& m);
std::int64_t packet_loss(const RunMetrics& m);

inline constexpr std::string_view kRunCsvHeader =
    "protocol,nodes,connections,seed,control_packets,control_per_connection,data_sent,data_received,pdr,"
    "packet_loss,otr,mean_e2e_delay_ms,rediscoveries";

/// One CSV row (no trailing newline) in the kRunCsvHeader column order. An
/// undefined mean delay is written as an empty field.
std::string run_csv_row(const RunMetrics& m);

}  // namespace coaodv
