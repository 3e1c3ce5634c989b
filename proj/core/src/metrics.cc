#include "coaodv/metrics.h"

#include <cstdio>
#include <stdexcept>

namespace coaodv {

bool RunMetrics::record_delivery(const PacketId& id, std::int64_t delay_ms) {
  if (!delivered_.insert(id).second) return false;
  ++data_received;
  ++delivered_count;
  sum_e2e_delay += delay_ms;
  return true;
}

double pdr(const RunMetrics& m) {
  if (m.data_sent == 0) return 0.0;
  return static_cast<double>(m.data_received) / static_cast<double>(m.data_sent);
}

double otr(const RunMetrics& m) {
  if (m.total_packets == 0) return 0.0;
  return static_cast<double>(m.control_packets) / static_cast<double>(m.total_packets);
}

std::optional<double> mean_e2e_delay(const RunMetrics& m) {
  if (m.delivered_count == 0) return std::nullopt;
  return static_cast<double>(m.sum_e2e_delay) / static_cast<double>(m.delivered_count);
}

double control_per_connection(const RunMetrics& m) {
  if (m.connections == 0) throw std::invalid_argument("control_per_connection needs at least one connection");
  return static_cast<double>(m.control_packets) / static_cast<double>(m.connections);
}

std::int64_t packet_loss(const RunMetrics& m) {
  return static_cast<std::int64_t>(m.data_sent) - static_cast<std::int64_t>(m.data_received);
}

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string run_csv_row(const RunMetrics& m) {
  const auto delay = mean_e2e_delay(m);
  std::string row;
  row += m.protocol + ',';
  row += std::to_string(m.nodes) + ',';
  row += std::to_string(m.connections) + ',';
  row += std::to_string(m.seed) + ',';
  row += std::to_string(m.control_packets) + ',';
  row += (m.connections ? fixed6(control_per_connection(m)) : std::string()) + ',';
  row += std::to_string(m.data_sent) + ',';
  row += std::to_string(m.data_received) + ',';
  row += fixed6(pdr(m)) + ',';
  row += std::to_string(packet_loss(m)) + ',';
  row += fixed6(otr(m)) + ',';
  row += (delay ? fixed6(*delay) : std::string()) + ',';
  row += std::to_string(m.rediscoveries);
  return row;
}

}  // namespace coaodv
