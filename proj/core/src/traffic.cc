#include "coaodv/traffic.h"

#include <cmath>

namespace coaodv {

std::vector<TrafficEmission> emit_cbr(const Connection& connection, double rate_pps, std::uint32_t payload_bytes,
                                      TimeMs start, TimeMs stop) {
  if (!(rate_pps > 0.0)) throw ConfigError("cbr rate must be positive");
  if (connection.src == connection.dst) throw ConfigError("cbr connection needs distinct endpoints");

  const double interval = 1000.0 / rate_pps;
  std::vector<TrafficEmission> out;
  for (std::uint32_t k = 0;; ++k) {
    const TimeMs t = start + static_cast<TimeMs>(std::floor(interval * k));
    if (t >= stop) break;
    out.push_back({t, {connection.id, k}, connection.src, connection.dst, payload_bytes, 0});
  }
  for (auto& e : out) e.flow_total = static_cast<std::uint32_t>(out.size());
  return out;
}

}  // namespace coaodv
