#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "coaodv/types.h"

namespace coaodv {

struct Connection {
  std::uint32_t id = 0;
  NodeId src = 0;
  NodeId dst = 0;
};

/// Unique data-packet identity used for delivery dedup.
struct PacketId {
  std::uint32_t connection = 0;
  std::uint32_t seq = 0;

  friend auto operator<=>(const PacketId&, const PacketId&) = default;
};

struct TrafficEmission {
  TimeMs time = 0;
  PacketId id;
  NodeId src = 0;
  NodeId dst = 0;
  std::uint32_t payload_bytes = 0;
  std::uint32_t flow_total = 0;  // packets the connection will emit in total
};

/// Constant-bit-rate originations for one connection over [start, stop).
/// Packets are spaced by 1/rate seconds, rounded down to whole milliseconds.
/// Throws ConfigError when rate <= 0 or src == dst.
std::vector<TrafficEmission> emit_cbr(const Connection& connection, double rate_pps, std::uint32_t payload_bytes,
                                      TimeMs start, TimeMs stop);

}  // namespace coaodv
