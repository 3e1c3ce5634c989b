#pragma once

#include <compare>
#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "coaodv/agent.h"
#include "coaodv/csl.h"
#include "coaodv/traffic.h"

namespace coaodv {

// Simulator-internal packet records. Only data packets are non-control.

/// Neighbor beacon of the AODV baselines. Duty-cycled senders announce when
/// their awake window ends so neighbors can predict the next wake-up.
struct Hello {
  NodeId uid = 0;
  std::uint32_t seq = 0;
  bool duty_cycled = false;
  TimeMs awake_until = 0;
  TimeMs sleep_ms = 0;
};

struct AodvRreq {
  NodeId origin = 0;
  std::uint32_t rreq_id = 0;
  std::uint32_t origin_seq = 0;
  NodeId dest = 0;
  std::uint32_t dest_seq = 0;
  bool unknown_seq = true;
  std::uint32_t hop_count = 0;
};

struct AodvRrep {
  NodeId origin = 0;  // node that asked
  NodeId dest = 0;    // node the route leads to
  std::uint32_t dest_seq = 0;
  std::uint32_t hop_count = 0;
  TimeMs lifetime_ms = 0;
};

struct AodvRerr {
  std::vector<std::pair<NodeId, std::uint32_t>> unreachable;  // (destination, seq)
};

struct RreqId {
  NodeId source = 0;
  std::uint32_t counter = 0;

  friend auto operator<=>(const RreqId&, const RreqId&) = default;
};

/// State handed to the cloned cognitive agent travelling with a request.
struct AgentClone {
  ObservationThresholds thresholds;
  std::uint64_t session_seed = 0;
};

struct CoaodvRreq {
  std::uint32_t ip_field = 0;  // source address
  std::uint16_t options_field = 0x00C5;
  std::uint16_t option_length = 0;
  NodeId source_id = 0;
  NodeId target_address = 0;
  Csl csl = Csl::NotRecommended;  // originator CSL
  RreqId rreq_id;
  std::vector<NodeId> hop_record;  // source first, no duplicates
  std::vector<Csl> hop_csl;        // CSL of each host after the source
  AgentClone clone;
};

struct CoaodvRrep {
  NodeId responder_uid = 0;
  Csl responder_csl = Csl::NotRecommended;
  RreqId rreq_id;
  std::vector<NodeId> reverse_record;  // responder back to source
  std::vector<NodeId> path;            // full route source .. target
  std::vector<Csl> host_csl;           // per intermediate host, in path order
  std::uint32_t position = 0;          // index in reverse_record of the current holder
};

struct BeliefBeacon {
  BeliefMessage message;
};

/// Broadcast by a host whose collaboration level fell below the source's.
struct HandoverOffer {
  std::uint32_t offer_id = 0;
  NodeId host = 0;
  NodeId source = 0;
  NodeId target = 0;
  NodeId prev = 0;
  NodeId next = 0;
  Csl source_csl = Csl::NotRecommended;
  std::vector<NodeId> route_record;
};

struct HandoverAccept {
  std::uint32_t offer_id = 0;
  NodeId candidate = 0;
  Csl csl = Csl::NotRecommended;
};

/// Carries a spliced route record to every node that must learn it. The
/// message walks `route_record` backwards from `position` towards the source.
struct RouteSplice {
  NodeId source = 0;
  NodeId target = 0;
  NodeId replaced = 0;
  NodeId replacement = 0;
  Csl replacement_csl = Csl::NotRecommended;
  Csl source_csl = Csl::NotRecommended;
  Rational rf_s{1, 1};
  std::vector<NodeId> route_record;
  bool walk_back = false;
  std::uint32_t position = 0;
};

/// Reported towards the source when no handover candidate exists.
struct RouteDegraded {
  NodeId source = 0;
  NodeId target = 0;
  NodeId reporter = 0;
  std::vector<NodeId> route_record;
  std::uint32_t position = 0;
};

struct DataPacket {
  PacketId id;
  NodeId src = 0;
  NodeId dst = 0;
  TimeMs origin_time = 0;
  std::uint32_t payload_bytes = 0;
  std::uint32_t flow_total = 0;
  std::vector<NodeId> route_record;  // source route, COAODV only
  std::vector<Csl> host_csl;         // grades of the intermediate hosts at discovery
  Csl source_csl = Csl::NotRecommended;
};

using Packet = std::variant<Hello, AodvRreq, AodvRrep, AodvRerr, CoaodvRreq, CoaodvRrep, BeliefBeacon, HandoverOffer,
                            HandoverAccept, RouteSplice, RouteDegraded, DataPacket>;

inline bool is_control(const Packet& p) { return !std::holds_alternative<DataPacket>(p); }

}  // namespace coaodv
