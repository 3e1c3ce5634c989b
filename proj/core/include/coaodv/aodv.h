#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "coaodv/duty_cycle.h"
#include "coaodv/simulator.h"

namespace coaodv {

struct AodvRouteEntry {
  NodeId destination = 0;
  NodeId next_hop = 0;
  std::uint32_t hop_count = 1;
  std::uint32_t dest_seq = 0;
  bool valid_seq = false;
  TimeMs lifetime = 0;  // expiry time
  bool valid = false;
  bool rerr_sent = false;
  std::set<NodeId> precursors;

  bool usable(TimeMs now) const { return valid && now < lifetime; }
};

/// Classic on-demand distance-vector routing. With `duty_cycled` set the node
/// follows the fixed Sleep-AODV duty cycle and powers its radio down while
/// asleep.
class AodvAgent : public RoutingAgent {
 public:
  AodvAgent(Simulator& sim, NodeId self, bool duty_cycled);

  void start() override;
  void on_receive(NodeId from, const Packet& packet) override;
  void on_originate(DataPacket packet) override;
  void on_timer(EventKind kind, const Timer& timer) override;
  std::optional<DutyMode> duty_mode() const override;

  const std::map<NodeId, AodvRouteEntry>& routes() const { return routes_; }
  std::optional<NodeId> next_hop(NodeId destination) const;
  bool duty_cycled() const { return duty_cycled_; }
  const DutyCycleState& duty_state() const { return duty_; }

 private:
  struct Neighbor {
    TimeMs last_heard = 0;
    bool duty_cycled = false;
    TimeMs awake_until = 0;
    TimeMs sleep_ms = 0;
  };
  struct Discovery {
    std::uint32_t attempts = 0;
    std::uint32_t rreq_id = 0;
  };
  struct Outgoing {
    std::optional<NodeId> to;  // broadcast when empty
    Packet packet;
    std::uint32_t attempts = 0;
  };

  void send_hello();
  void check_neighbors();
  void heard(NodeId from);

  void start_discovery(NodeId dest);
  void send_rreq(NodeId dest, Discovery& d);
  void on_discovery_timeout(NodeId dest, std::uint32_t rreq_id);

  void handle_hello(NodeId from, const Hello& h);
  void handle_rreq(NodeId from, const AodvRreq& r);
  void handle_rrep(NodeId from, const AodvRrep& r);
  void handle_rerr(NodeId from, const AodvRerr& r);
  void handle_data(NodeId from, DataPacket p);

  void forward_data(DataPacket p, std::optional<NodeId> prev);
  void flush_pending(NodeId dest);
  void link_broken(NodeId neighbor, std::optional<DataPacket> failed);
  void send_rerr(std::vector<std::pair<NodeId, std::uint32_t>> unreachable);

  AodvRouteEntry& touch_route(NodeId dest);
  bool update_route(NodeId dest, NodeId next_hop, std::uint32_t hops, std::uint32_t seq, bool valid_seq,
                    TimeMs lifetime);

  // Transmission paths; both respect the duty cycle.
  void send(Outgoing out);
  void transmit(Outgoing out);
  void on_unicast_failure(Outgoing out);
  std::optional<TimeMs> predicted_wake(NodeId neighbor) const;

  // Duty cycle.
  void set_mode(DutyMode mode);
  bool asleep() const { return duty_cycled_ && duty_.mode == DutyMode::Sleep; }
  void duty_tick();
  void wake();
  void note_traffic(bool data);

  bool duty_cycled_;
  std::uint32_t seq_ = 0;
  std::uint32_t rreq_counter_ = 0;
  std::uint32_t hello_seq_ = 0;
  std::map<NodeId, AodvRouteEntry> routes_;
  std::set<std::pair<NodeId, std::uint32_t>> seen_rreq_;
  std::map<NodeId, Neighbor> neighbors_;
  std::map<NodeId, std::deque<DataPacket>> pending_;
  std::map<NodeId, Discovery> discoveries_;
  std::set<NodeId> had_route_;
  std::map<std::uint64_t, Outgoing> parked_;  // jittered or deferred transmissions
  std::uint64_t parked_counter_ = 0;

  DutyCycleState duty_;
  TimeMs transmit_until_ = 0;
  std::vector<Outgoing> outbox_;  // queued while asleep
  bool cycle_data_ = false;
  std::set<NodeId> cycle_heard_;
  std::set<NodeId> last_cycle_heard_;
};

}  // namespace coaodv
