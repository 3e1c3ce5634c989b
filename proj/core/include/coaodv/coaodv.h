#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "coaodv/agent.h"
#include "coaodv/csl.h"
#include "coaodv/simulator.h"

namespace coaodv {

/// Collaboration-aware on-demand routing. Each node runs a cognitive agent
/// that grades itself per request; discovery only keeps hosts at least as
/// collaborative as the source, data is source-routed with store-carry-forward,
/// and hosts whose grade falls hand their role to a neighbor.
class CoaodvAgent : public RoutingAgent {
 public:
  /// Table row plus the per-host grades recorded at discovery.
  struct Row {
    RouteEntry entry;
    std::vector<Csl> host_csl;
    TimeMs last_forward = 0;
    bool handover_pending = false;
    bool break_reported = false;
  };
  using FlowKey = std::pair<NodeId, NodeId>;  // (source, target)

  CoaodvAgent(Simulator& sim, NodeId self);

  void start() override;
  void on_receive(NodeId from, const Packet& packet) override;
  void on_originate(DataPacket packet) override;
  void on_timer(EventKind kind, const Timer& timer) override;
  void on_mobility_step() override;

  const std::map<FlowKey, Row>& rows() const { return rows_; }
  const CognitiveAgent& mca() const { return mca_; }
  std::size_t carried() const { return carry_.size(); }

  AffinityProfile profile() const;
  OclLevel ocl_toward(NodeId peer) const;
  std::vector<BehaviorParam> behavior_params() const;
  Belief fresh_belief(const ObservationThresholds& thresholds) const;
  /// Own grade as a source: best contact level among recently heard peers.
  Csl source_csl() const;

 private:
  struct Discovery {
    std::uint32_t attempts = 0;
    RreqId id;
    Csl source_csl = Csl::NotRecommended;
    TimeMs started_at = 0;
    std::vector<RouteCandidate> candidates;
    bool window_armed = false;
  };
  struct Offer {
    FlowKey key;
    std::vector<HandoverAccept> accepts;
  };

  void checkpoint();
  bool start_discovery(NodeId target);
  void send_rreq(NodeId target, Discovery& d);
  void close_discovery(NodeId target, std::uint32_t counter);

  void handle_rreq(NodeId from, const CoaodvRreq& r);
  void handle_rrep(const CoaodvRrep& r);
  void handle_beacon(const BeliefBeacon& b);
  void handle_offer(NodeId from, const HandoverOffer& o);
  void handle_accept(const HandoverAccept& a);
  void handle_splice(const RouteSplice& s);
  void handle_degraded(const RouteDegraded& d);
  void handle_data(DataPacket p);

  void install(NodeId target, const Discovery& d);
  void forward(DataPacket p);
  bool try_forward(const DataPacket& p);
  void carry(DataPacket p);
  void report_break(const DataPacket& p);
  void flush_carry();
  void expire_pending();
  void reroute_held(NodeId source, NodeId target, const std::vector<NodeId>& route, const std::vector<Csl>& host_csl);
  Row& transit_row(const DataPacket& p);
  void monitor(const FlowKey& key);
  void close_offer(std::uint32_t offer_id);
  bool knows_fresh(NodeId peer) const;
  std::optional<Csl> estimated_csl(NodeId peer) const;
  void send_back(const std::vector<NodeId>& route, std::uint32_t position, Packet packet);

  CognitiveAgent mca_;
  Belief belief_;
  std::uint32_t rreq_counter_ = 0;
  std::set<RreqId> seen_;
  std::map<FlowKey, Csl> discovery_csl_;
  std::map<FlowKey, Row> rows_;
  std::map<NodeId, Discovery> discoveries_;
  std::map<NodeId, std::deque<DataPacket>> pending_;
  std::set<NodeId> had_route_;
  std::deque<DataPacket> carry_;
  std::map<std::uint32_t, Offer> offers_;
  std::uint32_t offer_counter_ = 0;
  std::map<std::uint64_t, CoaodvRreq> parked_;
  std::uint64_t parked_counter_ = 0;
  bool flushing_ = false;
};

}  // namespace coaodv
