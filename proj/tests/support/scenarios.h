#pragma once

// Hand-built scenarios shared by the unit and acceptance tests.

#include <cstdint>
#include <vector>

#include "coaodv/config.h"
#include "coaodv/scenario.h"
#include "coaodv/simulator.h"

namespace coaodv::testing {

/// Config for small deterministic topologies: no loss, no jitter, one
/// destination zone and uniform context weighting on contact age only.
inline ScenarioConfig scripted_config(double width, double height, TimeMs duration_ms) {
  ScenarioConfig c;
  c.area_width_m = width;
  c.area_height_m = height;
  c.duration_ms = duration_ms;
  c.traffic_start_ms = 1000;
  c.loss_probability = 0.0;
  c.rreq_jitter_ms = 0;
  c.destination_zones = 1;
  c.context_weight_age = 1.0;
  c.context_weight_count = 0.0;
  c.context_weight_location = 0.0;
  c.connections = {1};
  return c;
}

/// Static node with identical traits; `speed` only feeds the agent's
/// mobility profile because static nodes never move.
inline NodeState static_node(NodeId uid, Vec2 position, double range, double speed = 0.0) {
  NodeState n;
  n.uid = uid;
  n.position = position;
  n.waypoint = position;
  n.speed = speed;
  n.range = range;
  n.node_class = NodeClass::RescueTeam;
  n.is_static = true;
  n.resource_pool = 1.0;
  return n;
}

inline NodeTraits shared_traits() {
  NodeTraits t;
  t.contexts = {{1, 1}};
  t.resources = {{200, 1}};
  t.memory_class = 1.0;
  t.compute_class = 1.0;
  return t;
}

inline Scenario make_scenario(const ScenarioConfig& config, Protocol protocol, std::vector<NodeState> nodes) {
  Scenario s;
  s.config = config;
  s.config.node_count = static_cast<std::uint32_t>(nodes.size());
  s.protocol = protocol;
  s.seed = 1;
  s.nodes = std::move(nodes);
  s.traits.assign(s.nodes.size(), shared_traits());
  return s;
}

inline void add_flow(Scenario& s, NodeId src, NodeId dst, TimeMs start, TimeMs stop, double rate_pps = 4.0) {
  FlowSpec f;
  f.connection = {static_cast<std::uint32_t>(s.flows.size()), src, dst};
  f.rate_pps = rate_pps;
  f.start = start;
  f.stop = stop;
  s.flows.push_back(f);
}

/// Static line of `count` nodes spaced `spacing` apart; only adjacent nodes
/// are in range.
inline Scenario line_scenario(Protocol protocol, std::size_t count, double spacing, TimeMs duration_ms) {
  auto c = scripted_config(spacing * static_cast<double>(count), 100.0, duration_ms);
  std::vector<NodeState> nodes;
  for (std::size_t i = 0; i < count; ++i)
    nodes.push_back(static_node(static_cast<NodeId>(i), {spacing * static_cast<double>(i) + 1.0, 50.0}, spacing * 1.5));
  return make_scenario(c, protocol, std::move(nodes));
}

/// Source S(0,0), host H(40,0), target T(80,0) and neighbor N, all static,
/// range 50. S, H and N carry speed 2 so their beliefs start mobile; H drops
/// to 0.5 m/s before a quarter of the flow has been sent. With
/// `with_candidate` N sits at (40,20), in range of S, H and T.
struct HandoverScenario {
  static constexpr NodeId kSource = 0;
  static constexpr NodeId kHost = 1;
  static constexpr NodeId kTarget = 2;
  static constexpr NodeId kNeighbor = 3;
};

inline Scenario handover_scenario(bool with_candidate) {
  auto c = scripted_config(250.0, 250.0, 20000);
  c.traffic_start_ms = 1000;
  const Vec2 n_pos = with_candidate ? Vec2{40.0, 20.0} : Vec2{240.0, 240.0};
  std::vector<NodeState> nodes{
      static_node(HandoverScenario::kSource, {0.0, 0.0}, 50.0, 2.0),
      static_node(HandoverScenario::kHost, {40.0, 0.0}, 50.0, 2.0),
      static_node(HandoverScenario::kTarget, {80.0, 0.0}, 50.0, 0.0),
      static_node(HandoverScenario::kNeighbor, n_pos, 50.0, 2.0),
  };
  auto s = make_scenario(c, Protocol::Coaodv, std::move(nodes));
  // 4 pps over [1000, 19000) gives 72 packets; the quarter mark is packet 18
  // at t = 5250 ms, just after the slowdown.
  add_flow(s, HandoverScenario::kSource, HandoverScenario::kTarget, 1000, 19000);
  ScriptAction slow;
  slow.time = 5240;
  slow.node = HandoverScenario::kHost;
  slow.kind = ScriptAction::Kind::SetSpeed;
  slow.value = 0.5;
  s.script.push_back(slow);
  return s;
}

}  // namespace coaodv::testing
