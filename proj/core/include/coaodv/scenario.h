#pragma once

#include <cstdint>
#include <vector>

#include "coaodv/config.h"
#include "coaodv/contact.h"
#include "coaodv/node.h"
#include "coaodv/traffic.h"

namespace coaodv {

/// Per-node constants that never change during a run.
struct NodeTraits {
  Multiset contexts;
  Multiset resources;
  double memory_class = 1.0;   // device memory relative to the largest class
  double compute_class = 1.0;  // device compute relative to the largest class
};

struct FlowSpec {
  Connection connection;
  double rate_pps = 4.0;
  TimeMs start = 0;
  TimeMs stop = 0;
};

/// Timed manipulation of one node, used by scripted test scenarios.
struct ScriptAction {
  enum class Kind : std::uint8_t { MoveTo, SetSpeed, SetResource, SetRadio };

  TimeMs time = 0;
  NodeId node = 0;
  Kind kind = Kind::MoveTo;
  Vec2 position;
  double value = 0.0;
  bool flag = true;
};

/// Everything a single run needs: config, concrete node population, flows
/// and an optional script. Nodes are indexed by uid.
struct Scenario {
  ScenarioConfig config;
  Protocol protocol = Protocol::Coaodv;
  std::uint64_t seed = 1;
  std::vector<NodeState> nodes;
  std::vector<NodeTraits> traits;
  std::vector<FlowSpec> flows;
  std::vector<ScriptAction> script;
};

/// Random population and CBR flows for one sweep cell. Node classes follow
/// `class_mix`; controllers are static, mobile nodes run random waypoint.
Scenario generate_scenario(const ScenarioConfig& config, Protocol protocol, std::uint32_t connections,
                           std::uint64_t seed);

/// Destination tag of the zone containing `p` on a zones x zones partition.
Tag destination_tag(Vec2 p, const Area& area, std::uint32_t zones);

}  // namespace coaodv
