#include "coaodv/scenario.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "coaodv/rng.h"

namespace coaodv {

namespace {

constexpr std::uint64_t kPopulationStream = 0;
constexpr std::uint64_t kFlowStream = 4;

constexpr Tag kTaskTagBase = 1;
constexpr Tag kGroupTagBase = 100;
constexpr Tag kResourceTagBase = 200;
constexpr std::uint32_t kResourceTags = 4;

NodeClass class_for(std::size_t index, std::size_t count, const std::array<double, 4>& mix) {
  double cumulative = 0.0;
  for (std::size_t c = 0; c < mix.size(); ++c) {
    cumulative += mix[c];
    const auto boundary = static_cast<std::size_t>(std::llround(cumulative * static_cast<double>(count)));
    if (index < boundary) return static_cast<NodeClass>(c);
  }
  return NodeClass::VehicleController;
}

}  // namespace

Tag destination_tag(Vec2 p, const Area& area, std::uint32_t zones) {
  const double zw = area.width / zones;
  const double zh = area.height / zones;
  const auto zx = std::min<std::uint32_t>(zones - 1, static_cast<std::uint32_t>(std::max(0.0, p.x) / zw));
  const auto zy = std::min<std::uint32_t>(zones - 1, static_cast<std::uint32_t>(std::max(0.0, p.y) / zh));
  return 1000 + zy * zones + zx;
}

Scenario generate_scenario(const ScenarioConfig& config, Protocol protocol, std::uint32_t connections,
                           std::uint64_t seed) {
  config.validate();
  if (connections == 0 || connections > config.node_count) throw ConfigError("connections: out of range");

  Scenario s;
  s.config = config;
  s.protocol = protocol;
  s.seed = seed;

  Rng rng = Rng::stream(seed, kPopulationStream);
  const Area area{config.area_width_m, config.area_height_m};
  const std::size_t n = config.node_count;
  s.nodes.reserve(n);
  s.traits.reserve(n);

  for (std::size_t i = 0; i < n; ++i) {
    NodeState node;
    node.uid = static_cast<NodeId>(i);
    node.node_class = class_for(i, n, config.class_mix);
    node.position = {rng.uniform(0.0, area.width), rng.uniform(0.0, area.height)};
    node.is_static = is_controller(node.node_class);
    NodeTraits traits;
    if (node.is_static) {
      node.waypoint = node.position;
      node.speed = 0.0;
      node.range = config.range_default_m;
      node.resource_pool = 1.0;
    } else {
      node.waypoint = {rng.uniform(0.0, area.width), rng.uniform(0.0, area.height)};
      node.speed = rng.uniform(config.speed_lo_mps, config.speed_hi_mps);
      node.range = rng.uniform(config.range_rescue_lo_m, config.range_rescue_hi_m);
      node.resource_pool = rng.uniform(config.resource_init_lo, config.resource_init_hi);
    }

    switch (node.node_class) {
      case NodeClass::RescueTeam:
        traits.memory_class = rng.uniform(0.5, 1.0);
        traits.compute_class = rng.uniform(0.5, 1.0);
        break;
      case NodeClass::Bystander:
        traits.memory_class = rng.uniform(0.3, 0.9);
        traits.compute_class = rng.uniform(0.3, 0.9);
        break;
      case NodeClass::NavigationController:
      case NodeClass::VehicleController:
        break;
    }
    traits.contexts[kTaskTagBase + static_cast<Tag>(node.node_class)] = 1;
    traits.contexts[kGroupTagBase + static_cast<Tag>(i % config.context_groups)] = 1;
    for (std::uint32_t r = 0; r < kResourceTags; ++r)
      if (rng.bernoulli(config.resource_tag_probability)) traits.resources[kResourceTagBase + r] = 1;

    s.nodes.push_back(node);
    s.traits.push_back(std::move(traits));
  }

  Rng flow_rng = Rng::stream(seed, kFlowStream);
  std::set<std::pair<NodeId, NodeId>> used;
  const auto last = static_cast<std::int64_t>(n) - 1;
  while (s.flows.size() < connections) {
    const auto src = static_cast<NodeId>(flow_rng.uniform_int(0, last));
    const auto dst = static_cast<NodeId>(flow_rng.uniform_int(0, last));
    if (src == dst || !used.insert({src, dst}).second) continue;
    FlowSpec flow;
    flow.connection = {static_cast<std::uint32_t>(s.flows.size()), src, dst};
    flow.rate_pps = config.cbr_rate_pps;
    flow.start = config.traffic_start_ms;
    flow.stop = config.duration_ms;
    s.flows.push_back(flow);
  }
  return s;
}

}  // namespace coaodv
