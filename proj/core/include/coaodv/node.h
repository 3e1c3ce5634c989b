#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "coaodv/types.h"

namespace coaodv {

enum class NodeClass : std::uint8_t { RescueTeam, Bystander, NavigationController, VehicleController };

std::string_view to_string(NodeClass c);

/// Controllers are infrastructure nodes and never move.
inline bool is_controller(NodeClass c) {
  return c == NodeClass::NavigationController || c == NodeClass::VehicleController;
}

struct NodeState {
  NodeId uid = 0;
  Vec2 position;
  Vec2 waypoint;
  double speed = 0.0;  // m/s
  TimeMs pause_until = 0;
  double range = 60.0;  // m
  NodeClass node_class = NodeClass::RescueTeam;
  bool is_static = false;
  double resource_pool = 1.0;  // available-resource ratio in [0, 1]
  bool radio_on = true;
};

/// Idealized unit-disk radio shared by every node in a run.
struct LinkModel {
  Area area;
  double loss_probability = 0.0;
  TimeMs hop_latency = 2;
};

/// Unit-disk link rule: both radios on and distance within the smaller range.
bool linked(const NodeState& a, const NodeState& b);

/// Sorted neighbor ids of `uid`. Nodes are indexed by uid.
/// Throws std::out_of_range for an unknown uid.
std::vector<NodeId> neighbors(std::span<const NodeState> nodes, NodeId uid);

}  // namespace coaodv
