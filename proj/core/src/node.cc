#include "coaodv/node.h"

#include <algorithm>
#include <stdexcept>

namespace coaodv {

std::string_view to_string(NodeClass c) {
  switch (c) {
    case NodeClass::RescueTeam: return "rescue-team";
    case NodeClass::Bystander: return "bystander";
    case NodeClass::NavigationController: return "navigation-controller";
    case NodeClass::VehicleController: return "vehicle-controller";
  }
  return "unknown";
}

bool linked(const NodeState& a, const NodeState& b) {
  if (a.uid == b.uid || !a.radio_on || !b.radio_on) return false;
  return distance(a.position, b.position) <= std::min(a.range, b.range);
}

std::vector<NodeId> neighbors(std::span<const NodeState> nodes, NodeId uid) {
  if (uid >= nodes.size()) throw std::out_of_range("unknown node uid " + std::to_string(uid));
  const NodeState& self = nodes[uid];
  std::vector<NodeId> out;
  if (!self.radio_on) return out;
  for (const NodeState& other : nodes) {
    if (linked(self, other)) out.push_back(other.uid);
  }
  return out;
}

}  // namespace coaodv
