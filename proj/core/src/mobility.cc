#include "coaodv/mobility.h"

#include <algorithm>
#include <cmath>

namespace coaodv {

namespace {

Vec2 clamp_to(const Area& area, Vec2 p) {
  return {std::clamp(p.x, 0.0, area.width), std::clamp(p.y, 0.0, area.height)};
}

}  // namespace

NodeState mobility_step(NodeState node, TimeMs now, TimeMs dt, Rng& rng, const MobilityParams& params) {
  if (node.is_static || dt <= 0) return node;

  double t = static_cast<double>(now);
  const double end = static_cast<double>(now + dt);

  while (t < end) {
    if (t < static_cast<double>(node.pause_until)) {
      t = std::min(end, static_cast<double>(node.pause_until));
      continue;
    }
    if (node.speed <= 0.0) break;

    const double dist = distance(node.position, node.waypoint);
    const double reach = node.speed * (end - t) / 1000.0;
    if (reach < dist) {
      const double frac = reach / dist;
      node.position = clamp_to(params.area, {node.position.x + (node.waypoint.x - node.position.x) * frac,
                                             node.position.y + (node.waypoint.y - node.position.y) * frac});
      break;
    }

    // Arrival: pause, then head for a new waypoint.
    const double arrival = t + dist / node.speed * 1000.0;
    node.position = node.waypoint;
    node.pause_until = static_cast<TimeMs>(std::ceil(arrival)) + rng.uniform_int(params.pause_lo, params.pause_hi);
    node.waypoint = {rng.uniform(0.0, params.area.width), rng.uniform(0.0, params.area.height)};
    node.speed = rng.uniform(params.speed_lo, params.speed_hi);
    t = arrival;
  }
  return node;
}

}  // namespace coaodv
