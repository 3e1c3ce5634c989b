#pragma once

#include "coaodv/node.h"
#include "coaodv/rng.h"

namespace coaodv {

struct MobilityParams {
  Area area;
  double speed_lo = 0.5;  // m/s
  double speed_hi = 2.0;
  TimeMs pause_lo = 0;
  TimeMs pause_hi = 150;
};

/// Random waypoint step over [now, now + dt). On arrival the node pauses for a
/// uniform draw from [pause_lo, pause_hi] and picks a fresh waypoint and speed.
/// Static nodes are returned unchanged.
NodeState mobility_step(NodeState node, TimeMs now, TimeMs dt, Rng& rng, const MobilityParams& params);

}  // namespace coaodv
