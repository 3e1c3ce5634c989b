#pragma once

#include <cstdint>
#include <string_view>

#include "coaodv/types.h"

namespace coaodv {

/// Radio modes of a duty-cycled node. Idle is the initial mode; Sleep only
/// returns to Idle, and Transmit / Receive are entered from and left to Idle.
enum class DutyMode : std::uint8_t { Idle, Sleep, Receive, Transmit };

std::string_view to_string(DutyMode m);

bool allowed_transition(DutyMode from, DutyMode to);

struct DutyCycle {
  TimeMs awake_ms = 400;
  TimeMs sleep_ms = 100;
};

struct DutyCycleState {
  DutyMode mode = DutyMode::Idle;
  TimeMs sleep_until = 0;
  TimeMs awake_until = 0;
  DutyCycle cycle;
};

/// What the node did or observed during the cycle that is ending.
struct NodeBehavior {
  bool transmitting = false;
  bool receiving = false;
  bool isolated = false;  // no neighbor heard for a full cycle
  bool unstable = false;  // neighbor set churned past the threshold
  bool inactive = false;  // carried no data during the cycle
};

DutyCycleState initial_duty_state(DutyCycle cycle, TimeMs now = 0);

/// One transition of the duty-cycle state machine. Nodes flagged isolated,
/// unstable or inactive sleep one extra period when they go to sleep. A
/// sleeping node ignores traffic until its timer expires.
DutyCycleState duty_cycle_tick(DutyCycleState state, TimeMs now, const NodeBehavior& behavior);

}  // namespace coaodv
