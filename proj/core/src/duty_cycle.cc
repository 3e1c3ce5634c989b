#include "coaodv/duty_cycle.h"

namespace coaodv {

std::string_view to_string(DutyMode m) {
  switch (m) {
    case DutyMode::Idle: return "idle";
    case DutyMode::Sleep: return "sleep";
    case DutyMode::Receive: return "receive";
    case DutyMode::Transmit: return "transmit";
  }
  return "unknown";
}

bool allowed_transition(DutyMode from, DutyMode to) {
  if (from == to) return true;
  if (from == DutyMode::Idle) return true;
  return to == DutyMode::Idle;
}

DutyCycleState initial_duty_state(DutyCycle cycle, TimeMs now) {
  DutyCycleState s;
  s.cycle = cycle;
  s.mode = DutyMode::Idle;
  s.awake_until = now + cycle.awake_ms;
  s.sleep_until = now;
  return s;
}

DutyCycleState duty_cycle_tick(DutyCycleState state, TimeMs now, const NodeBehavior& behavior) {
  switch (state.mode) {
    case DutyMode::Sleep:
      if (now >= state.sleep_until) {
        state.mode = DutyMode::Idle;
        state.awake_until = now + state.cycle.awake_ms;
      }
      break;
    case DutyMode::Idle:
      if (behavior.transmitting) {
        state.mode = DutyMode::Transmit;
      } else if (behavior.receiving) {
        state.mode = DutyMode::Receive;
      } else if (now >= state.awake_until) {
        const bool extend = behavior.isolated || behavior.unstable || behavior.inactive;
        state.mode = DutyMode::Sleep;
        state.sleep_until = now + state.cycle.sleep_ms * (extend ? 2 : 1);
      }
      break;
    case DutyMode::Transmit:
      if (!behavior.transmitting) state.mode = DutyMode::Idle;
      break;
    case DutyMode::Receive:
      if (!behavior.receiving) state.mode = DutyMode::Idle;
      break;
  }
  return state;
}

}  // namespace coaodv
