#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coaodv/types.h"

namespace coaodv {

enum class EventKind : std::uint8_t {
  PacketDelivery,
  MobilityStep,
  DutyCycleTick,
  AgentCheckpoint,
  TrafficEmit,
  MetricSnapshot,
  ProtocolTimer,
  ScenarioScript,
};

template <class Payload>
struct SimEvent {
  TimeMs fire_time = 0;
  std::uint64_t sequence = 0;
  EventKind kind = EventKind::MetricSnapshot;
  Payload payload{};
};

/// Min-ordered event queue over (fire_time, sequence) that also owns the
/// virtual clock. The clock only advances when an event is popped.
template <class Payload>
class EventQueue {
 public:
  TimeMs now() const { return now_; }
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

  /// Enqueue an event; returns the sequence number assigned to it.
  std::uint64_t schedule(TimeMs fire_time, EventKind kind, Payload payload) {
    if (fire_time < now_) {
      throw InvariantViolation("event scheduled at t=" + std::to_string(fire_time) +
                               " before clock t=" + std::to_string(now_));
    }
    const std::uint64_t seq = next_sequence_++;
    heap_.push_back(SimEvent<Payload>{fire_time, seq, kind, std::move(payload)});
    std::push_heap(heap_.begin(), heap_.end(), Later{});
    return seq;
  }

  std::optional<TimeMs> next_time() const {
    if (heap_.empty()) return std::nullopt;
    return heap_.front().fire_time;
  }

  /// Remove the earliest event and advance the clock to its fire time.
  SimEvent<Payload> pop() {
    if (heap_.empty()) throw InvariantViolation("pop from empty event queue");
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    SimEvent<Payload> ev = std::move(heap_.back());
    heap_.pop_back();
    now_ = ev.fire_time;
    return ev;
  }

 private:
  struct Later {
    bool operator()(const SimEvent<Payload>& a, const SimEvent<Payload>& b) const {
      if (a.fire_time != b.fire_time) return a.fire_time > b.fire_time;
      return a.sequence > b.sequence;
    }
  };

  std::vector<SimEvent<Payload>> heap_;
  std::uint64_t next_sequence_ = 0;
  TimeMs now_ = 0;
};

}  // namespace coaodv
