#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coaodv/types.h"

namespace coaodv {

// Behavior -> Observation -> Belief pipeline of the mobile cognitive agent.

struct BehaviorParam {
  std::string name;
  double current = 0.0;
  double max_possible = 1.0;
  double alpha = 1.0;
};

struct BehaviorScore {
  std::string name;
  double bh = 0.0;
};

/// bh = alpha * current / max_possible. Throws std::invalid_argument when the
/// parameter violates 0 <= current <= max_possible, max_possible > 0.
BehaviorScore behavior_score(const BehaviorParam& p);

/// Ring buffer of the last `capacity` sessions; each session records which
/// parameters were exercised.
class SessionHistory {
 public:
  explicit SessionHistory(std::size_t capacity = 20) : capacity_(capacity) {}

  void record(std::vector<std::string> exercised);
  std::size_t sessions() const { return sessions_.size(); }
  std::size_t capacity() const { return capacity_; }
  /// Sessions (of the retained ones) in which `name` was exercised.
  std::size_t count(std::string_view name) const;

 private:
  std::size_t capacity_;
  std::deque<std::vector<std::string>> sessions_;
};

/// alpha_k = sessions exercising k / sessions retained. An empty or all-zero
/// history gives every parameter alpha = 1.
std::map<std::string, double> behavior_weight(const SessionHistory& history, std::span<const std::string> params);

enum class Profile : std::uint8_t { Low, High };

struct Observation {
  Profile resource_profile = Profile::Low;
  Profile mobility_profile = Profile::Low;
  std::vector<std::string> evidence;
};

struct ObservationThresholds {
  double resource = 0.5;   // on mean bh
  double mobility = 1.0;   // m/s
};

Observation generate_observation(std::span<const BehaviorScore> scores, double speed,
                                 const ObservationThresholds& thresholds);

enum class BeliefClass : std::uint8_t { Patron = 0, Casual = 1, Slack = 2, Vargant = 3 };

std::string_view to_string(BeliefClass c);

struct Belief {
  BeliefClass cls = BeliefClass::Vargant;
  TimeMs formed_at = 0;
  Observation observation;
};

/// Table lookup: (High, High) Patron, (Low, High) Casual, (High, Low) Slack,
/// (Low, Low) Vargant, keyed (resource, mobility).
Belief formulate_belief(const Observation& obs, TimeMs now);

/// Belief-exchange message as carried on the air.
struct BeliefMessage {
  NodeId uid = 0;
  BeliefClass cls = BeliefClass::Vargant;
  std::uint64_t timestamp = 0;  // ms

  friend bool operator==(const BeliefMessage&, const BeliefMessage&) = default;
};

struct BeliefRecord {
  struct Entry {
    Belief belief;
    TimeMs received_at = 0;
  };

  std::map<NodeId, Entry> entries;
  Belief self_entry;
};

/// Newest-timestamp-wins merge followed by pruning of entries older than
/// `staleness_ms` relative to `now`.
BeliefRecord exchange_beliefs(BeliefRecord record, std::span<const BeliefMessage> messages, TimeMs now,
                              TimeMs staleness_ms);

/// The per-node mobile cognitive agent: owns its session log, belief record
/// and thresholds.
class CognitiveAgent {
 public:
  CognitiveAgent(NodeId uid, ObservationThresholds thresholds, std::size_t history_sessions, TimeMs staleness_ms);

  NodeId uid() const { return uid_; }
  const ObservationThresholds& thresholds() const { return thresholds_; }
  const BeliefRecord& record() const { return record_; }
  const SessionHistory& history() const { return history_; }

  /// Close a session: log which params were exercised, then score them.
  Belief checkpoint(std::span<const BehaviorParam> params, double speed, TimeMs now);
  /// Formulate a belief from the current readings without closing a session.
  Belief formulate(std::span<const BehaviorParam> params, double speed, TimeMs now,
                   const ObservationThresholds& thresholds) const;

  void receive(const BeliefMessage& msg, TimeMs now);
  void prune(TimeMs now);
  std::optional<BeliefClass> belief_of(NodeId peer) const;

 private:
  NodeId uid_;
  ObservationThresholds thresholds_;
  SessionHistory history_;
  TimeMs staleness_ms_;
  BeliefRecord record_;
};

}  // namespace coaodv
