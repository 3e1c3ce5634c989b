#include "coaodv/agent.h"

#include <algorithm>
#include <stdexcept>

namespace coaodv {

BehaviorScore behavior_score(const BehaviorParam& p) {
  if (!(p.max_possible > 0.0) || p.current < 0.0 || p.current > p.max_possible || p.alpha < 0.0 || p.alpha > 1.0) {
    throw std::invalid_argument("behavior parameter '" + p.name + "' out of range");
  }
  return {p.name, p.alpha * p.current / p.max_possible};
}

void SessionHistory::record(std::vector<std::string> exercised) {
  if (capacity_ == 0) return;
  if (sessions_.size() == capacity_) sessions_.pop_front();
  sessions_.push_back(std::move(exercised));
}

std::size_t SessionHistory::count(std::string_view name) const {
  return static_cast<std::size_t>(std::count_if(sessions_.begin(), sessions_.end(), [&](const auto& s) {
    return std::find(s.begin(), s.end(), name) != s.end();
  }));
}

std::map<std::string, double> behavior_weight(const SessionHistory& history, std::span<const std::string> params) {
  std::map<std::string, double> alpha;
  std::size_t total = 0;
  for (const auto& p : params) total += history.count(p);
  for (const auto& p : params) {
    alpha[p] = (history.sessions() == 0 || total == 0)
                   ? 1.0
                   : static_cast<double>(history.count(p)) / static_cast<double>(history.sessions());
  }
  return alpha;
}

Observation generate_observation(std::span<const BehaviorScore> scores, double speed,
                                 const ObservationThresholds& thresholds) {
  Observation obs;
  obs.mobility_profile = speed >= thresholds.mobility ? Profile::High : Profile::Low;
  if (scores.empty()) return obs;

  double sum = 0.0;
  for (const auto& s : scores) {
    sum += s.bh;
    if (s.bh >= thresholds.resource) obs.evidence.push_back(s.name);
  }
  obs.resource_profile = sum / static_cast<double>(scores.size()) >= thresholds.resource ? Profile::High : Profile::Low;
  return obs;
}

std::string_view to_string(BeliefClass c) {
  switch (c) {
    case BeliefClass::Patron: return "patron";
    case BeliefClass::Casual: return "casual";
    case BeliefClass::Slack: return "slack";
    case BeliefClass::Vargant: return "vargant";
  }
  return "unknown";
}

Belief formulate_belief(const Observation& obs, TimeMs now) {
  Belief b;
  b.formed_at = now;
  b.observation = obs;
  const bool rich = obs.resource_profile == Profile::High;
  const bool mobile = obs.mobility_profile == Profile::High;
  if (rich && mobile) {
    b.cls = BeliefClass::Patron;
  } else if (!rich && mobile) {
    b.cls = BeliefClass::Casual;
  } else if (rich) {
    b.cls = BeliefClass::Slack;
  } else {
    b.cls = BeliefClass::Vargant;
  }
  return b;
}

BeliefRecord exchange_beliefs(BeliefRecord record, std::span<const BeliefMessage> messages, TimeMs now,
                              TimeMs staleness_ms) {
  for (const auto& m : messages) {
    const auto stamp = static_cast<TimeMs>(m.timestamp);
    auto it = record.entries.find(m.uid);
    if (it != record.entries.end() && it->second.received_at >= stamp) continue;
    BeliefRecord::Entry entry;
    entry.belief.cls = m.cls;
    entry.belief.formed_at = stamp;
    entry.received_at = stamp;
    record.entries[m.uid] = std::move(entry);
  }
  std::erase_if(record.entries, [&](const auto& kv) { return now - kv.second.received_at > staleness_ms; });
  return record;
}

// ---------------------------------------------------------------------------

CognitiveAgent::CognitiveAgent(NodeId uid, ObservationThresholds thresholds, std::size_t history_sessions,
                               TimeMs staleness_ms)
    : uid_(uid), thresholds_(thresholds), history_(history_sessions), staleness_ms_(staleness_ms) {}

Belief CognitiveAgent::formulate(std::span<const BehaviorParam> params, double speed, TimeMs now,
                                 const ObservationThresholds& thresholds) const {
  std::vector<std::string> names;
  names.reserve(params.size());
  for (const auto& p : params) names.push_back(p.name);
  const auto alpha = behavior_weight(history_, names);

  std::vector<BehaviorScore> scores;
  scores.reserve(params.size());
  for (auto p : params) {
    p.alpha = alpha.at(p.name);
    scores.push_back(behavior_score(p));
  }
  return formulate_belief(generate_observation(scores, speed, thresholds), now);
}

Belief CognitiveAgent::checkpoint(std::span<const BehaviorParam> params, double speed, TimeMs now) {
  std::vector<std::string> exercised;
  for (const auto& p : params) {
    if (p.current > 0.0) exercised.push_back(p.name);
  }
  history_.record(std::move(exercised));
  record_.self_entry = formulate(params, speed, now, thresholds_);
  prune(now);
  return record_.self_entry;
}

void CognitiveAgent::receive(const BeliefMessage& msg, TimeMs now) {
  record_ = exchange_beliefs(std::move(record_), std::span(&msg, 1), now, staleness_ms_);
}

void CognitiveAgent::prune(TimeMs now) {
  std::erase_if(record_.entries, [&](const auto& kv) { return now - kv.second.received_at > staleness_ms_; });
}

std::optional<BeliefClass> CognitiveAgent::belief_of(NodeId peer) const {
  auto it = record_.entries.find(peer);
  if (it == record_.entries.end()) return std::nullopt;
  return it->second.belief.cls;
}

}  // namespace coaodv
