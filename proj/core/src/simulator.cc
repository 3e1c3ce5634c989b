#include "coaodv/simulator.h"

#include <algorithm>

#include "coaodv/aodv.h"
#include "coaodv/coaodv.h"

namespace coaodv {

namespace {

constexpr std::uint64_t kMobilityStream = 1;
constexpr std::uint64_t kLossStream = 2;
constexpr std::uint64_t kProtocolStream = 3;

std::unique_ptr<RoutingAgent> make_agent(Simulator& sim, NodeId id, Protocol protocol) {
  switch (protocol) {
    case Protocol::Aodv: return std::make_unique<AodvAgent>(sim, id, false);
    case Protocol::SleepAodv: return std::make_unique<AodvAgent>(sim, id, true);
    case Protocol::Coaodv: return std::make_unique<CoaodvAgent>(sim, id);
  }
  throw ConfigError("unknown protocol");
}

}  // namespace

Simulator::Simulator(Scenario scenario, SimObserver* observer)
    : scenario_(std::move(scenario)),
      observer_(observer),
      contacts_(scenario_.nodes.size(), scenario_.config.grid_cell_m,
                Area{scenario_.config.area_width_m, scenario_.config.area_height_m}),
      mobility_rng_(Rng::stream(scenario_.seed, kMobilityStream)),
      loss_rng_(Rng::stream(scenario_.seed, kLossStream)),
      protocol_rng_(Rng::stream(scenario_.seed, kProtocolStream)) {
  const auto& c = scenario_.config;
  for (std::size_t i = 0; i < scenario_.nodes.size(); ++i) {
    if (scenario_.nodes[i].uid != i) throw InvariantViolation("nodes must be indexed by uid");
  }
  if (scenario_.traits.size() != scenario_.nodes.size()) throw InvariantViolation("one traits entry per node");
  mobility_ = MobilityParams{Area{c.area_width_m, c.area_height_m}, c.speed_lo_mps, c.speed_hi_mps, c.pause_lo_ms,
                             c.pause_hi_ms};
  track_contacts_ = scenario_.protocol == Protocol::Coaodv;

  metrics_.protocol = std::string(to_string(scenario_.protocol));
  metrics_.nodes = scenario_.nodes.size();
  metrics_.connections = scenario_.flows.size();
  metrics_.seed = scenario_.seed;

  agents_.reserve(scenario_.nodes.size());
  for (std::size_t i = 0; i < scenario_.nodes.size(); ++i)
    agents_.push_back(make_agent(*this, static_cast<NodeId>(i), scenario_.protocol));
}

Simulator::~Simulator() = default;

RunMetrics Simulator::run() {
  const auto& c = scenario_.config;
  queue_.schedule(0, EventKind::MobilityStep, std::monostate{});
  queue_.schedule(c.metric_snapshot_ms, EventKind::MetricSnapshot, std::monostate{});
  for (std::size_t f = 0; f < scenario_.flows.size(); ++f) {
    const auto& flow = scenario_.flows[f];
    for (const auto& e :
         emit_cbr(flow.connection, flow.rate_pps, c.payload_bytes, flow.start, std::min(flow.stop, c.duration_ms)))
      queue_.schedule(e.time, EventKind::TrafficEmit, Emit{e, f});
  }
  for (std::size_t i = 0; i < scenario_.script.size(); ++i)
    queue_.schedule(scenario_.script[i].time, EventKind::ScenarioScript, ScriptStep{i});
  for (auto& agent : agents_) agent->start();

  while (auto t = queue_.next_time()) {
    if (*t > c.duration_ms) break;
    auto ev = queue_.pop();
    dispatch(ev);
  }
  return metrics_;
}

void Simulator::dispatch(SimEvent<Payload>& ev) {
  switch (ev.kind) {
    case EventKind::PacketDelivery: {
      auto& d = std::get<Delivery>(ev.payload);
      const bool control = is_control(d.packet);
      if (!scenario_.nodes[d.to].radio_on) {
        ++metrics_.lost_asleep;
        trace(d.to, TraceRecord::Kind::LostAsleep, control);
        return;
      }
      trace(d.to, TraceRecord::Kind::Receive, control);
      agents_[d.to]->on_receive(d.from, d.packet);
      return;
    }
    case EventKind::MobilityStep:
      mobility_step();
      return;
    case EventKind::DutyCycleTick:
    case EventKind::AgentCheckpoint:
    case EventKind::ProtocolTimer: {
      const auto& n = std::get<NodeEvent>(ev.payload);
      agents_[n.node]->on_timer(ev.kind, n.timer);
      return;
    }
    case EventKind::TrafficEmit: {
      const auto& e = std::get<Emit>(ev.payload).emission;
      ++metrics_.data_sent;
      DataPacket p;
      p.id = e.id;
      p.src = e.src;
      p.dst = e.dst;
      p.origin_time = e.time;
      p.payload_bytes = e.payload_bytes;
      p.flow_total = e.flow_total;
      agents_[e.src]->on_originate(std::move(p));
      return;
    }
    case EventKind::MetricSnapshot:
      if (observer_) observer_->on_snapshot(*this);
      queue_.schedule(now() + scenario_.config.metric_snapshot_ms, EventKind::MetricSnapshot, std::monostate{});
      return;
    case EventKind::ScenarioScript:
      apply_script(scenario_.script[std::get<ScriptStep>(ev.payload).index]);
      return;
  }
}

void Simulator::mobility_step() {
  const TimeMs step = scenario_.config.mobility_step_ms;
  const TimeMs t = now();
  if (t > 0) {
    for (auto& n : scenario_.nodes) n = mobility_step_fn(n, t - step, step);
  }
  if (track_contacts_) contacts_.observe(t, step, scenario_.nodes);
  for (auto& agent : agents_) agent->on_mobility_step();
  queue_.schedule(t + step, EventKind::MobilityStep, std::monostate{});
}

NodeState Simulator::mobility_step_fn(const NodeState& n, TimeMs from, TimeMs dt) {
  return coaodv::mobility_step(n, from, dt, mobility_rng_, mobility_);
}

void Simulator::apply_script(const ScriptAction& action) {
  auto& n = scenario_.nodes.at(action.node);
  switch (action.kind) {
    case ScriptAction::Kind::MoveTo:
      n.position = action.position;
      n.waypoint = action.position;
      break;
    case ScriptAction::Kind::SetSpeed:
      n.speed = action.value;
      break;
    case ScriptAction::Kind::SetResource:
      n.resource_pool = std::clamp(action.value, 0.0, 1.0);
      break;
    case ScriptAction::Kind::SetRadio:
      n.radio_on = action.flag;
      break;
  }
}

bool Simulator::linked_now(NodeId a, NodeId b) const {
  return a != b && linked(scenario_.nodes.at(a), scenario_.nodes.at(b));
}

std::vector<NodeId> Simulator::neighbors_of(NodeId id) const { return neighbors(scenario_.nodes, id); }

void Simulator::charge(NodeId from, bool control) {
  const auto& c = scenario_.config;
  if (control) {
    metrics_.count_control();
  } else {
    metrics_.count_data_transmission();
  }
  auto& n = scenario_.nodes[from];
  if (!n.is_static) n.resource_pool = std::max(0.0, n.resource_pool - (control ? c.resource_cost_control : c.resource_cost_data));
  trace(from, TraceRecord::Kind::Transmit, control);
}

void Simulator::trace(NodeId node, TraceRecord::Kind kind, bool control) {
  if (!observer_) return;
  observer_->on_trace(TraceRecord{now(), node, kind, agents_[node]->duty_mode(), control});
}

bool Simulator::unicast(NodeId from, NodeId to, Packet packet) {
  const auto& sender = scenario_.nodes.at(from);
  if (!sender.radio_on) throw InvariantViolation("node " + std::to_string(from) + " transmitted with its radio off");
  const auto& receiver = scenario_.nodes.at(to);
  if (from == to || distance(sender.position, receiver.position) > std::min(sender.range, receiver.range)) return false;

  const bool control = is_control(packet);
  charge(from, control);
  if (!receiver.radio_on) {
    ++metrics_.lost_asleep;
    trace(to, TraceRecord::Kind::LostAsleep, control);
    return false;
  }
  if (!control && !receiver.is_static && receiver.resource_pool < scenario_.config.resource_floor &&
      std::get<DataPacket>(packet).dst != to)
    return false;
  if (loss_rng_.bernoulli(scenario_.config.loss_probability)) return true;
  queue_.schedule(now() + scenario_.config.hop_latency_ms, EventKind::PacketDelivery,
                  Delivery{from, to, std::move(packet)});
  return true;
}

void Simulator::broadcast(NodeId from, Packet packet) {
  const auto& sender = scenario_.nodes.at(from);
  if (!sender.radio_on) throw InvariantViolation("node " + std::to_string(from) + " transmitted with its radio off");
  const bool control = is_control(packet);
  charge(from, control);
  for (const auto& n : scenario_.nodes) {
    if (n.uid == from || distance(sender.position, n.position) > std::min(sender.range, n.range)) continue;
    if (!n.radio_on) {
      ++metrics_.lost_asleep;
      trace(n.uid, TraceRecord::Kind::LostAsleep, control);
      continue;
    }
    if (loss_rng_.bernoulli(scenario_.config.loss_probability)) continue;
    queue_.schedule(now() + scenario_.config.hop_latency_ms, EventKind::PacketDelivery, Delivery{from, n.uid, packet});
  }
}

void Simulator::schedule(NodeId node, TimeMs at, EventKind kind, Timer timer) {
  queue_.schedule(at, kind, NodeEvent{node, timer});
}

void Simulator::set_radio(NodeId node, bool on) { scenario_.nodes.at(node).radio_on = on; }

void Simulator::set_speed(NodeId node, double speed) { scenario_.nodes.at(node).speed = speed; }

void Simulator::report_mode(NodeId node, DutyMode mode) {
  if (!observer_) return;
  observer_->on_trace(TraceRecord{now(), node, TraceRecord::Kind::ModeChange, mode, true});
}

void Simulator::report_csl(NodeId node, NodeId source, NodeId target, Csl csl) {
  ++metrics_.csl_counts[static_cast<std::size_t>(level(csl))];
  if (observer_) observer_->on_csl(node, source, target, csl);
}

void Simulator::report_route(NodeId source, NodeId target, std::span<const NodeId> route) {
  if (observer_) observer_->on_route_installed(source, target, route);
}

void Simulator::deliver(const DataPacket& packet) {
  const TimeMs delay = now() - packet.origin_time;
  if (metrics_.record_delivery(packet.id, delay) && observer_) observer_->on_delivery(packet, delay);
}

RunMetrics run_scenario(Scenario scenario, SimObserver* observer) {
  Simulator sim(std::move(scenario), observer);
  return sim.run();
}

RunMetrics run_cell(const ScenarioConfig& config, Protocol protocol, std::uint32_t connections, std::uint64_t seed,
                    SimObserver* observer) {
  return run_scenario(generate_scenario(config, protocol, connections, seed), observer);
}

}  // namespace coaodv
