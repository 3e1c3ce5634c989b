#include "coaodv/aodv.h"

#include <algorithm>

namespace coaodv {

namespace {

enum TimerKind : std::uint32_t {
  kHelloTimer = 1,
  kDiscoveryTimer = 2,
  kParkedTimer = 3,
  kCycleTimer = 4,
  kTransmitEndTimer = 5,
};

}  // namespace

AodvAgent::AodvAgent(Simulator& sim, NodeId self, bool duty_cycled) : RoutingAgent(sim, self), duty_cycled_(duty_cycled) {
  const auto& c = sim_.config();
  duty_ = initial_duty_state(DutyCycle{c.sleep_awake_ms, c.sleep_sleep_ms}, 0);
}

void AodvAgent::start() {
  const auto& c = sim_.config();
  const TimeMs offset = sim_.protocol_rng().uniform_int(0, c.hello_interval_ms - 1);
  sim_.schedule(self_, offset, EventKind::ProtocolTimer, Timer{kHelloTimer, 0, 0});
  if (duty_cycled_) {
    sim_.report_mode(self_, duty_.mode);
    sim_.schedule(self_, duty_.awake_until, EventKind::DutyCycleTick, Timer{kCycleTimer, 0, 0});
  }
}

std::optional<DutyMode> AodvAgent::duty_mode() const {
  if (!duty_cycled_) return std::nullopt;
  return duty_.mode;
}

std::optional<NodeId> AodvAgent::next_hop(NodeId destination) const {
  const auto it = routes_.find(destination);
  if (it == routes_.end() || !it->second.usable(sim_.now())) return std::nullopt;
  return it->second.next_hop;
}

// ---------------------------------------------------------------------------
// Timers

void AodvAgent::on_timer(EventKind kind, const Timer& timer) {
  switch (timer.kind) {
    case kHelloTimer:
      check_neighbors();
      if (!asleep()) send_hello();
      sim_.schedule(self_, sim_.now() + sim_.config().hello_interval_ms, EventKind::ProtocolTimer, timer);
      break;
    case kDiscoveryTimer:
      on_discovery_timeout(static_cast<NodeId>(timer.a), static_cast<std::uint32_t>(timer.b));
      break;
    case kParkedTimer: {
      auto it = parked_.find(timer.a);
      if (it == parked_.end()) break;
      Outgoing out = std::move(it->second);
      parked_.erase(it);
      send(std::move(out));
      break;
    }
    case kCycleTimer:
    case kTransmitEndTimer:
      (void)kind;
      duty_tick();
      break;
    default:
      throw InvariantViolation("unknown AODV timer");
  }
}

// ---------------------------------------------------------------------------
// Neighbor tracking

void AodvAgent::send_hello() {
  Hello h;
  h.uid = self_;
  h.seq = seq_;
  h.duty_cycled = duty_cycled_;
  h.awake_until = duty_.awake_until;
  h.sleep_ms = duty_.cycle.sleep_ms;
  ++hello_seq_;
  send(Outgoing{std::nullopt, h, 0});
}

void AodvAgent::heard(NodeId from) {
  neighbors_[from].last_heard = sim_.now();
  cycle_heard_.insert(from);
}

void AodvAgent::check_neighbors() {
  const auto& c = sim_.config();
  const TimeMs base = static_cast<TimeMs>(c.hello_loss) * c.hello_interval_ms;
  std::vector<NodeId> lost;
  for (const auto& [id, n] : neighbors_) {
    const TimeMs allowance = base + (n.duty_cycled ? 2 * c.sleep_sleep_ms : 0);
    if (sim_.now() - n.last_heard > allowance) lost.push_back(id);
  }
  for (NodeId id : lost) {
    neighbors_.erase(id);
    for (auto& [dest, r] : routes_) {
      if (r.valid && r.next_hop == id) {
        r.valid = false;
        ++r.dest_seq;
        r.rerr_sent = false;
      }
    }
  }
}

void AodvAgent::handle_hello(NodeId from, const Hello& h) {
  auto& n = neighbors_[from];
  n.duty_cycled = h.duty_cycled;
  n.awake_until = h.awake_until;
  n.sleep_ms = h.sleep_ms;
  const auto& c = sim_.config();
  const TimeMs hold = static_cast<TimeMs>(c.hello_loss) * c.hello_interval_ms + (h.duty_cycled ? 2 * c.sleep_sleep_ms : 0);
  update_route(from, from, 1, h.seq, true, sim_.now() + hold);
}

// ---------------------------------------------------------------------------
// Route table

AodvRouteEntry& AodvAgent::touch_route(NodeId dest) {
  auto& e = routes_[dest];
  e.destination = dest;
  return e;
}

bool AodvAgent::update_route(NodeId dest, NodeId next_hop, std::uint32_t hops, std::uint32_t seq, bool valid_seq,
                             TimeMs lifetime) {
  if (dest == self_) return false;
  auto& e = touch_route(dest);
  bool better;
  if (!e.usable(sim_.now())) {
    better = true;
  } else if (valid_seq && e.valid_seq) {
    better = seq > e.dest_seq || (seq == e.dest_seq && hops < e.hop_count);
  } else {
    better = valid_seq;
  }
  if (better) {
    e.next_hop = next_hop;
    e.hop_count = hops;
    if (valid_seq) {
      e.dest_seq = seq;
      e.valid_seq = true;
    }
    e.lifetime = lifetime;
    e.valid = true;
    e.rerr_sent = false;
    return true;
  }
  if (e.next_hop == next_hop) e.lifetime = std::max(e.lifetime, lifetime);
  return false;
}

// ---------------------------------------------------------------------------
// Discovery

void AodvAgent::start_discovery(NodeId dest) {
  if (discoveries_.count(dest)) return;
  auto& m = sim_.metrics();
  ++m.discovery_rounds;
  if (had_route_.count(dest)) ++m.rediscoveries;
  auto& d = discoveries_[dest];
  send_rreq(dest, d);
}

void AodvAgent::send_rreq(NodeId dest, Discovery& d) {
  ++seq_;
  d.rreq_id = ++rreq_counter_;
  seen_rreq_.insert({self_, d.rreq_id});
  AodvRreq r;
  r.origin = self_;
  r.rreq_id = d.rreq_id;
  r.origin_seq = seq_;
  r.dest = dest;
  if (auto it = routes_.find(dest); it != routes_.end() && it->second.valid_seq) {
    r.dest_seq = it->second.dest_seq;
    r.unknown_seq = false;
  }
  ++sim_.metrics().rreq_originated;
  sim_.schedule(self_, sim_.now() + sim_.config().discovery_timeout_ms, EventKind::ProtocolTimer,
                Timer{kDiscoveryTimer, dest, d.rreq_id});
  send(Outgoing{std::nullopt, r, 0});
}

void AodvAgent::on_discovery_timeout(NodeId dest, std::uint32_t rreq_id) {
  auto it = discoveries_.find(dest);
  if (it == discoveries_.end() || it->second.rreq_id != rreq_id) return;
  if (next_hop(dest)) {
    discoveries_.erase(it);
    flush_pending(dest);
    return;
  }
  if (it->second.attempts < sim_.config().discovery_retries) {
    ++it->second.attempts;
    send_rreq(dest, it->second);
    return;
  }
  discoveries_.erase(it);
  pending_.erase(dest);
}

void AodvAgent::handle_rreq(NodeId from, const AodvRreq& r) {
  if (r.origin == self_) return;
  if (!seen_rreq_.insert({r.origin, r.rreq_id}).second) return;
  const auto& c = sim_.config();
  const TimeMs lifetime = sim_.now() + c.active_route_timeout_ms;
  update_route(r.origin, from, r.hop_count + 1, r.origin_seq, true, lifetime);

  if (r.dest == self_) {
    if (!r.unknown_seq && r.dest_seq > seq_) seq_ = r.dest_seq;
    AodvRrep rep{r.origin, self_, seq_, 0, c.active_route_timeout_ms};
    send(Outgoing{from, rep, 0});
    return;
  }
  if (auto it = routes_.find(r.dest); it != routes_.end() && it->second.usable(sim_.now()) && it->second.valid_seq &&
                                      (r.unknown_seq || it->second.dest_seq >= r.dest_seq)) {
    auto& fwd = it->second;
    fwd.precursors.insert(from);
    routes_[r.origin].precursors.insert(fwd.next_hop);
    AodvRrep rep{r.origin, r.dest, fwd.dest_seq, fwd.hop_count, fwd.lifetime - sim_.now()};
    send(Outgoing{from, rep, 0});
    return;
  }

  AodvRreq fwd = r;
  ++fwd.hop_count;
  if (auto it = routes_.find(r.dest); it != routes_.end() && it->second.valid_seq) {
    if (fwd.unknown_seq || it->second.dest_seq > fwd.dest_seq) fwd.dest_seq = it->second.dest_seq;
    fwd.unknown_seq = false;
  }
  const TimeMs jitter = c.rreq_jitter_ms > 0 ? sim_.protocol_rng().uniform_int(0, c.rreq_jitter_ms) : 0;
  if (jitter == 0) {
    send(Outgoing{std::nullopt, fwd, 0});
    return;
  }
  const auto id = parked_counter_++;
  parked_.emplace(id, Outgoing{std::nullopt, fwd, 0});
  sim_.schedule(self_, sim_.now() + jitter, EventKind::ProtocolTimer, Timer{kParkedTimer, id, 0});
}

void AodvAgent::handle_rrep(NodeId from, const AodvRrep& r) {
  const auto& c = sim_.config();
  const TimeMs lifetime = sim_.now() + std::max<TimeMs>(r.lifetime_ms, 1);
  const bool updated = update_route(r.dest, from, r.hop_count + 1, r.dest_seq, true, lifetime);

  if (r.origin == self_) {
    if (!next_hop(r.dest)) return;
    had_route_.insert(r.dest);
    discoveries_.erase(r.dest);
    flush_pending(r.dest);
    return;
  }
  if (!updated) return;
  auto rev = routes_.find(r.origin);
  if (rev == routes_.end() || !rev->second.usable(sim_.now())) return;
  routes_[r.dest].precursors.insert(rev->second.next_hop);
  rev->second.precursors.insert(from);
  rev->second.lifetime = std::max(rev->second.lifetime, sim_.now() + c.active_route_timeout_ms);
  AodvRrep fwd = r;
  ++fwd.hop_count;
  send(Outgoing{rev->second.next_hop, fwd, 0});
}

void AodvAgent::handle_rerr(NodeId from, const AodvRerr& r) {
  std::vector<std::pair<NodeId, std::uint32_t>> onward;
  for (const auto& [dest, seq] : r.unreachable) {
    auto it = routes_.find(dest);
    if (it == routes_.end() || !it->second.valid || it->second.next_hop != from) continue;
    auto& e = it->second;
    e.valid = false;
    e.dest_seq = std::max(e.dest_seq, seq);
    if (!e.precursors.empty()) {
      onward.emplace_back(dest, e.dest_seq);
      e.rerr_sent = true;
    }
  }
  if (!onward.empty()) send(Outgoing{std::nullopt, AodvRerr{std::move(onward)}, 0});
}

void AodvAgent::send_rerr(std::vector<std::pair<NodeId, std::uint32_t>> unreachable) {
  ++sim_.metrics().rerr_originated;
  send(Outgoing{std::nullopt, AodvRerr{std::move(unreachable)}, 0});
}

// ---------------------------------------------------------------------------
// Data plane

void AodvAgent::on_originate(DataPacket packet) {
  note_traffic(true);
  forward_data(std::move(packet), std::nullopt);
}

void AodvAgent::handle_data(NodeId from, DataPacket p) {
  note_traffic(true);
  if (p.dst == self_) {
    sim_.deliver(p);
    return;
  }
  forward_data(std::move(p), from);
}

void AodvAgent::forward_data(DataPacket p, std::optional<NodeId> prev) {
  const auto& c = sim_.config();
  auto it = routes_.find(p.dst);
  if (it != routes_.end() && it->second.usable(sim_.now())) {
    auto& e = it->second;
    if (prev) e.precursors.insert(*prev);
    e.lifetime = std::max(e.lifetime, sim_.now() + c.active_route_timeout_ms);
    if (auto back = routes_.find(p.src); back != routes_.end() && back->second.usable(sim_.now()))
      back->second.lifetime = std::max(back->second.lifetime, sim_.now() + c.active_route_timeout_ms);
    send(Outgoing{e.next_hop, std::move(p), 0});
    return;
  }
  if (p.src == self_) {
    auto& q = pending_[p.dst];
    if (q.size() >= c.pending_queue) q.pop_front();
    const NodeId dst = p.dst;
    q.push_back(std::move(p));
    start_discovery(dst);
    return;
  }
  // Transit packet without a route: drop it and report the destination once.
  if (it != routes_.end() && !it->second.rerr_sent) {
    auto& e = it->second;
    if (e.valid) {
      e.valid = false;
      ++e.dest_seq;
    }
    e.rerr_sent = true;
    send_rerr({{p.dst, e.dest_seq}});
  }
}

void AodvAgent::flush_pending(NodeId dest) {
  auto it = pending_.find(dest);
  if (it == pending_.end()) return;
  auto queue = std::move(it->second);
  pending_.erase(it);
  for (auto& p : queue) forward_data(std::move(p), std::nullopt);
}

void AodvAgent::link_broken(NodeId neighbor, std::optional<DataPacket> failed) {
  neighbors_.erase(neighbor);
  std::vector<std::pair<NodeId, std::uint32_t>> unreachable;
  for (auto& [dest, e] : routes_) {
    if (!e.valid || e.next_hop != neighbor) continue;
    e.valid = false;
    ++e.dest_seq;
    if (!e.precursors.empty()) {
      unreachable.emplace_back(dest, e.dest_seq);
      e.rerr_sent = true;
    } else {
      e.rerr_sent = false;
    }
  }
  if (!unreachable.empty()) send_rerr(std::move(unreachable));
  if (failed && failed->src == self_) forward_data(std::move(*failed), std::nullopt);
}

// ---------------------------------------------------------------------------
// Transmission

void AodvAgent::on_receive(NodeId from, const Packet& packet) {
  if (asleep()) throw InvariantViolation("sleeping node received a packet");
  const bool set_receive = duty_cycled_ && duty_.mode == DutyMode::Idle;
  if (set_receive) set_mode(DutyMode::Receive);
  heard(from);
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Hello>) {
          handle_hello(from, p);
        } else if constexpr (std::is_same_v<T, AodvRreq>) {
          handle_rreq(from, p);
        } else if constexpr (std::is_same_v<T, AodvRrep>) {
          handle_rrep(from, p);
        } else if constexpr (std::is_same_v<T, AodvRerr>) {
          handle_rerr(from, p);
        } else if constexpr (std::is_same_v<T, DataPacket>) {
          handle_data(from, p);
        }
      },
      packet);
  if (duty_cycled_ && duty_.mode == DutyMode::Receive) set_mode(DutyMode::Idle);
}

std::optional<TimeMs> AodvAgent::predicted_wake(NodeId neighbor) const {
  const auto it = neighbors_.find(neighbor);
  if (it == neighbors_.end() || !it->second.duty_cycled) return std::nullopt;
  const auto& n = it->second;
  const TimeMs now = sim_.now();
  if (now < n.awake_until) return std::nullopt;
  const TimeMs period = duty_.cycle.awake_ms + n.sleep_ms;
  const TimeMs k = (now - n.awake_until) / period;
  const TimeMs sleep_start = n.awake_until + k * period;
  if (now < sleep_start + n.sleep_ms) return sleep_start + n.sleep_ms;
  return std::nullopt;
}

void AodvAgent::send(Outgoing out) {
  if (asleep()) {
    outbox_.push_back(std::move(out));
    return;
  }
  if (out.to && duty_cycled_) {
    if (auto wake_at = predicted_wake(*out.to)) {
      const auto id = parked_counter_++;
      parked_.emplace(id, std::move(out));
      sim_.schedule(self_, *wake_at, EventKind::ProtocolTimer, Timer{kParkedTimer, id, 0});
      return;
    }
  }
  transmit(std::move(out));
}

void AodvAgent::transmit(Outgoing out) {
  if (duty_cycled_) {
    if (duty_.mode == DutyMode::Receive) set_mode(DutyMode::Idle);
    if (duty_.mode != DutyMode::Transmit) set_mode(DutyMode::Transmit);
    transmit_until_ = sim_.now() + sim_.config().hop_latency_ms;
    sim_.schedule(self_, transmit_until_, EventKind::DutyCycleTick, Timer{kTransmitEndTimer, 0, 0});
  }
  if (!out.to) {
    sim_.broadcast(self_, out.packet);
    return;
  }
  if (!sim_.unicast(self_, *out.to, out.packet)) on_unicast_failure(std::move(out));
}

void AodvAgent::on_unicast_failure(Outgoing out) {
  const NodeId to = *out.to;
  if (duty_cycled_ && out.attempts < 2 && neighbors_.count(to)) {
    ++out.attempts;
    const TimeMs retry_at = predicted_wake(to).value_or(sim_.now() + duty_.cycle.sleep_ms);
    const auto id = parked_counter_++;
    parked_.emplace(id, std::move(out));
    sim_.schedule(self_, retry_at, EventKind::ProtocolTimer, Timer{kParkedTimer, id, 0});
    return;
  }
  if (auto* data = std::get_if<DataPacket>(&out.packet)) {
    link_broken(to, std::move(*data));
    return;
  }
  if (std::holds_alternative<AodvRrep>(out.packet)) neighbors_.erase(to);
}

// ---------------------------------------------------------------------------
// Duty cycle

void AodvAgent::set_mode(DutyMode mode) {
  if (!allowed_transition(duty_.mode, mode))
    throw InvariantViolation("illegal duty-cycle transition " + std::string(to_string(duty_.mode)) + " -> " +
                             std::string(to_string(mode)));
  if (duty_.mode == mode) return;
  duty_.mode = mode;
  sim_.report_mode(self_, mode);
}

void AodvAgent::note_traffic(bool data) {
  if (data) cycle_data_ = true;
}

void AodvAgent::duty_tick() {
  if (!duty_cycled_) return;
  const TimeMs now = sim_.now();
  if (duty_.mode == DutyMode::Transmit) {
    if (now < transmit_until_) return;
    duty_ = duty_cycle_tick(duty_, now, NodeBehavior{});
    sim_.report_mode(self_, duty_.mode);
  }
  if (duty_.mode == DutyMode::Sleep) {
    if (now >= duty_.sleep_until) wake();
    return;
  }
  if (duty_.mode != DutyMode::Idle || now < duty_.awake_until) return;

  NodeBehavior b;
  b.isolated = cycle_heard_.empty();
  std::size_t changed = 0;
  std::set<NodeId> all = cycle_heard_;
  all.insert(last_cycle_heard_.begin(), last_cycle_heard_.end());
  for (NodeId id : all)
    if (cycle_heard_.count(id) != last_cycle_heard_.count(id)) ++changed;
  b.unstable = !all.empty() && static_cast<double>(changed) / static_cast<double>(all.size()) >
                                   sim_.config().unstable_change_fraction;
  b.inactive = !cycle_data_;
  duty_ = duty_cycle_tick(duty_, now, b);
  sim_.report_mode(self_, duty_.mode);
  sim_.set_radio(self_, false);
  last_cycle_heard_ = std::move(cycle_heard_);
  cycle_heard_.clear();
  cycle_data_ = false;
  sim_.schedule(self_, duty_.sleep_until, EventKind::DutyCycleTick, Timer{kCycleTimer, 0, 0});
}

void AodvAgent::wake() {
  duty_ = duty_cycle_tick(duty_, sim_.now(), NodeBehavior{});
  sim_.set_radio(self_, true);
  sim_.report_mode(self_, duty_.mode);
  sim_.schedule(self_, duty_.awake_until, EventKind::DutyCycleTick, Timer{kCycleTimer, 0, 0});
  auto queued = std::move(outbox_);
  outbox_.clear();
  for (auto& out : queued) send(std::move(out));
}

}  // namespace coaodv
