#include "coaodv/coaodv.h"

#include <algorithm>
#include <cmath>

#include "coaodv/scenario.h"

namespace coaodv {

namespace {

enum TimerKind : std::uint32_t {
  kCheckpointTimer = 1,
  kDiscoveryTimer = 2,
  kWindowTimer = 3,
  kOfferTimer = 4,
  kParkedTimer = 5,
};

constexpr double kRelayCapacity = 4.0;  // concurrent relayed flows at full bandwidth share

ContextParams context_params(const ScenarioConfig& c) {
  ContextParams p;
  p.weight_age = c.context_weight_age;
  p.weight_count = c.context_weight_count;
  p.weight_location = c.context_weight_location;
  p.tau_ms = c.context_tau_ms;
  p.count_cap = c.context_count_cap;
  return p;
}

ObservationThresholds thresholds_of(const ScenarioConfig& c) {
  return ObservationThresholds{c.belief_resource_threshold, c.belief_mobility_threshold_mps};
}

std::optional<std::size_t> index_of(const std::vector<NodeId>& route, NodeId id) {
  const auto it = std::find(route.begin(), route.end(), id);
  if (it == route.end()) return std::nullopt;
  return static_cast<std::size_t>(it - route.begin());
}

}  // namespace

CoaodvAgent::CoaodvAgent(Simulator& sim, NodeId self)
    : RoutingAgent(sim, self),
      mca_(self, thresholds_of(sim.config()), sim.config().session_history, sim.config().belief_staleness_ms) {}

void CoaodvAgent::start() {
  belief_ = mca_.checkpoint(behavior_params(), sim_.node(self_).speed, 0);
  const TimeMs offset = sim_.protocol_rng().uniform_int(0, sim_.config().agent_checkpoint_ms - 1);
  sim_.schedule(self_, offset, EventKind::AgentCheckpoint, Timer{kCheckpointTimer, 0, 0});
}

// ---------------------------------------------------------------------------
// Cognitive agent inputs

AffinityProfile CoaodvAgent::profile() const {
  const auto& n = sim_.node(self_);
  const auto& t = sim_.traits(self_);
  const auto& c = sim_.config();
  AffinityProfile p;
  p.contexts = t.contexts;
  p.resources = t.resources;
  const Vec2 heading = n.is_static ? n.position : n.waypoint;
  p.destinations[destination_tag(heading, Area{c.area_width_m, c.area_height_m}, c.destination_zones)] = 1;
  return p;
}

OclLevel CoaodvAgent::ocl_toward(NodeId peer) const {
  const auto& other = static_cast<const CoaodvAgent&>(sim_.agent(peer));
  const auto sim_x = sim_.contacts().similarity(self_, peer, sim_.now(), context_params(sim_.config()));
  return contact_analyzer(profile(), other.profile(), sim_x);
}

std::vector<BehaviorParam> CoaodvAgent::behavior_params() const {
  const auto& n = sim_.node(self_);
  const auto& t = sim_.traits(self_);
  const auto& c = sim_.config();
  std::size_t relaying = 0;
  for (const auto& [key, row] : rows_) {
    if (key.first != self_ && sim_.now() - row.last_forward <= c.active_route_timeout_ms) ++relaying;
  }
  const double free_buffer = 1.0 - static_cast<double>(carry_.size()) / static_cast<double>(c.carry_buffer);
  const double share = 1.0 - std::min(1.0, static_cast<double>(relaying) / kRelayCapacity);
  return {
      BehaviorParam{"energy", std::clamp(n.resource_pool, 0.0, 1.0), 1.0, 1.0},
      BehaviorParam{"memory", std::clamp(free_buffer * t.memory_class, 0.0, 1.0), 1.0, 1.0},
      BehaviorParam{"bandwidth", std::clamp(share, 0.0, 1.0), 1.0, 1.0},
      BehaviorParam{"compute", std::clamp(t.compute_class, 0.0, 1.0), 1.0, 1.0},
  };
}

Belief CoaodvAgent::fresh_belief(const ObservationThresholds& thresholds) const {
  return mca_.formulate(behavior_params(), sim_.node(self_).speed, sim_.now(), thresholds);
}

bool CoaodvAgent::knows_fresh(NodeId peer) const {
  const auto& entries = mca_.record().entries;
  const auto it = entries.find(peer);
  return it != entries.end() && sim_.now() - it->second.received_at <= 2 * sim_.config().agent_checkpoint_ms;
}

Csl CoaodvAgent::source_csl() const {
  OclLevel best = OclLevel::Low;
  for (const auto& [peer, entry] : mca_.record().entries) {
    if (!knows_fresh(peer)) continue;
    best = std::min(best, ocl_toward(peer));
  }
  return route_handling_logic(best, belief_.cls);
}

std::optional<Csl> CoaodvAgent::estimated_csl(NodeId peer) const {
  const auto cls = mca_.belief_of(peer);
  if (!cls) return std::nullopt;
  return route_handling_logic(ocl_toward(peer), *cls);
}

// ---------------------------------------------------------------------------
// Timers

void CoaodvAgent::on_timer(EventKind, const Timer& timer) {
  switch (timer.kind) {
    case kCheckpointTimer:
      checkpoint();
      sim_.schedule(self_, sim_.now() + sim_.config().agent_checkpoint_ms, EventKind::AgentCheckpoint, timer);
      break;
    case kDiscoveryTimer:
    case kWindowTimer:
      close_discovery(static_cast<NodeId>(timer.a), static_cast<std::uint32_t>(timer.b));
      break;
    case kOfferTimer:
      close_offer(static_cast<std::uint32_t>(timer.a));
      break;
    case kParkedTimer: {
      auto it = parked_.find(timer.a);
      if (it == parked_.end()) break;
      sim_.broadcast(self_, std::move(it->second));
      parked_.erase(it);
      break;
    }
    default:
      throw InvariantViolation("unknown COAODV timer");
  }
}

void CoaodvAgent::checkpoint() {
  const auto& c = sim_.config();
  belief_ = mca_.checkpoint(behavior_params(), sim_.node(self_).speed, sim_.now());
  sim_.broadcast(self_, BeliefBeacon{BeliefMessage{self_, belief_.cls, static_cast<std::uint64_t>(sim_.now())}});

  // Sources: retry refused originations and refresh stale routes.
  expire_pending();
  std::set<NodeId> wanted;
  for (const auto& [target, q] : pending_)
    if (!q.empty()) wanted.insert(target);
  for (const auto& p : carry_)
    if (p.src == self_) wanted.insert(p.dst);
  for (NodeId target : wanted) {
    if (discoveries_.count(target)) continue;
    const auto row = rows_.find({self_, target});
    if (row == rows_.end() || sim_.now() - row->second.last_forward > c.active_route_timeout_ms)
      start_discovery(target);
  }

  std::vector<FlowKey> active;
  for (const auto& [key, row] : rows_) {
    if (key.first != self_ && key.second != self_ && sim_.now() - row.last_forward <= c.active_route_timeout_ms)
      active.push_back(key);
  }
  for (const auto& key : active) monitor(key);
  flush_carry();
}

void CoaodvAgent::on_mobility_step() {
  if (!carry_.empty()) flush_carry();
}

// ---------------------------------------------------------------------------
// Discovery

bool CoaodvAgent::start_discovery(NodeId target) {
  if (discoveries_.count(target)) return true;
  const Csl csl = source_csl();
  if (csl == Csl::NotRecommended) return false;
  auto& m = sim_.metrics();
  ++m.discovery_rounds;
  if (had_route_.count(target)) ++m.rediscoveries;
  sim_.report_csl(self_, self_, target, csl);
  auto& d = discoveries_[target];
  d.source_csl = csl;
  send_rreq(target, d);
  return true;
}

void CoaodvAgent::send_rreq(NodeId target, Discovery& d) {
  d.id = RreqId{self_, ++rreq_counter_};
  d.started_at = sim_.now();
  d.candidates.clear();
  d.window_armed = false;
  seen_.insert(d.id);

  CoaodvRreq r;
  r.ip_field = self_;
  r.source_id = self_;
  r.target_address = target;
  r.csl = d.source_csl;
  r.rreq_id = d.id;
  r.hop_record = {self_};
  r.clone = AgentClone{mca_.thresholds(), static_cast<std::uint64_t>(mca_.history().sessions())};
  r.option_length = static_cast<std::uint16_t>(16 + 4 * r.hop_record.size());
  ++sim_.metrics().rreq_originated;
  sim_.schedule(self_, sim_.now() + sim_.config().discovery_timeout_ms, EventKind::ProtocolTimer,
                Timer{kDiscoveryTimer, target, d.id.counter});
  sim_.broadcast(self_, std::move(r));
}

void CoaodvAgent::close_discovery(NodeId target, std::uint32_t counter) {
  auto it = discoveries_.find(target);
  if (it == discoveries_.end() || it->second.id.counter != counter) return;
  if (!it->second.candidates.empty()) {
    const Discovery d = std::move(it->second);
    discoveries_.erase(it);
    install(target, d);
    return;
  }
  if (sim_.now() < it->second.started_at + sim_.config().discovery_timeout_ms) return;
  if (it->second.attempts < sim_.config().discovery_retries) {
    ++it->second.attempts;
    send_rreq(target, it->second);
    return;
  }
  discoveries_.erase(it);
  if (!rows_.count({self_, target})) pending_.erase(target);
}

void CoaodvAgent::handle_rreq(NodeId from, const CoaodvRreq& r) {
  if (r.source_id == self_ || !seen_.insert(r.rreq_id).second) return;
  if (std::find(r.hop_record.begin(), r.hop_record.end(), self_) != r.hop_record.end()) return;
  const auto& c = sim_.config();
  const FlowKey key{r.source_id, r.target_address};

  const Belief belief = fresh_belief(r.clone.thresholds);
  const Csl csl = route_handling_logic(ocl_toward(from), belief.cls);
  sim_.report_csl(self_, r.source_id, r.target_address, csl);
  discovery_csl_[key] = csl;

  auto reply = [&](std::vector<NodeId> path, std::vector<Csl> host_csl) {
    CoaodvRrep rep;
    rep.responder_uid = self_;
    rep.responder_csl = csl;
    rep.rreq_id = r.rreq_id;
    rep.reverse_record.assign(r.hop_record.rbegin(), r.hop_record.rend());
    rep.reverse_record.insert(rep.reverse_record.begin(), self_);
    rep.path = std::move(path);
    rep.host_csl = std::move(host_csl);
    rep.position = 0;
    if (!sim_.unicast(self_, rep.reverse_record[1], rep)) return;
  };

  if (r.target_address == self_) {
    auto path = r.hop_record;
    path.push_back(self_);
    reply(std::move(path), r.hop_csl);
    return;
  }
  if (csl == Csl::NotRecommended) return;

  for (const auto& [k, row] : rows_) {
    if (k.second != r.target_address || sim_.now() - row.last_forward > c.active_route_timeout_ms) continue;
    const auto& route = row.entry.route_record;
    const auto pos = index_of(route, self_);
    if (!pos) continue;
    bool disjoint = true;
    for (std::size_t j = *pos + 1; j < route.size(); ++j)
      if (std::find(r.hop_record.begin(), r.hop_record.end(), route[j]) != r.hop_record.end()) disjoint = false;
    if (!disjoint) continue;
    auto path = r.hop_record;
    path.insert(path.end(), route.begin() + static_cast<std::ptrdiff_t>(*pos), route.end());
    auto host_csl = r.hop_csl;
    host_csl.push_back(csl);
    // host_csl of the row covers route[1 .. n-2]; keep the hosts after self.
    for (std::size_t j = *pos + 1; j + 1 < route.size(); ++j) host_csl.push_back(row.host_csl.at(j - 1));
    reply(std::move(path), std::move(host_csl));
    return;
  }

  if (r.hop_record.size() >= c.max_hops) return;
  CoaodvRreq fwd = r;
  fwd.hop_record.push_back(self_);
  fwd.hop_csl.push_back(csl);
  fwd.option_length = static_cast<std::uint16_t>(16 + 4 * fwd.hop_record.size());
  const TimeMs jitter = c.rreq_jitter_ms > 0 ? sim_.protocol_rng().uniform_int(0, c.rreq_jitter_ms) : 0;
  if (jitter == 0) {
    sim_.broadcast(self_, std::move(fwd));
    return;
  }
  const auto id = parked_counter_++;
  parked_.emplace(id, std::move(fwd));
  sim_.schedule(self_, sim_.now() + jitter, EventKind::ProtocolTimer, Timer{kParkedTimer, id, 0});
}

void CoaodvAgent::handle_rrep(const CoaodvRrep& r) {
  const auto pos = static_cast<std::size_t>(r.position) + 1;
  if (pos >= r.reverse_record.size() || r.reverse_record[pos] != self_) return;
  if (pos + 1 < r.reverse_record.size()) {
    CoaodvRrep fwd = r;
    fwd.position = static_cast<std::uint32_t>(pos);
    sim_.unicast(self_, r.reverse_record[pos + 1], std::move(fwd));
    return;
  }
  const NodeId target = r.path.back();
  auto it = discoveries_.find(target);
  if (it == discoveries_.end() || it->second.id != r.rreq_id) return;
  auto& d = it->second;
  d.candidates.push_back(RouteCandidate{r.path, r.host_csl, sim_.now()});
  if (!d.window_armed) {
    d.window_armed = true;
    const TimeMs close_at =
        std::min(sim_.now() + sim_.config().rrep_window_ms, d.started_at + sim_.config().discovery_timeout_ms);
    sim_.schedule(self_, close_at, EventKind::ProtocolTimer, Timer{kWindowTimer, target, d.id.counter});
  }
}

void CoaodvAgent::install(NodeId target, const Discovery& d) {
  const auto sel = select_route(d.source_csl, d.candidates);
  if (!sel) return;
  const auto& cand = d.candidates[sel->index];
  Row row;
  row.entry.uid = self_;
  row.entry.csl = d.source_csl;
  row.entry.source_uid = self_;
  row.entry.source_csl = d.source_csl;
  row.entry.target_uid = target;
  row.entry.route_record = cand.route_record;
  row.entry.rf_s = sel->rf_min;
  row.entry.degraded = sel->degraded;
  row.entry.installed_at = sim_.now();
  row.entry.last_used = sim_.now();
  row.host_csl = cand.host_csl;
  row.last_forward = sim_.now();
  rows_[{self_, target}] = row;
  had_route_.insert(target);
  sim_.report_route(self_, target, cand.route_record);

  reroute_held(self_, target, cand.route_record, cand.host_csl);
  expire_pending();
  auto q = std::move(pending_[target]);
  pending_.erase(target);
  for (auto& p : q) {
    p.route_record = cand.route_record;
    p.host_csl = cand.host_csl;
    p.source_csl = d.source_csl;
    forward(std::move(p));
  }
  flush_carry();
}

// ---------------------------------------------------------------------------
// Data plane

void CoaodvAgent::on_originate(DataPacket packet) {
  const auto& c = sim_.config();
  const NodeId target = packet.dst;
  const auto row = rows_.find({self_, target});
  if (row != rows_.end()) {
    packet.route_record = row->second.entry.route_record;
    packet.host_csl = row->second.host_csl;
    packet.source_csl = row->second.entry.source_csl;
    const bool stale = sim_.now() - row->second.last_forward > c.active_route_timeout_ms;
    forward(std::move(packet));
    if (stale) start_discovery(target);
    return;
  }
  auto& q = pending_[target];
  if (q.size() >= c.pending_queue) q.pop_front();
  q.push_back(std::move(packet));
  start_discovery(target);
}

void CoaodvAgent::handle_data(DataPacket p) {
  if (p.dst == self_) {
    sim_.deliver(p);
    return;
  }
  forward(std::move(p));
}

CoaodvAgent::Row& CoaodvAgent::transit_row(const DataPacket& p) {
  const FlowKey key{p.src, p.dst};
  auto it = rows_.find(key);
  if (it != rows_.end() && it->second.entry.route_record == p.route_record) return it->second;
  Row row;
  const auto cached = discovery_csl_.find(key);
  const Csl csl = cached != discovery_csl_.end() ? cached->second : Csl::Recommended;
  row.entry.uid = self_;
  row.entry.csl = csl;
  row.entry.source_uid = p.src;
  row.entry.source_csl = p.source_csl;
  row.entry.target_uid = p.dst;
  row.entry.route_record = p.route_record;
  row.entry.rf_s = p.source_csl == Csl::NotRecommended ? Rational(1, 1) : routing_factor(p.source_csl, csl);
  row.entry.installed_at = sim_.now();
  row.entry.last_used = sim_.now();
  row.host_csl = p.host_csl;
  row.last_forward = sim_.now();
  return rows_[key] = std::move(row);
}

void CoaodvAgent::forward(DataPacket p) {
  const auto pos = index_of(p.route_record, self_);
  if (!pos || *pos + 1 >= p.route_record.size()) return;
  const bool host = p.src != self_;
  bool check = false;
  if (host) {
    transit_row(p);
    const auto n_total = static_cast<std::uint32_t>(std::floor(p.flow_total * sim_.config().handover_fraction));
    check = p.id.seq + 1 == n_total;
  }
  const FlowKey key{p.src, p.dst};
  if (!try_forward(p)) {
    if (host) {
      report_break(p);
    } else {
      start_discovery(p.dst);
    }
    carry(std::move(p));
  }
  if (check) monitor(key);
}

bool CoaodvAgent::try_forward(const DataPacket& p) {
  const auto pos = index_of(p.route_record, self_);
  if (!pos || *pos + 1 >= p.route_record.size()) return true;  // nothing left to do
  const auto& route = p.route_record;
  bool sent = sim_.unicast(self_, route[*pos + 1], p);
  if (!sent) {
    // Opportunistic skip to a later route node, furthest first.
    for (std::size_t j = route.size() - 1; j > *pos + 1 && !sent; --j) {
      const NodeId peer = route[j];
      if (!sim_.linked_now(self_, peer)) continue;
      if (peer != p.dst) {
        const auto est = estimated_csl(peer);
        if (!est || level(*est) < level(p.source_csl)) continue;
      }
      sent = sim_.unicast(self_, peer, p);
    }
  }
  if (sent) {
    if (auto it = rows_.find({p.src, p.dst}); it != rows_.end()) {
      it->second.last_forward = sim_.now();
      it->second.entry.last_used = sim_.now();
      it->second.break_reported = false;
    }
  }
  return sent;
}

void CoaodvAgent::report_break(const DataPacket& p) {
  auto it = rows_.find({p.src, p.dst});
  if (it == rows_.end() || it->second.break_reported) return;
  const auto pos = index_of(p.route_record, self_);
  if (!pos || *pos == 0) return;
  it->second.break_reported = true;
  RouteDegraded d;
  d.source = p.src;
  d.target = p.dst;
  d.reporter = self_;
  d.route_record = p.route_record;
  d.position = static_cast<std::uint32_t>(*pos);
  ++sim_.metrics().route_degraded;
  send_back(p.route_record, d.position, std::move(d));
}

void CoaodvAgent::carry(DataPacket p) {
  if (carry_.size() >= sim_.config().carry_buffer) {
    carry_.pop_front();
    ++sim_.metrics().carry_drops;
  }
  carry_.push_back(std::move(p));
}

void CoaodvAgent::flush_carry() {
  if (flushing_ || carry_.empty()) return;
  flushing_ = true;
  std::deque<DataPacket> keep;
  const TimeMs lifetime = sim_.config().buffer_lifetime_ms;
  while (!carry_.empty()) {
    DataPacket p = std::move(carry_.front());
    carry_.pop_front();
    if (sim_.now() - p.origin_time > lifetime) {
      ++sim_.metrics().carry_drops;
      continue;
    }
    if (!try_forward(p)) keep.push_back(std::move(p));
  }
  // Packets carried during the flush (none expected) stay behind the survivors.
  for (auto& p : carry_) keep.push_back(std::move(p));
  carry_ = std::move(keep);
  flushing_ = false;
}

void CoaodvAgent::expire_pending() {
  const TimeMs lifetime = sim_.config().buffer_lifetime_ms;
  for (auto it = pending_.begin(); it != pending_.end();) {
    auto& q = it->second;
    while (!q.empty() && sim_.now() - q.front().origin_time > lifetime) q.pop_front();
    it = q.empty() && !discoveries_.count(it->first) ? pending_.erase(it) : std::next(it);
  }
}

void CoaodvAgent::reroute_held(NodeId source, NodeId target, const std::vector<NodeId>& route,
                               const std::vector<Csl>& host_csl) {
  if (!index_of(route, self_)) return;
  for (auto& p : carry_) {
    if (p.src == source && p.dst == target) {
      p.route_record = route;
      p.host_csl = host_csl;
    }
  }
}

// ---------------------------------------------------------------------------
// Monitoring and handover

void CoaodvAgent::monitor(const FlowKey& key) {
  auto it = rows_.find(key);
  if (it == rows_.end()) return;
  auto& row = it->second;
  if (row.handover_pending || key.first == self_ || key.second == self_) return;
  const auto& route = row.entry.route_record;
  const auto pos = index_of(route, self_);
  if (!pos || *pos == 0 || *pos + 1 >= route.size()) return;

  const Belief belief = fresh_belief(mca_.thresholds());
  const Csl now_csl = route_handling_logic(ocl_toward(route[*pos - 1]), belief.cls);
  if (level(now_csl) >= level(row.entry.csl)) return;
  row.entry.csl = now_csl;
  discovery_csl_[key] = now_csl;
  if (row.entry.source_csl == Csl::NotRecommended) return;
  row.entry.rf_s = routing_factor(row.entry.source_csl, now_csl);
  if (row.entry.rf_s >= Rational(1, 1)) return;

  row.handover_pending = true;
  const std::uint32_t id = ++offer_counter_;
  offers_[id] = Offer{key, {}};
  HandoverOffer o;
  o.offer_id = id;
  o.host = self_;
  o.source = key.first;
  o.target = key.second;
  o.prev = route[*pos - 1];
  o.next = route[*pos + 1];
  o.source_csl = row.entry.source_csl;
  o.route_record = route;
  sim_.broadcast(self_, std::move(o));
  sim_.schedule(self_, sim_.now() + sim_.config().handover_window_ms, EventKind::ProtocolTimer,
                Timer{kOfferTimer, id, 0});
}

void CoaodvAgent::handle_offer(NodeId from, const HandoverOffer& o) {
  if (index_of(o.route_record, self_)) return;
  if (!knows_fresh(o.prev) || !knows_fresh(o.next)) return;
  if (o.source_csl == Csl::NotRecommended) return;
  const Csl csl = route_handling_logic(ocl_toward(o.prev), fresh_belief(mca_.thresholds()).cls);
  if (routing_factor(o.source_csl, csl) < Rational(1, 1)) return;
  sim_.unicast(self_, from, HandoverAccept{o.offer_id, self_, csl});
}

void CoaodvAgent::handle_accept(const HandoverAccept& a) {
  auto it = offers_.find(a.offer_id);
  if (it != offers_.end()) it->second.accepts.push_back(a);
}

void CoaodvAgent::close_offer(std::uint32_t offer_id) {
  auto it = offers_.find(offer_id);
  if (it == offers_.end()) return;
  const Offer offer = std::move(it->second);
  offers_.erase(it);
  auto row_it = rows_.find(offer.key);
  if (row_it == rows_.end()) return;
  Row& row = row_it->second;
  row.handover_pending = false;
  const auto route = row.entry.route_record;
  const auto pos = index_of(route, self_);
  if (!pos || *pos == 0 || *pos + 1 >= route.size()) return;

  const HandoverAccept* best = nullptr;
  for (const auto& a : offer.accepts)
    if (!best || level(a.csl) > level(best->csl)) best = &a;

  if (!best) {
    RouteDegraded d;
    d.source = offer.key.first;
    d.target = offer.key.second;
    d.reporter = self_;
    d.route_record = route;
    d.position = static_cast<std::uint32_t>(*pos);
    ++sim_.metrics().route_degraded;
    send_back(route, d.position, std::move(d));
    return;
  }

  RouteSplice s;
  s.source = offer.key.first;
  s.target = offer.key.second;
  s.replaced = self_;
  s.replacement = best->candidate;
  s.replacement_csl = best->csl;
  s.source_csl = row.entry.source_csl;
  s.route_record = route;
  s.route_record[*pos] = best->candidate;
  s.position = static_cast<std::uint32_t>(*pos);
  std::vector<Csl> host_csl = row.host_csl;
  if (*pos - 1 < host_csl.size()) host_csl[*pos - 1] = best->csl;
  s.rf_s = path_routing_factor(s.source_csl, host_csl);
  ++sim_.metrics().handovers;

  RouteSplice to_candidate = s;
  sim_.unicast(self_, best->candidate, std::move(to_candidate));
  RouteSplice downstream = s;
  sim_.unicast(self_, route[*pos + 1], std::move(downstream));
  s.walk_back = true;
  send_back(route, s.position, std::move(s));

  // Packets still held here follow the spliced route through the replacement.
  rows_.erase(row_it);
}

void CoaodvAgent::send_back(const std::vector<NodeId>& route, std::uint32_t position, Packet packet) {
  if (position == 0) return;
  const NodeId prev = route[position - 1];
  std::visit(
      [&](auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RouteSplice> || std::is_same_v<T, RouteDegraded>) p.position = position - 1;
      },
      packet);
  sim_.unicast(self_, prev, std::move(packet));
}

void CoaodvAgent::handle_splice(const RouteSplice& s) {
  const FlowKey key{s.source, s.target};
  const auto pos = index_of(s.route_record, self_);
  if (!pos) return;
  auto it = rows_.find(key);
  if (self_ == s.replacement) {
    Row row;
    row.entry.uid = self_;
    row.entry.csl = s.replacement_csl;
    row.entry.source_uid = s.source;
    row.entry.source_csl = s.source_csl;
    row.entry.target_uid = s.target;
    row.entry.route_record = s.route_record;
    row.entry.rf_s = routing_factor(s.source_csl, s.replacement_csl);
    row.entry.installed_at = sim_.now();
    row.entry.last_used = sim_.now();
    row.last_forward = sim_.now();
    if (it != rows_.end()) row.host_csl = it->second.host_csl;
    if (*pos >= 1 && *pos - 1 < row.host_csl.size()) row.host_csl[*pos - 1] = s.replacement_csl;
    discovery_csl_[key] = s.replacement_csl;
    rows_[key] = std::move(row);
  } else if (it != rows_.end()) {
    auto& row = it->second;
    const auto old_pos = index_of(row.entry.route_record, s.replaced);
    row.entry.route_record = s.route_record;
    if (old_pos && *old_pos >= 1 && *old_pos - 1 < row.host_csl.size()) row.host_csl[*old_pos - 1] = s.replacement_csl;
    if (self_ == s.source) {
      row.entry.rf_s = s.rf_s;
      row.entry.degraded = s.rf_s < Rational(1, 1);
      sim_.report_route(s.source, s.target, s.route_record);
    }
  }
  const auto row_now = rows_.find(key);
  if (row_now != rows_.end()) reroute_held(s.source, s.target, s.route_record, row_now->second.host_csl);
  if (s.walk_back && self_ != s.source) send_back(s.route_record, *pos, s);
}

void CoaodvAgent::handle_degraded(const RouteDegraded& d) {
  if (self_ == d.source) {
    auto it = rows_.find({d.source, d.target});
    if (it != rows_.end()) it->second.entry.degraded = true;
    start_discovery(d.target);
    return;
  }
  const auto pos = index_of(d.route_record, self_);
  if (!pos) return;
  send_back(d.route_record, static_cast<std::uint32_t>(*pos), d);
}

// ---------------------------------------------------------------------------

void CoaodvAgent::handle_beacon(const BeliefBeacon& b) {
  mca_.receive(b.message, sim_.now());
  flush_carry();
}

void CoaodvAgent::on_receive(NodeId from, const Packet& packet) {
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CoaodvRreq>) {
          handle_rreq(from, p);
        } else if constexpr (std::is_same_v<T, CoaodvRrep>) {
          handle_rrep(p);
        } else if constexpr (std::is_same_v<T, BeliefBeacon>) {
          handle_beacon(p);
        } else if constexpr (std::is_same_v<T, HandoverOffer>) {
          handle_offer(from, p);
        } else if constexpr (std::is_same_v<T, HandoverAccept>) {
          handle_accept(p);
        } else if constexpr (std::is_same_v<T, RouteSplice>) {
          handle_splice(p);
        } else if constexpr (std::is_same_v<T, RouteDegraded>) {
          handle_degraded(p);
        } else if constexpr (std::is_same_v<T, DataPacket>) {
          handle_data(p);
        }
      },
      packet);
}

}  // namespace coaodv
