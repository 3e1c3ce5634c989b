#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "coaodv/contact.h"
#include "coaodv/duty_cycle.h"
#include "coaodv/event_queue.h"
#include "coaodv/metrics.h"
#include "coaodv/mobility.h"
#include "coaodv/packets.h"
#include "coaodv/rng.h"
#include "coaodv/scenario.h"

namespace coaodv {

class Simulator;

/// Protocol-defined timer. `kind` is private to the agent that set it.
struct Timer {
  std::uint32_t kind = 0;
  std::uint64_t a = 0;
  std::uint64_t b = 0;
};

struct TraceRecord {
  enum class Kind : std::uint8_t { Transmit, Receive, LostAsleep, ModeChange };

  TimeMs time = 0;
  NodeId node = 0;
  Kind kind = Kind::Transmit;
  std::optional<DutyMode> mode;  // duty-cycled protocols only
  bool control = true;
};

/// Optional hooks for tests and tools. Every callback runs on the event loop.
class SimObserver {
 public:
  virtual ~SimObserver() = default;
  virtual void on_trace(const TraceRecord&) {}
  /// A node graded itself during route discovery.
  virtual void on_csl(NodeId /*node*/, NodeId /*source*/, NodeId /*target*/, Csl /*csl*/) {}
  virtual void on_route_installed(NodeId /*source*/, NodeId /*target*/, std::span<const NodeId> /*route*/) {}
  virtual void on_snapshot(const Simulator&) {}
  /// First delivery of a data packet at its destination.
  virtual void on_delivery(const DataPacket& /*packet*/, TimeMs /*delay_ms*/) {}
};

/// Per-node protocol instance driven by the simulator.
class RoutingAgent {
 public:
  RoutingAgent(Simulator& sim, NodeId self) : sim_(sim), self_(self) {}
  virtual ~RoutingAgent() = default;
  RoutingAgent(const RoutingAgent&) = delete;
  RoutingAgent& operator=(const RoutingAgent&) = delete;

  NodeId self() const { return self_; }

  virtual void start() = 0;
  virtual void on_receive(NodeId from, const Packet& packet) = 0;
  /// A CBR packet originated at this node.
  virtual void on_originate(DataPacket packet) = 0;
  virtual void on_timer(EventKind kind, const Timer& timer) = 0;
  virtual void on_mobility_step() {}
  virtual std::optional<DutyMode> duty_mode() const { return std::nullopt; }

 protected:
  Simulator& sim_;
  NodeId self_;
};

/// Deterministic discrete-event engine for one run. Owns the clock, node
/// population, radio, traffic, contact tracking and metrics; protocol agents
/// reach the network only through the services below.
class Simulator {
 public:
  explicit Simulator(Scenario scenario, SimObserver* observer = nullptr);
  ~Simulator();
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  /// Process every event up to the configured duration.
  RunMetrics run();

  TimeMs now() const { return queue_.now(); }
  const ScenarioConfig& config() const { return scenario_.config; }
  const Scenario& scenario() const { return scenario_; }
  std::size_t node_count() const { return scenario_.nodes.size(); }
  std::span<const NodeState> nodes() const { return scenario_.nodes; }
  const NodeState& node(NodeId id) const { return scenario_.nodes.at(id); }
  const NodeTraits& traits(NodeId id) const { return scenario_.traits.at(id); }
  const ContactTracker& contacts() const { return contacts_; }
  const RunMetrics& metrics() const { return metrics_; }
  RunMetrics& metrics() { return metrics_; }
  RoutingAgent& agent(NodeId id) { return *agents_.at(id); }
  const RoutingAgent& agent(NodeId id) const { return *agents_.at(id); }
  /// Stream for protocol randomness such as forwarding jitter.
  Rng& protocol_rng() { return protocol_rng_; }

  bool linked_now(NodeId a, NodeId b) const;
  std::vector<NodeId> neighbors_of(NodeId id) const;

  /// Link-layer unicast with acknowledgement. Returns false when the peer is
  /// out of range, asleep, or a depleted relay refusing transit data. A
  /// transmission is counted whenever the peer is in range. Throws
  /// InvariantViolation if the sender's radio is off.
  bool unicast(NodeId from, NodeId to, Packet packet);
  /// One transmission heard by every awake neighbor (subject to loss).
  void broadcast(NodeId from, Packet packet);

  void schedule(NodeId node, TimeMs at, EventKind kind, Timer timer);
  void set_radio(NodeId node, bool on);
  void set_speed(NodeId node, double speed);
  void report_mode(NodeId node, DutyMode mode);
  void report_csl(NodeId node, NodeId source, NodeId target, Csl csl);
  void report_route(NodeId source, NodeId target, std::span<const NodeId> route);
  /// Data packet reached its destination.
  void deliver(const DataPacket& packet);

 private:
  struct Delivery {
    NodeId from = 0;
    NodeId to = 0;
    Packet packet;
  };
  struct NodeEvent {
    NodeId node = 0;
    Timer timer;
  };
  struct Emit {
    TrafficEmission emission;
    std::size_t flow = 0;
  };
  struct ScriptStep {
    std::size_t index = 0;
  };
  using Payload = std::variant<std::monostate, Delivery, NodeEvent, Emit, ScriptStep>;

  void dispatch(SimEvent<Payload>& ev);
  void charge(NodeId from, bool control);
  void trace(NodeId node, TraceRecord::Kind kind, bool control);
  void mobility_step();
  NodeState mobility_step_fn(const NodeState& n, TimeMs from, TimeMs dt);
  void apply_script(const ScriptAction& action);

  Scenario scenario_;
  SimObserver* observer_;
  EventQueue<Payload> queue_;
  RunMetrics metrics_;
  ContactTracker contacts_;
  MobilityParams mobility_;
  Rng mobility_rng_;
  Rng loss_rng_;
  Rng protocol_rng_;
  std::vector<std::unique_ptr<RoutingAgent>> agents_;
  bool track_contacts_ = false;
};

/// Generate and run one sweep cell.
RunMetrics run_cell(const ScenarioConfig& config, Protocol protocol, std::uint32_t connections, std::uint64_t seed,
                    SimObserver* observer = nullptr);

/// Run a hand-built scenario to completion.
RunMetrics run_scenario(Scenario scenario, SimObserver* observer = nullptr);

}  // namespace coaodv
