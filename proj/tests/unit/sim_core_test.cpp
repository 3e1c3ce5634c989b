#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "../support/scenarios.h"
#include "coaodv/event_queue.h"
#include "coaodv/mobility.h"
#include "coaodv/node.h"
#include "coaodv/rng.h"
#include "coaodv/simulator.h"
#include "coaodv/traffic.h"

namespace coaodv {
namespace {

TEST(EventQueue, EqualTimesPopInInsertionOrder) {
  EventQueue<char> q;
  q.schedule(5, EventKind::TrafficEmit, 'A');
  q.schedule(5, EventKind::TrafficEmit, 'B');
  EXPECT_EQ(q.pop().payload, 'A');
  EXPECT_EQ(q.pop().payload, 'B');
}

TEST(EventQueue, EarlierEventPopsFirst) {
  EventQueue<int> q;
  q.schedule(7, EventKind::MetricSnapshot, 7);
  q.schedule(3, EventKind::MetricSnapshot, 3);
  const auto ev = q.pop();
  EXPECT_EQ(ev.fire_time, 3);
  EXPECT_EQ(q.now(), 3);
}

TEST(EventQueue, SchedulingIntoThePastThrows) {
  EventQueue<int> q;
  q.schedule(10, EventKind::MetricSnapshot, 0);
  q.pop();
  EXPECT_THROW(q.schedule(9, EventKind::MetricSnapshot, 0), InvariantViolation);
  EXPECT_NO_THROW(q.schedule(10, EventKind::MetricSnapshot, 0));
}

TEST(EventQueue, PopFromEmptyThrows) {
  EventQueue<int> q;
  EXPECT_THROW(q.pop(), InvariantViolation);
}

std::vector<std::pair<TimeMs, int>> drain_random(std::uint64_t seed) {
  Rng rng(seed);
  EventQueue<int> q;
  for (int i = 0; i < 1000; ++i) q.schedule(rng.uniform_int(0, 500), EventKind::ProtocolTimer, i);
  std::vector<std::pair<TimeMs, int>> out;
  while (!q.empty()) {
    const auto ev = q.pop();
    EXPECT_EQ(q.now(), ev.fire_time);
    out.emplace_back(ev.fire_time, ev.payload);
  }
  return out;
}

TEST(EventQueue, RandomEventsPopSortedAndReplayIdentically) {
  const auto a = drain_random(42);
  const auto b = drain_random(42);
  EXPECT_EQ(a, b);
  // Oracle: stable sort of the insertion list by time.
  Rng rng(42);
  std::vector<std::pair<TimeMs, int>> expected;
  for (int i = 0; i < 1000; ++i) expected.emplace_back(rng.uniform_int(0, 500), i);
  std::stable_sort(expected.begin(), expected.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  EXPECT_EQ(a, expected);
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  auto a = Rng::stream(7, 1), b = Rng::stream(7, 1), c = Rng::stream(7, 2);
  const auto x = a.next();
  EXPECT_EQ(x, b.next());
  EXPECT_NE(x, c.next());
}

TEST(Rng, DrawsStayInRange) {
  Rng rng(3);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform(2.0, 5.0);
    EXPECT_GE(u, 2.0);
    EXPECT_LT(u, 5.0);
    const auto k = rng.uniform_int(-3, 3);
    EXPECT_GE(k, -3);
    EXPECT_LE(k, 3);
  }
  EXPECT_FALSE(rng.bernoulli(0.0));
  EXPECT_TRUE(rng.bernoulli(1.0));
}

MobilityParams params_for(double w, double h) { return MobilityParams{Area{w, h}, 0.5, 2.0, 0, 150}; }

TEST(Mobility, StaticNodeNeverMoves) {
  NodeState n = testing::static_node(0, {3, 4}, 60);
  n.waypoint = {50, 50};
  n.speed = 9;
  Rng rng(1);
  const auto after = mobility_step(n, 0, 5000, rng, params_for(100, 100));
  EXPECT_EQ(after.position, (Vec2{3, 4}));
}

TEST(Mobility, MovesSpeedTimesTimeTowardWaypoint) {
  NodeState n;
  n.position = {0, 0};
  n.waypoint = {10, 0};
  n.speed = 5;
  Rng rng(1);
  const auto after = mobility_step(n, 0, 1000, rng, params_for(100, 100));
  EXPECT_DOUBLE_EQ(after.position.x, 5.0);
  EXPECT_DOUBLE_EQ(after.position.y, 0.0);
}

TEST(Mobility, ArrivalStartsAPause) {
  NodeState n;
  n.position = {20, 20};
  n.waypoint = {20, 20};
  n.speed = 1;
  Rng rng(9);
  auto p = params_for(100, 100);
  p.pause_lo = p.pause_hi = 100;
  const auto after = mobility_step(n, 1000, 50, rng, p);
  EXPECT_EQ(after.position, (Vec2{20, 20}));
  EXPECT_EQ(after.pause_until, 1100);
  EXPECT_NE(after.waypoint, (Vec2{20, 20}));
}

TEST(Mobility, LongWalksStayInsideTheArea) {
  const auto p = params_for(80, 40);
  Rng rng(11);
  NodeState n;
  n.position = {1, 1};
  n.waypoint = {79, 39};
  n.speed = 2;
  for (TimeMs t = 0; t < 600000; t += 100) {
    n = mobility_step(n, t, 100, rng, p);
    ASSERT_TRUE(p.area.contains(n.position)) << "t=" << t;
  }
}

TEST(Neighbors, RangeRuleUsesTheSmallerRadio) {
  std::vector<NodeState> nodes{testing::static_node(0, {0, 0}, 60), testing::static_node(1, {40, 0}, 60)};
  EXPECT_EQ(neighbors(nodes, 0), (std::vector<NodeId>{1}));
  EXPECT_EQ(neighbors(nodes, 1), (std::vector<NodeId>{0}));
  nodes[1].range = 30;
  EXPECT_TRUE(neighbors(nodes, 0).empty());
  EXPECT_TRUE(neighbors(nodes, 1).empty());
}

TEST(Neighbors, RadioOffIsolatesTheNode) {
  std::vector<NodeState> nodes{testing::static_node(0, {0, 0}, 60), testing::static_node(1, {10, 0}, 60),
                               testing::static_node(2, {20, 0}, 60)};
  nodes[1].radio_on = false;
  EXPECT_TRUE(neighbors(nodes, 1).empty());
  EXPECT_EQ(neighbors(nodes, 0), (std::vector<NodeId>{2}));
  EXPECT_EQ(neighbors(nodes, 2), (std::vector<NodeId>{0}));
}

TEST(Neighbors, MatchesBruteForceAndIsSymmetric) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> pos(0, 200), range(10, 60);
  std::vector<NodeState> nodes;
  for (NodeId i = 0; i < 60; ++i) nodes.push_back(testing::static_node(i, {pos(gen), pos(gen)}, range(gen)));
  for (NodeId i = 0; i < nodes.size(); ++i) {
    std::vector<NodeId> expected;
    for (NodeId j = 0; j < nodes.size(); ++j) {
      const double d = std::hypot(nodes[i].position.x - nodes[j].position.x, nodes[i].position.y - nodes[j].position.y);
      if (i != j && d <= std::min(nodes[i].range, nodes[j].range)) expected.push_back(j);
    }
    ASSERT_EQ(neighbors(nodes, i), expected);
    for (NodeId j : expected) {
      const auto back = neighbors(nodes, j);
      EXPECT_TRUE(std::binary_search(back.begin(), back.end(), i));
    }
  }
}

TEST(Neighbors, UnknownUidThrows) {
  std::vector<NodeState> nodes{testing::static_node(0, {0, 0}, 60)};
  EXPECT_THROW(neighbors(nodes, 5), std::out_of_range);
}

TEST(Cbr, FixedIntervalOriginations) {
  const auto e = emit_cbr({0, 1, 2}, 10.0, 512, 0, 1000);
  ASSERT_EQ(e.size(), 10u);
  for (std::size_t k = 0; k < e.size(); ++k) {
    EXPECT_EQ(e[k].time, static_cast<TimeMs>(100 * k));
    EXPECT_EQ(e[k].id.seq, k);
    EXPECT_EQ(e[k].flow_total, 10u);
  }
  EXPECT_EQ(emit_cbr({0, 1, 2}, 1.0, 512, 0, 500).size(), 1u);
}

TEST(Cbr, RejectsBadRatesAndLoops) {
  EXPECT_THROW(emit_cbr({0, 1, 2}, 0.0, 512, 0, 1000), ConfigError);
  EXPECT_THROW(emit_cbr({0, 1, 2}, -1.0, 512, 0, 1000), ConfigError);
  EXPECT_THROW(emit_cbr({0, 3, 3}, 1.0, 512, 0, 1000), ConfigError);
}

struct TraceLog : SimObserver {
  std::vector<std::tuple<TimeMs, NodeId, int, bool>> records;
  void on_trace(const TraceRecord& r) override {
    records.emplace_back(r.time, r.node, static_cast<int>(r.kind), r.control);
  }
};

TEST(Simulator, IdenticalSeedsReplayTheSameTrace) {
  ScenarioConfig c;
  c.node_count = 30;
  c.area_width_m = 150;
  c.area_height_m = 150;
  c.duration_ms = 8000;
  TraceLog a, b;
  const auto ma = run_cell(c, Protocol::Coaodv, 4, 3, &a);
  const auto mb = run_cell(c, Protocol::Coaodv, 4, 3, &b);
  EXPECT_EQ(a.records, b.records);
  EXPECT_EQ(run_csv_row(ma), run_csv_row(mb));
  EXPECT_FALSE(a.records.empty());
}

TEST(Simulator, TwoConnectionsInterleaveIdentically) {
  struct Deliveries : SimObserver {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> ids;
    void on_delivery(const DataPacket& p, TimeMs) override { ids.emplace_back(p.id.connection, p.id.seq); }
  };
  auto make = [] {
    auto s = testing::line_scenario(Protocol::Aodv, 3, 40, 5000);
    testing::add_flow(s, 0, 2, 1000, 4000);
    testing::add_flow(s, 2, 0, 1000, 4000);
    return s;
  };
  Deliveries a, b;
  run_scenario(make(), &a);
  run_scenario(make(), &b);
  EXPECT_EQ(a.ids, b.ids);
  EXPECT_EQ(a.ids.size(), 24u);
}

TEST(Simulator, TransmittingWithRadioOffIsAnInvariantViolation) {
  auto s = testing::line_scenario(Protocol::Aodv, 2, 40, 1000);
  Simulator sim(std::move(s));
  sim.set_radio(0, false);
  EXPECT_THROW(sim.broadcast(0, Hello{}), InvariantViolation);
  EXPECT_THROW(sim.unicast(0, 1, Hello{}), InvariantViolation);
}

TEST(Simulator, UnicastOutOfRangeIsNotCounted) {
  auto s = testing::line_scenario(Protocol::Aodv, 3, 40, 1000);
  Simulator sim(std::move(s));
  EXPECT_FALSE(sim.unicast(0, 2, Hello{}));
  EXPECT_EQ(sim.metrics().control_packets, 0u);
  EXPECT_TRUE(sim.unicast(0, 1, Hello{}));
  EXPECT_EQ(sim.metrics().control_packets, 1u);
}

TEST(Simulator, NodesMustBeIndexedByUid) {
  auto s = testing::line_scenario(Protocol::Aodv, 2, 40, 1000);
  s.nodes[1].uid = 7;
  EXPECT_THROW(Simulator{std::move(s)}, InvariantViolation);
}

}  // namespace
}  // namespace coaodv
