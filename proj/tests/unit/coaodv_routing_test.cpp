#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <map>
#include <vector>

#include "../support/scenarios.h"
#include "coaodv/coaodv.h"
#include "coaodv/csl.h"
#include "coaodv/simulator.h"

namespace coaodv {
namespace {

constexpr Csl kNR = Csl::NotRecommended;
constexpr Csl kR = Csl::Recommended;
constexpr Csl kHR = Csl::HighlyRecommended;

TEST(RouteHandlingLogic, EveryCell) {
  const std::array<OclLevel, 3> ocl{OclLevel::High, OclLevel::Medium, OclLevel::Low};
  const std::array<BeliefClass, 4> bel{BeliefClass::Patron, BeliefClass::Casual, BeliefClass::Slack,
                                       BeliefClass::Vargant};
  // Rows High, Medium, Low; columns Patron, Casual, Slack, Vargant.
  const Csl expected[3][4] = {{kHR, kHR, kR, kNR}, {kR, kR, kR, kNR}, {kR, kR, kNR, kNR}};
  for (int o = 0; o < 3; ++o)
    for (int b = 0; b < 4; ++b) EXPECT_EQ(route_handling_logic(ocl[o], bel[b]), expected[o][b]) << o << "," << b;
}

TEST(Rational, NormalizesAndOrders) {
  EXPECT_EQ(Rational(2, 4), Rational(1, 2));
  EXPECT_EQ(to_string(Rational(4, 2)), "2");
  EXPECT_EQ(to_string(Rational(1, 2)), "1/2");
  EXPECT_LT(Rational(1, 2), Rational(1, 1));
  EXPECT_THROW(Rational(1, 0), std::invalid_argument);
}

TEST(RoutingFactor, ExactValues) {
  EXPECT_EQ(routing_factor(kHR, kHR), Rational(1, 1));
  EXPECT_EQ(routing_factor(kHR, kR), Rational(1, 2));
  EXPECT_EQ(routing_factor(kHR, kNR), Rational(0, 1));
  EXPECT_EQ(routing_factor(kR, kHR), Rational(1, 1));
  EXPECT_EQ(routing_factor(kR, kNR), Rational(0, 1));
  EXPECT_THROW(routing_factor(kNR, kHR), IneligibleSource);
}

TEST(RoutingFactor, PathTakesTheWeakestHost) {
  const std::vector<Csl> hosts{kHR, kR, kHR};
  EXPECT_EQ(path_routing_factor(kHR, hosts), Rational(1, 2));
  EXPECT_EQ(path_routing_factor(kR, hosts), Rational(1, 1));
  EXPECT_EQ(path_routing_factor(kHR, {}), Rational(1, 1));
}

TEST(SelectRoute, ShortestEligibleWinsAndTiesGoToArrival) {
  const std::vector<RouteCandidate> c{
      {{0, 5, 6, 9}, {kHR, kHR}, 10},
      {{0, 7, 9}, {kHR}, 30},
      {{0, 8, 9}, {kHR}, 20},
      {{0, 4, 9}, {kR}, 5},  // shortest but rf 1/2
  };
  const auto sel = select_route(kHR, c);
  ASSERT_TRUE(sel);
  EXPECT_EQ(sel->index, 2u);
  EXPECT_FALSE(sel->degraded);
  EXPECT_EQ(sel->rf_min, Rational(1, 1));
}

TEST(SelectRoute, FallsBackToTheBestFactorWhenNothingIsEligible) {
  const std::vector<RouteCandidate> c{
      {{0, 4, 9}, {kNR}, 5},
      {{0, 5, 6, 9}, {kR, kHR}, 10},
  };
  const auto sel = select_route(kHR, c);
  ASSERT_TRUE(sel);
  EXPECT_EQ(sel->index, 1u);
  EXPECT_TRUE(sel->degraded);
  EXPECT_EQ(sel->rf_min, Rational(1, 2));
  EXPECT_FALSE(select_route(kHR, {}));
}

TEST(RouteEntry, SegmentAndNeighbors) {
  RouteEntry e;
  e.uid = 1;
  e.route_record = {0, 1, 3};
  EXPECT_EQ(e.segment(), (std::vector<NodeId>{1, 3}));
  EXPECT_EQ(e.next_hop(), NodeId{3});
  EXPECT_EQ(e.previous_hop(), NodeId{0});
  e.uid = 3;
  EXPECT_FALSE(e.next_hop());
  e.uid = 0;
  EXPECT_FALSE(e.previous_hop());
}

TEST(LoopFree, DetectsRepeats) {
  const std::vector<NodeId> ok{0, 1, 2, 3}, bad{0, 1, 2, 1};
  EXPECT_TRUE(loop_free(ok));
  EXPECT_FALSE(loop_free(bad));
}

/// Depleted, slow and poorly equipped: believes itself Vargant.
void make_vargant(Scenario& s, NodeId id) {
  s.nodes[id].resource_pool = 0.1;
  s.nodes[id].speed = 0.0;
  s.traits[id].memory_class = 0.1;
  s.traits[id].compute_class = 0.1;
}

struct RouteLog : SimObserver {
  std::vector<std::vector<NodeId>> routes;
  std::map<NodeId, Csl> last_csl;
  void on_csl(NodeId node, NodeId, NodeId, Csl csl) override { last_csl[node] = csl; }
  void on_route_installed(NodeId, NodeId, std::span<const NodeId> route) override {
    routes.emplace_back(route.begin(), route.end());
  }
};

// Nodes 0, 1 and 3 form a line from source 0 to target 3; node 2 sits far away.
Scenario table_row_scenario() {
  auto c = testing::scripted_config(250, 250, 6000);
  std::vector<NodeState> nodes{
      testing::static_node(0, {0, 0}, 50, 2.0),
      testing::static_node(1, {40, 0}, 50, 2.0),
      testing::static_node(2, {200, 200}, 50, 2.0),
      testing::static_node(3, {80, 0}, 50, 2.0),
  };
  auto s = testing::make_scenario(c, Protocol::Coaodv, std::move(nodes));
  testing::add_flow(s, 0, 3, 1000, 5000);
  return s;
}

TEST(CoaodvRouting, RouteTableRowsForTheHostAndTheSource) {
  Simulator sim(table_row_scenario());
  const auto m = sim.run();
  EXPECT_EQ(m.data_received, m.data_sent);
  const auto& host = dynamic_cast<const CoaodvAgent&>(sim.agent(1)).rows();
  const auto& source = dynamic_cast<const CoaodvAgent&>(sim.agent(0)).rows();
  ASSERT_TRUE(host.count({0, 3}));
  ASSERT_TRUE(source.count({0, 3}));

  const auto& h = host.at({0, 3}).entry;
  EXPECT_EQ(h.uid, 1u);
  EXPECT_EQ(h.csl, kHR);
  EXPECT_EQ(h.source_uid, 0u);
  EXPECT_EQ(h.source_csl, kHR);
  EXPECT_EQ(h.target_uid, 3u);
  EXPECT_EQ(h.segment(), (std::vector<NodeId>{1, 3}));
  // min(2, 2) / 2 for a Highly-recommended host behind a Highly-recommended source.
  EXPECT_EQ(h.rf_s, Rational(1, 1));

  const auto& src = source.at({0, 3}).entry;
  EXPECT_EQ(src.uid, 0u);
  EXPECT_EQ(src.csl, kHR);
  EXPECT_EQ(src.segment(), (std::vector<NodeId>{0, 1}));
  EXPECT_EQ(src.rf_s, Rational(1, 1));
  EXPECT_FALSE(src.degraded);
}

TEST(CoaodvRouting, NotRecommendedRelaysNeverJoinARoute) {
  auto c = testing::scripted_config(250, 250, 10000);
  std::vector<NodeState> nodes{
      testing::static_node(0, {0, 0}, 50, 2.0),
      testing::static_node(1, {40, 0}, 50, 0.0),
      testing::static_node(2, {80, 0}, 50, 0.0),
      testing::static_node(3, {40, 20}, 50, 2.0),
  };
  auto s = testing::make_scenario(c, Protocol::Coaodv, std::move(nodes));
  make_vargant(s, 1);
  testing::add_flow(s, 0, 2, 1000, 9000);
  RouteLog log;
  Simulator sim(std::move(s), &log);
  const auto m = sim.run();
  ASSERT_FALSE(log.routes.empty());
  EXPECT_EQ(log.last_csl.at(1), kNR);
  for (const auto& r : log.routes) {
    EXPECT_EQ(std::count(r.begin(), r.end(), NodeId{1}), 0);
    EXPECT_TRUE(loop_free(r));
  }
  EXPECT_EQ(m.data_received, m.data_sent);
}

TEST(CoaodvRouting, OnlyRelayNotRecommendedMeansNoRoute) {
  auto s = testing::line_scenario(Protocol::Coaodv, 3, 40, 6000);
  for (auto& n : s.nodes) n.speed = 2.0;
  make_vargant(s, 1);
  testing::add_flow(s, 0, 2, 1000, 5000);
  RouteLog log;
  const auto m = run_scenario(std::move(s), &log);
  EXPECT_TRUE(log.routes.empty());
  EXPECT_EQ(m.data_received, 0u);
  EXPECT_GT(m.discovery_rounds, 0u);
}

TEST(CoaodvRouting, NotRecommendedSourceRefusesToOriginate) {
  auto s = testing::line_scenario(Protocol::Coaodv, 3, 40, 6000);
  for (auto& n : s.nodes) n.speed = 2.0;
  make_vargant(s, 0);
  testing::add_flow(s, 0, 2, 1000, 5000);
  const auto m = run_scenario(std::move(s));
  EXPECT_GT(m.data_sent, 0u);
  EXPECT_EQ(m.rreq_originated, 0u);
  EXPECT_EQ(m.discovery_rounds, 0u);
  EXPECT_EQ(m.data_received, 0u);
}

// S(0) - H(1) - T(2) with T stepping out of range for `gap_ms`.
Scenario carry_scenario(TimeMs gap_ms) {
  auto c = testing::scripted_config(250, 250, 12000);
  std::vector<NodeState> nodes{
      testing::static_node(0, {0, 0}, 50, 2.0),
      testing::static_node(1, {40, 0}, 50, 2.0),
      testing::static_node(2, {80, 0}, 50, 0.0),
  };
  auto s = testing::make_scenario(c, Protocol::Coaodv, std::move(nodes));
  testing::add_flow(s, 0, 2, 1000, 10000);
  ScriptAction away;
  away.time = 4000;
  away.node = 2;
  away.kind = ScriptAction::Kind::MoveTo;
  away.position = {80, 200};
  ScriptAction back = away;
  back.time = 4000 + gap_ms;
  back.position = {80, 0};
  s.script = {away, back};
  return s;
}

struct DelayLog : SimObserver {
  std::vector<TimeMs> delays;
  void on_delivery(const DataPacket&, TimeMs d) override { delays.push_back(d); }
};

TEST(CoaodvRouting, CarriedPacketsArriveOnceAfterTheHopRejoins) {
  DelayLog log;
  const auto m = run_scenario(carry_scenario(1000), &log);
  EXPECT_EQ(m.data_received, m.data_sent);
  EXPECT_EQ(log.delays.size(), m.data_received);
  EXPECT_EQ(m.carry_drops, 0u);
  const auto longest = *std::max_element(log.delays.begin(), log.delays.end());
  EXPECT_GE(longest, 500);
  EXPECT_LE(longest, 1200);
}

TEST(CoaodvRouting, FullOrExpiredBuffersDropAndCount) {
  auto s = carry_scenario(4000);
  s.config.carry_buffer = 2;
  s.config.buffer_lifetime_ms = 60000;
  const auto m = run_scenario(std::move(s));
  EXPECT_GT(m.carry_drops, 0u);
  EXPECT_EQ(m.data_received + m.carry_drops, m.data_sent);

  auto e = carry_scenario(4000);
  e.config.buffer_lifetime_ms = 1000;
  const auto me = run_scenario(std::move(e));
  EXPECT_GT(me.carry_drops, 0u);
  EXPECT_LT(me.data_received, me.data_sent);
}

TEST(CoaodvRouting, HandoverSplicesWithoutANewDiscovery) {
  RouteLog log;
  const auto m = run_scenario(testing::handover_scenario(true), &log);
  using H = testing::HandoverScenario;
  ASSERT_EQ(log.routes.size(), 2u);
  EXPECT_EQ(log.routes[0], (std::vector<NodeId>{H::kSource, H::kHost, H::kTarget}));
  EXPECT_EQ(log.routes[1], (std::vector<NodeId>{H::kSource, H::kNeighbor, H::kTarget}));
  EXPECT_EQ(m.discovery_rounds, 1u);
  EXPECT_EQ(m.handovers, 1u);
  EXPECT_EQ(m.data_received, m.data_sent);
}

TEST(CoaodvRouting, HandoverWithoutCandidateRediscovers) {
  const auto m = run_scenario(testing::handover_scenario(false));
  EXPECT_EQ(m.discovery_rounds, 2u);
  EXPECT_EQ(m.handovers, 0u);
  EXPECT_EQ(m.route_degraded, 1u);
}

TEST(CoaodvRouting, SameScenarioSameMetrics) {
  EXPECT_EQ(run_csv_row(run_scenario(testing::handover_scenario(true))),
            run_csv_row(run_scenario(testing::handover_scenario(true))));
}

}  // namespace
}  // namespace coaodv
