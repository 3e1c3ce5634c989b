#include <gtest/gtest.h>

#include <map>
#include <vector>

#include "../support/scenarios.h"
#include "coaodv/aodv.h"
#include "coaodv/duty_cycle.h"
#include "coaodv/simulator.h"

namespace coaodv {
namespace {

const AodvAgent& aodv(const Simulator& sim, NodeId id) { return dynamic_cast<const AodvAgent&>(sim.agent(id)); }

TEST(Aodv, StaticLineDeliversEverythingAfterOneDiscovery) {
  auto s = testing::line_scenario(Protocol::Aodv, 5, 40, 12000);
  testing::add_flow(s, 0, 4, 1000, 11000);
  Simulator sim(std::move(s));
  const auto m = sim.run();
  EXPECT_EQ(m.data_sent, 40u);
  EXPECT_EQ(m.data_received, 40u);
  EXPECT_EQ(m.discovery_rounds, 1u);
  EXPECT_EQ(m.rerr_originated, 0u);
  for (NodeId n = 0; n < 4; ++n) {
    const auto& routes = aodv(sim, n).routes();
    ASSERT_TRUE(routes.count(4)) << n;
    EXPECT_EQ(routes.at(4).next_hop, n + 1);
    EXPECT_EQ(routes.at(4).hop_count, 4 - n);
  }
}

TEST(Aodv, DiamondUsesATwoHopRoute) {
  auto c = testing::scripted_config(100, 100, 8000);
  std::vector<NodeState> nodes{
      testing::static_node(0, {0, 50}, 50), testing::static_node(1, {40, 25}, 50),
      testing::static_node(2, {40, 75}, 50), testing::static_node(3, {80, 50}, 50)};
  auto s = testing::make_scenario(c, Protocol::Aodv, std::move(nodes));
  testing::add_flow(s, 0, 3, 1000, 7000);
  Simulator sim(std::move(s));
  const auto m = sim.run();
  EXPECT_EQ(m.data_received, m.data_sent);
  EXPECT_EQ(m.discovery_rounds, 1u);
  const auto& r = aodv(sim, 0).routes().at(3);
  EXPECT_EQ(r.hop_count, 2u);
  EXPECT_TRUE(r.next_hop == 1 || r.next_hop == 2);
}

TEST(Aodv, BrokenLinkRaisesRerrAndRecovers) {
  auto s = testing::line_scenario(Protocol::Aodv, 4, 40, 14000);
  s.config.area_height_m = 300;
  testing::add_flow(s, 0, 3, 1000, 13000);
  ScriptAction away;
  away.time = 4000;
  away.node = 3;
  away.kind = ScriptAction::Kind::MoveTo;
  away.position = {121, 290};
  ScriptAction back = away;
  back.time = 7000;
  back.position = {121, 50};
  s.script = {away, back};

  struct Late : SimObserver {
    std::size_t after_return = 0;
    void on_delivery(const DataPacket& p, TimeMs) override { after_return += p.origin_time >= 8000; }
  } late;
  const auto m = run_scenario(std::move(s), &late);
  EXPECT_GE(m.rerr_originated, 1u);
  EXPECT_GE(m.rediscoveries, 1u);
  EXPECT_LT(m.data_received, m.data_sent);
  EXPECT_EQ(late.after_return, 20u);
}

TEST(DutyCycle, TransitionRules) {
  EXPECT_TRUE(allowed_transition(DutyMode::Idle, DutyMode::Sleep));
  EXPECT_TRUE(allowed_transition(DutyMode::Sleep, DutyMode::Idle));
  EXPECT_FALSE(allowed_transition(DutyMode::Sleep, DutyMode::Transmit));
  EXPECT_FALSE(allowed_transition(DutyMode::Sleep, DutyMode::Receive));
  EXPECT_FALSE(allowed_transition(DutyMode::Transmit, DutyMode::Receive));
  EXPECT_TRUE(allowed_transition(DutyMode::Receive, DutyMode::Idle));
}

TEST(DutyCycle, AwakeThenSleepThenWake) {
  const DutyCycle cycle{400, 100};
  auto s = initial_duty_state(cycle, 0);
  EXPECT_EQ(s.mode, DutyMode::Idle);
  s = duty_cycle_tick(s, 399, {});
  EXPECT_EQ(s.mode, DutyMode::Idle);
  s = duty_cycle_tick(s, 400, {});
  EXPECT_EQ(s.mode, DutyMode::Sleep);
  EXPECT_EQ(s.sleep_until, 500);
  NodeBehavior busy;
  busy.transmitting = busy.receiving = true;
  s = duty_cycle_tick(s, 450, busy);
  EXPECT_EQ(s.mode, DutyMode::Sleep);
  s = duty_cycle_tick(s, 500, {});
  EXPECT_EQ(s.mode, DutyMode::Idle);
  EXPECT_EQ(s.awake_until, 900);
}

TEST(DutyCycle, TrafficKeepsTheNodeAwake) {
  auto s = initial_duty_state({400, 100}, 0);
  NodeBehavior tx;
  tx.transmitting = true;
  s = duty_cycle_tick(s, 400, tx);
  EXPECT_EQ(s.mode, DutyMode::Transmit);
  s = duty_cycle_tick(s, 410, {});
  EXPECT_EQ(s.mode, DutyMode::Idle);
  NodeBehavior rx;
  rx.receiving = true;
  s = duty_cycle_tick(s, 420, rx);
  EXPECT_EQ(s.mode, DutyMode::Receive);
}

TEST(DutyCycle, FlaggedNodesSleepLonger) {
  for (int flag = 0; flag < 3; ++flag) {
    NodeBehavior b;
    (flag == 0 ? b.isolated : flag == 1 ? b.unstable : b.inactive) = true;
    const auto s = duty_cycle_tick(initial_duty_state({400, 100}, 0), 400, b);
    EXPECT_EQ(s.mode, DutyMode::Sleep);
    EXPECT_EQ(s.sleep_until, 600) << flag;
  }
}

struct RadioAudit : SimObserver {
  std::map<NodeId, DutyMode> mode;
  std::size_t sleeps = 0, violations = 0, bad_transitions = 0;
  void on_trace(const TraceRecord& r) override {
    if (r.kind == TraceRecord::Kind::ModeChange && r.mode) {
      const auto prev = mode.count(r.node) ? mode[r.node] : DutyMode::Idle;
      bad_transitions += !allowed_transition(prev, *r.mode);
      sleeps += *r.mode == DutyMode::Sleep;
      mode[r.node] = *r.mode;
      return;
    }
    const bool active = r.kind == TraceRecord::Kind::Transmit || r.kind == TraceRecord::Kind::Receive;
    if (active && mode.count(r.node) && mode[r.node] == DutyMode::Sleep) ++violations;
  }
};

TEST(SleepAodv, SleepingRadiosNeitherSendNorReceive) {
  auto s = testing::line_scenario(Protocol::SleepAodv, 4, 40, 12000);
  testing::add_flow(s, 0, 3, 1000, 11000);
  RadioAudit audit;
  Simulator sim(std::move(s), &audit);
  const auto m = sim.run();
  EXPECT_GT(audit.sleeps, 0u);
  EXPECT_EQ(audit.violations, 0u);
  EXPECT_EQ(audit.bad_transitions, 0u);
  EXPECT_GT(m.data_received, 0u);
  EXPECT_TRUE(aodv(sim, 1).duty_cycled());
}

TEST(SleepAodv, DutyCyclingCostsDelay) {
  auto make = [](Protocol p) {
    auto s = testing::line_scenario(p, 4, 40, 12000);
    testing::add_flow(s, 0, 3, 1000, 11000);
    return run_scenario(std::move(s));
  };
  const auto plain = make(Protocol::Aodv);
  const auto sleepy = make(Protocol::SleepAodv);
  ASSERT_TRUE(mean_e2e_delay(plain) && mean_e2e_delay(sleepy));
  EXPECT_GT(*mean_e2e_delay(sleepy), *mean_e2e_delay(plain));
}

}  // namespace
}  // namespace coaodv
