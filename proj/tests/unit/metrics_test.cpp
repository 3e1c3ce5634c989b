#include <gtest/gtest.h>

#include <algorithm>
#include <string>

#include "coaodv/metrics.h"

namespace coaodv {
namespace {

RunMetrics sample() {
  RunMetrics m;
  m.protocol = "coaodv";
  m.nodes = 50;
  m.connections = 4;
  m.seed = 7;
  m.control_packets = 30;
  m.total_packets = 120;
  m.data_sent = 10;
  m.rediscoveries = 2;
  m.record_delivery({0, 0}, 10);
  m.record_delivery({0, 1}, 20);
  m.record_delivery({1, 0}, 33);
  return m;
}

TEST(Metrics, Ratios) {
  const auto m = sample();
  EXPECT_DOUBLE_EQ(pdr(m), 0.3);
  EXPECT_DOUBLE_EQ(otr(m), 0.25);
  EXPECT_DOUBLE_EQ(*mean_e2e_delay(m), 21.0);
  EXPECT_DOUBLE_EQ(control_per_connection(m), 7.5);
  EXPECT_EQ(packet_loss(m), 7);
}

TEST(Metrics, EmptyRunsAreWellDefined) {
  RunMetrics m;
  EXPECT_EQ(pdr(m), 0.0);
  EXPECT_EQ(otr(m), 0.0);
  EXPECT_FALSE(mean_e2e_delay(m));
  EXPECT_EQ(packet_loss(m), 0);
  EXPECT_THROW(control_per_connection(m), std::invalid_argument);
}

TEST(Metrics, DeliveriesAreCountedOnce) {
  RunMetrics m;
  EXPECT_TRUE(m.record_delivery({3, 9}, 5));
  EXPECT_FALSE(m.record_delivery({3, 9}, 50));
  EXPECT_EQ(m.data_received, 1u);
  EXPECT_EQ(m.sum_e2e_delay, 5);
}

TEST(Metrics, CountersKeepTotalsConsistent) {
  RunMetrics m;
  m.count_control();
  m.count_data_transmission();
  m.count_data_transmission();
  EXPECT_EQ(m.control_packets, 1u);
  EXPECT_EQ(m.data_transmissions, 2u);
  EXPECT_EQ(m.total_packets, 3u);
}

TEST(RunCsv, RowMatchesTheHeaderColumns) {
  const auto row = run_csv_row(sample());
  EXPECT_EQ(row, "coaodv,50,4,7,30,7.500000,10,3,0.300000,7,0.250000,21.000000,2");
  const auto columns = [](std::string_view s) { return std::count(s.begin(), s.end(), ',') + 1; };
  EXPECT_EQ(columns(row), columns(kRunCsvHeader));
}

TEST(RunCsv, UndefinedDelayIsAnEmptyField) {
  RunMetrics m;
  m.protocol = "aodv";
  m.connections = 1;
  m.data_sent = 4;
  EXPECT_EQ(run_csv_row(m), "aodv,0,1,0,0,0.000000,4,0,0.000000,4,0.000000,,0");
}

}  // namespace
}  // namespace coaodv
