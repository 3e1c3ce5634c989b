#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "coaodv/types.h"

namespace coaodv {

enum class Protocol : std::uint8_t { Aodv, SleepAodv, Coaodv };

std::string_view to_string(Protocol p);
/// Accepts "aodv", "sleep-aodv" and "coaodv". Throws ConfigError otherwise.
Protocol parse_protocol(std::string_view name);
std::vector<Protocol> parse_protocol_list(std::string_view csv);

/// Every tunable of a run. Defaults reproduce the 500 x 500 m, 200-node
/// disaster-area scenario. Units are part of each key name.
struct ScenarioConfig {
  // scenario
  double area_width_m = 500.0;
  double area_height_m = 500.0;
  std::uint32_t node_count = 200;
  std::array<double, 4> class_mix{0.40, 0.30, 0.15, 0.15};  // rescue, bystander, navigation, vehicle
  double range_default_m = 60.0;
  double range_rescue_lo_m = 10.0;
  double range_rescue_hi_m = 30.0;
  double speed_lo_mps = 0.5;
  double speed_hi_mps = 2.0;
  TimeMs pause_lo_ms = 0;
  TimeMs pause_hi_ms = 150;
  TimeMs duration_ms = 60000;
  TimeMs traffic_start_ms = 2000;
  std::vector<std::uint32_t> connections{5, 10, 20};
  double cbr_rate_pps = 4.0;
  std::uint32_t payload_bytes = 512;
  Protocol protocol = Protocol::Coaodv;
  std::uint64_t seed = 1;
  std::uint32_t seeds = 1;
  std::uint32_t workers = 0;  // 0 = hardware concurrency

  // radio and engine
  TimeMs hop_latency_ms = 2;
  double loss_probability = 0.01;
  TimeMs mobility_step_ms = 100;
  TimeMs rreq_jitter_ms = 5;
  TimeMs metric_snapshot_ms = 1000;

  // node resources
  double resource_init_lo = 0.2;
  double resource_init_hi = 1.0;
  double resource_cost_data = 0.001;
  double resource_cost_control = 0.0002;
  double resource_floor = 0.05;

  // contact model
  double grid_cell_m = 10.0;
  double context_weight_age = 1.0 / 3.0;
  double context_weight_count = 1.0 / 3.0;
  double context_weight_location = 1.0 / 3.0;
  double context_tau_ms = 60000.0;
  double context_count_cap = 10.0;
  std::uint32_t context_groups = 4;
  std::uint32_t destination_zones = 3;  // per side
  double resource_tag_probability = 0.5;

  // cognitive agent
  double belief_resource_threshold = 0.5;
  double belief_mobility_threshold_mps = 1.0;
  TimeMs belief_staleness_ms = 5000;
  TimeMs agent_checkpoint_ms = 500;
  std::uint32_t session_history = 20;

  // coaodv
  TimeMs discovery_timeout_ms = 1000;
  std::uint32_t max_hops = 16;
  std::uint32_t carry_buffer = 64;
  TimeMs buffer_lifetime_ms = 3000;
  TimeMs rrep_window_ms = 200;
  double handover_fraction = 0.25;
  TimeMs handover_window_ms = 20;
  TimeMs active_route_timeout_ms = 3000;

  // aodv / sleep-aodv (discovery_retries applies to every protocol)
  std::uint32_t discovery_retries = 2;
  TimeMs hello_interval_ms = 250;
  std::uint32_t hello_loss = 2;
  std::uint32_t pending_queue = 64;
  TimeMs sleep_awake_ms = 400;
  TimeMs sleep_sleep_ms = 100;
  double unstable_change_fraction = 0.5;

  // harness
  std::vector<std::uint32_t> contact_sweep_nodes{25, 50, 100, 150, 200};

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// Parse `key = value` lines; `#` starts a comment. Unknown keys and
/// malformed lines raise ConfigError with the line number.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Every key with its current value, one `key = value` line each, in a fixed order.
std::string format_config(const ScenarioConfig& config);
std::vector<std::string_view> config_keys();

/// COAODV_SEED, when set, replaces the configured seed.
void apply_env_overrides(ScenarioConfig& config);

}  // namespace coaodv
