#include "coaodv/config.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <type_traits>

namespace coaodv {

std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::Aodv: return "aodv";
    case Protocol::SleepAodv: return "sleep-aodv";
    case Protocol::Coaodv: return "coaodv";
  }
  return "unknown";
}

Protocol parse_protocol(std::string_view name) {
  if (name == "aodv") return Protocol::Aodv;
  if (name == "sleep-aodv" || name == "sleep_aodv") return Protocol::SleepAodv;
  if (name == "coaodv") return Protocol::Coaodv;
  throw ConfigError("unknown protocol '" + std::string(name) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_csv(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class T>
T parse_number(std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) throw ConfigError("bad number '" + std::string(text) + "'");
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) throw ConfigError("non-finite number '" + std::string(text) + "'");
  }
  return value;
}

std::string print_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

template <class T>
void parse_into(T& out, std::string_view text) {
  if constexpr (std::is_same_v<T, Protocol>) {
    out = parse_protocol(text);
  } else if constexpr (std::is_same_v<T, std::vector<std::uint32_t>>) {
    out.clear();
    for (auto item : split_csv(text)) out.push_back(parse_number<std::uint32_t>(item));
  } else if constexpr (std::is_same_v<T, std::array<double, 4>>) {
    const auto items = split_csv(text);
    if (items.size() != 4) throw ConfigError("expected 4 comma-separated values");
    for (std::size_t i = 0; i < 4; ++i) out[i] = parse_number<double>(items[i]);
  } else {
    out = parse_number<T>(text);
  }
}

template <class T>
std::string print_value(const T& v) {
  if constexpr (std::is_same_v<T, Protocol>) {
    return std::string(to_string(v));
  } else if constexpr (std::is_same_v<T, std::vector<std::uint32_t>>) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
  } else if constexpr (std::is_same_v<T, std::array<double, 4>>) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + print_double(v[i]);
    return s;
  } else if constexpr (std::is_floating_point_v<T>) {
    return print_double(v);
  } else {
    return std::to_string(v);
  }
}

struct Field {
  std::string_view key;
  std::function<void(ScenarioConfig&, std::string_view)> parse;
  std::function<std::string(const ScenarioConfig&)> print;
};

template <class T>
Field field(std::string_view key, T ScenarioConfig::*member) {
  return Field{key, [member](ScenarioConfig& c, std::string_view v) { parse_into(c.*member, v); },
               [member](const ScenarioConfig& c) { return print_value(c.*member); }};
}

const std::vector<Field>& registry() {
  using C = ScenarioConfig;
  static const std::vector<Field> fields = {
      field("area_width_m", &C::area_width_m),
      field("area_height_m", &C::area_height_m),
      field("node_count", &C::node_count),
      field("class_mix", &C::class_mix),
      field("range_default_m", &C::range_default_m),
      field("range_rescue_lo_m", &C::range_rescue_lo_m),
      field("range_rescue_hi_m", &C::range_rescue_hi_m),
      field("speed_lo_mps", &C::speed_lo_mps),
      field("speed_hi_mps", &C::speed_hi_mps),
      field("pause_lo_ms", &C::pause_lo_ms),
      field("pause_hi_ms", &C::pause_hi_ms),
      field("duration_ms", &C::duration_ms),
      field("traffic_start_ms", &C::traffic_start_ms),
      field("connections", &C::connections),
      field("cbr_rate_pps", &C::cbr_rate_pps),
      field("payload_bytes", &C::payload_bytes),
      field("protocol", &C::protocol),
      field("seed", &C::seed),
      field("seeds", &C::seeds),
      field("workers", &C::workers),
      field("hop_latency_ms", &C::hop_latency_ms),
      field("loss_probability", &C::loss_probability),
      field("mobility_step_ms", &C::mobility_step_ms),
      field("rreq_jitter_ms", &C::rreq_jitter_ms),
      field("metric_snapshot_ms", &C::metric_snapshot_ms),
      field("resource_init_lo", &C::resource_init_lo),
      field("resource_init_hi", &C::resource_init_hi),
      field("resource_cost_data", &C::resource_cost_data),
      field("resource_cost_control", &C::resource_cost_control),
      field("resource_floor", &C::resource_floor),
      field("grid_cell_m", &C::grid_cell_m),
      field("context_weight_age", &C::context_weight_age),
      field("context_weight_count", &C::context_weight_count),
      field("context_weight_location", &C::context_weight_location),
      field("context_tau_ms", &C::context_tau_ms),
      field("context_count_cap", &C::context_count_cap),
      field("context_groups", &C::context_groups),
      field("destination_zones", &C::destination_zones),
      field("resource_tag_probability", &C::resource_tag_probability),
      field("belief_resource_threshold", &C::belief_resource_threshold),
      field("belief_mobility_threshold_mps", &C::belief_mobility_threshold_mps),
      field("belief_staleness_ms", &C::belief_staleness_ms),
      field("agent_checkpoint_ms", &C::agent_checkpoint_ms),
      field("session_history", &C::session_history),
      field("discovery_timeout_ms", &C::discovery_timeout_ms),
      field("max_hops", &C::max_hops),
      field("carry_buffer", &C::carry_buffer),
      field("buffer_lifetime_ms", &C::buffer_lifetime_ms),
      field("rrep_window_ms", &C::rrep_window_ms),
      field("handover_fraction", &C::handover_fraction),
      field("handover_window_ms", &C::handover_window_ms),
      field("active_route_timeout_ms", &C::active_route_timeout_ms),
      field("discovery_retries", &C::discovery_retries),
      field("hello_interval_ms", &C::hello_interval_ms),
      field("hello_loss", &C::hello_loss),
      field("pending_queue", &C::pending_queue),
      field("sleep_awake_ms", &C::sleep_awake_ms),
      field("sleep_sleep_ms", &C::sleep_sleep_ms),
      field("unstable_change_fraction", &C::unstable_change_fraction),
      field("contact_sweep_nodes", &C::contact_sweep_nodes),
  };
  return fields;
}

const Field* find_field(std::string_view key) {
  for (const auto& f : registry())
    if (f.key == key) return &f;
  return nullptr;
}

[[noreturn]] void invalid(std::string_view key, std::string_view why) {
  throw ConfigError(std::string(key) + ": " + std::string(why));
}

void require(bool ok, std::string_view key, std::string_view why) {
  if (!ok) invalid(key, why);
}

}  // namespace

std::vector<Protocol> parse_protocol_list(std::string_view csv) {
  std::vector<Protocol> out;
  for (auto item : split_csv(csv)) out.push_back(parse_protocol(item));
  return out;
}

void ScenarioConfig::validate() const {
  require(area_width_m > 0, "area_width_m", "must be positive");
  require(area_height_m > 0, "area_height_m", "must be positive");
  require(node_count >= 2, "node_count", "needs at least 2 nodes");
  double mix_sum = 0.0;
  for (double m : class_mix) {
    require(m >= 0.0, "class_mix", "fractions must be non-negative");
    mix_sum += m;
  }
  require(std::abs(mix_sum - 1.0) <= 1e-9, "class_mix", "fractions must sum to 1");
  require(range_default_m > 0, "range_default_m", "must be positive");
  require(range_rescue_lo_m > 0 && range_rescue_lo_m <= range_rescue_hi_m, "range_rescue_lo_m",
          "must be positive and not above range_rescue_hi_m");
  require(speed_lo_mps > 0 && speed_lo_mps <= speed_hi_mps, "speed_lo_mps",
          "must be positive and not above speed_hi_mps");
  require(pause_lo_ms >= 0 && pause_lo_ms <= pause_hi_ms, "pause_lo_ms", "must be in [0, pause_hi_ms]");
  require(duration_ms > 0, "duration_ms", "must be positive");
  require(traffic_start_ms >= 0 && traffic_start_ms < duration_ms, "traffic_start_ms", "must be in [0, duration_ms)");
  require(!connections.empty(), "connections", "needs at least one value");
  for (auto c : connections) require(c >= 1 && c <= node_count, "connections", "each value must be in [1, node_count]");
  require(cbr_rate_pps > 0, "cbr_rate_pps", "must be positive");
  require(payload_bytes > 0, "payload_bytes", "must be positive");
  require(seeds >= 1, "seeds", "must be at least 1");
  require(hop_latency_ms >= 1, "hop_latency_ms", "must be at least 1");
  require(loss_probability >= 0 && loss_probability < 1, "loss_probability", "must be in [0, 1)");
  require(mobility_step_ms >= 1, "mobility_step_ms", "must be at least 1");
  require(rreq_jitter_ms >= 0, "rreq_jitter_ms", "must be non-negative");
  require(metric_snapshot_ms >= 1, "metric_snapshot_ms", "must be at least 1");
  require(resource_init_lo >= 0 && resource_init_lo <= resource_init_hi && resource_init_hi <= 1, "resource_init_lo",
          "need 0 <= resource_init_lo <= resource_init_hi <= 1");
  require(resource_cost_data >= 0, "resource_cost_data", "must be non-negative");
  require(resource_cost_control >= 0, "resource_cost_control", "must be non-negative");
  require(resource_floor >= 0 && resource_floor < 1, "resource_floor", "must be in [0, 1)");
  require(grid_cell_m > 0, "grid_cell_m", "must be positive");
  require(context_weight_age >= 0 && context_weight_count >= 0 && context_weight_location >= 0, "context_weight_age",
          "context weights must be non-negative");
  require(std::abs(context_weight_age + context_weight_count + context_weight_location - 1.0) <= 1e-9,
          "context_weight_age", "context weights must sum to 1");
  require(context_tau_ms > 0, "context_tau_ms", "must be positive");
  require(context_count_cap > 0, "context_count_cap", "must be positive");
  require(context_groups >= 1, "context_groups", "must be at least 1");
  require(destination_zones >= 1, "destination_zones", "must be at least 1");
  require(resource_tag_probability >= 0 && resource_tag_probability <= 1, "resource_tag_probability",
          "must be in [0, 1]");
  require(belief_resource_threshold >= 0 && belief_resource_threshold <= 1, "belief_resource_threshold",
          "must be in [0, 1]");
  require(belief_mobility_threshold_mps >= 0, "belief_mobility_threshold_mps", "must be non-negative");
  require(belief_staleness_ms >= 1, "belief_staleness_ms", "must be at least 1");
  require(agent_checkpoint_ms >= 1, "agent_checkpoint_ms", "must be at least 1");
  require(session_history >= 1, "session_history", "must be at least 1");
  require(discovery_timeout_ms >= 1, "discovery_timeout_ms", "must be at least 1");
  require(max_hops >= 1, "max_hops", "must be at least 1");
  require(carry_buffer >= 1, "carry_buffer", "must be at least 1");
  require(buffer_lifetime_ms >= 1, "buffer_lifetime_ms", "must be at least 1");
  require(rrep_window_ms >= 0 && rrep_window_ms <= discovery_timeout_ms, "rrep_window_ms",
          "must be in [0, discovery_timeout_ms]");
  require(handover_fraction > 0 && handover_fraction <= 1, "handover_fraction", "must be in (0, 1]");
  require(handover_window_ms >= 1, "handover_window_ms", "must be at least 1");
  require(active_route_timeout_ms >= 1, "active_route_timeout_ms", "must be at least 1");
  require(hello_interval_ms >= 1, "hello_interval_ms", "must be at least 1");
  require(hello_loss >= 1, "hello_loss", "must be at least 1");
  require(pending_queue >= 1, "pending_queue", "must be at least 1");
  require(sleep_awake_ms >= 1, "sleep_awake_ms", "must be at least 1");
  require(sleep_sleep_ms >= 1, "sleep_sleep_ms", "must be at least 1");
  require(unstable_change_fraction > 0 && unstable_change_fraction <= 1, "unstable_change_fraction",
          "must be in (0, 1]");
  require(!contact_sweep_nodes.empty(), "contact_sweep_nodes", "needs at least one value");
  for (auto n : contact_sweep_nodes) require(n >= 1, "contact_sweep_nodes", "each value must be at least 1");
}

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig config;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto prefix = "line " + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(prefix + "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const Field* f = find_field(key);
    if (!f) throw ConfigError(prefix + "unknown key '" + std::string(key) + "'");
    try {
      f->parse(config, value);
    } catch (const ConfigError& e) {
      throw ConfigError(prefix + std::string(key) + ": " + e.what());
    }
  }
  config.validate();
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string format_config(const ScenarioConfig& config) {
  std::string out;
  for (const auto& f : registry()) out += std::string(f.key) + " = " + f.print(config) + '\n';
  return out;
}

std::vector<std::string_view> config_keys() {
  std::vector<std::string_view> keys;
  for (const auto& f : registry()) keys.push_back(f.key);
  return keys;
}

void apply_env_overrides(ScenarioConfig& config) {
  if (const char* s = std::getenv("COAODV_SEED"); s && *s) {
    try {
      config.seed = parse_number<std::uint64_t>(s);
    } catch (const ConfigError&) {
      throw ConfigError("COAODV_SEED: bad number '" + std::string(s) + "'");
    }
  }
}

}  // namespace coaodv
