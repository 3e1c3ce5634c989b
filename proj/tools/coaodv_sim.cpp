// Command-line harness: parameter sweeps, contact statistics and defaults.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "coaodv/config.h"
#include "coaodv/sweep.h"

namespace {

coaodv::ScenarioConfig load(const std::string& path) {
  auto config = path.empty() ? coaodv::ScenarioConfig{} : coaodv::load_config(path);
  coaodv::apply_env_overrides(config);
  config.validate();
  return config;
}

template <class Fn>
int write_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << '\n';
    return 1;
  }
  fn(out);
  return out ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event MANET simulator comparing COAODV, AODV and Sleep-AODV"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string protocols_arg;
  std::optional<unsigned> seeds;
  std::optional<unsigned> workers;

  auto* run = app.add_subcommand("run", "Run the connections x protocol x seed sweep and write per-run CSV");
  run->add_option("--config", config_path, "Flat key = value config file")->check(CLI::ExistingFile);
  run->add_option("--protocols", protocols_arg, "Comma-separated list: aodv,sleep-aodv,coaodv (default: config)");
  run->add_option("--seeds", seeds, "Seeds per cell, starting at the config seed")->check(CLI::PositiveNumber);
  run->add_option("--workers", workers, "Worker threads (default: config, then hardware)");
  run->add_option("--out", out_path, "Output CSV path (default: stdout)");

  auto* contacts = app.add_subcommand("contacts", "Sweep node counts and write affinity and CSL statistics");
  contacts->add_option("--config", config_path, "Flat key = value config file")->check(CLI::ExistingFile);
  contacts->add_option("--out", out_path, "Output CSV path (default: stdout)");

  auto* defaults = app.add_subcommand("print-defaults", "Print every config key with its default value");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*defaults) {
      std::cout << coaodv::format_config(coaodv::ScenarioConfig{});
      return 0;
    }
    auto config = load(config_path);
    if (*run) {
      if (seeds) config.seeds = *seeds;
      const auto protocols = protocols_arg.empty() ? std::vector<coaodv::Protocol>{config.protocol}
                                                   : coaodv::parse_protocol_list(protocols_arg);
      const auto rows = coaodv::run_sweep(config, protocols, workers.value_or(0));
      return write_output(out_path, [&](std::ostream& os) { coaodv::write_run_csv(os, rows); });
    }
    const auto rows = coaodv::emit_contact_stats(config);
    return write_output(out_path, [&](std::ostream& os) { coaodv::write_contact_csv(os, rows); });
  } catch (const coaodv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
