#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "drams/linkbudget.hpp"
#include "drams/metrics.hpp"
#include "drams/router.hpp"
#include "drams/topology.hpp"
#include "drams/traffic.hpp"

namespace drams {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every tunable of a run. Field names mirror the config keys; dotted keys
/// (harvester.a) map to underscores (harvester_a).
struct SimConfig {
  std::uint64_t seed = 1;
  int replications = 500;
  int threads = 0;  // 0: hardware concurrency

  double arena_width_m = 400.0;
  double arena_height_m = 400.0;
  double coverage_m = 60.0;
  int iu_count = 400;
  double ris_spacing_m = 20.0;
  int ris_elements = 250;
  double source_x = 20.0;
  double source_y = 200.0;
  double dest_x = 380.0;
  double dest_y = 200.0;

  std::vector<double> lambda_off_ms{16.0};  // one value, or one per IU
  std::vector<double> mu_on_ms{4.0};
  double slot_us = 100.0;
  double delta = 0.1;
  double p_th = 0.01;

  double tx_power_dbm = 30.0;
  double proc_power_dbm = 10.0;
  double rho_l_db = -35.3;
  double alpha_d2d = 4.2;
  double alpha_other = 2.0;
  double noise_power_dbm = -100.0;
  double rician_k_db = 10.0;

  double target_ber = 1e-6;
  ThresholdRule threshold_rule = ThresholdRule::per_bit;
  ModulationConstants modulation;
  int max_bits = 8;

  double harvester_mh_mw = 24.0;
  double harvester_a = 150.0;
  double harvester_b = 0.014;

  int demand_packets = 4;
  int demand_bits_per_packet = 8;

  double blocklength = 1000.0;  // inf: Shannon rate
  double epsilon = 1e-4;
  double delay_budget_ms = 50.0;

  Variant variant = Variant::drams;
  int fixed_constellation = 4;
  ThroughputUnits throughput_units = ThroughputUnits::verbatim;
  int align_rounds = 20;
  int ris_overhead_slots = 1;

  std::vector<double> coverage_grid_m{30, 40, 50, 60, 70, 80, 90};
  std::vector<double> coverage_densities{100, 400, 900};
  std::vector<double> density_grid{50, 100, 200, 400, 600, 900, 1200};
  std::vector<double> density_coverages_m{30, 45, 60};
  std::vector<double> comparison_coverage_grid_m{30, 40, 50, 60, 70, 80, 90};
  double mobility_coverage_m = 50.0;
  std::vector<double> vmax_grid{0, 5, 10, 15, 20};
  std::vector<double> xi_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  std::vector<double> delta_grid{0.1, 0.2, 0.3};
  double traffic_fixed_ms = 4.0;
  int traffic_chains = 100000;
  int traffic_batches = 20;

  /// Throws ConfigError naming the offending key.
  void validate() const;

  TopologySpec topology_spec() const;
  std::vector<TrafficProfile> traffic_profiles() const;
  RouterConfig router_config() const;
  double slot_s() const noexcept { return slot_us * 1e-6; }
};

/// Parses `key = value` lines; '#' starts a comment. Unknown keys, malformed
/// values and duplicates raise ConfigError naming the key and line.
SimConfig parse_config(std::string_view text, const SimConfig& base = {});

SimConfig load_config(const std::filesystem::path& path, const SimConfig& base = {});

/// Every key with its resolved value, in a fixed order; parse_config of the
/// result reproduces the config exactly.
std::string serialize_config(const SimConfig& config);

/// The recognised keys, in serialization order.
std::vector<std::string> config_keys();

}  // namespace drams
