#include "drams/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "drams/csv.hpp"
#include "drams/units.hpp"

namespace drams {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
  if (v == "-inf") return -std::numeric_limits<double>::infinity();
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    throw ConfigError("key '" + std::string(key) + "': expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

template <class Int>
Int parse_int(std::string_view key, std::string_view v) {
  v = trim(v);
  Int out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    throw ConfigError("key '" + std::string(key) + "': expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

std::vector<double> parse_list(std::string_view key, std::string_view v) {
  std::vector<double> out;
  v = trim(v);
  if (v.empty()) throw ConfigError("key '" + std::string(key) + "': empty list");
  while (true) {
    const auto comma = v.find(',');
    out.push_back(parse_double(key, v.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  return out;
}

struct Field {
  std::string key;
  std::function<void(SimConfig&, std::string_view key, std::string_view value)> set;
  std::function<std::string(const SimConfig&)> get;
};

template <class T>
Field number(std::string key, T SimConfig::*member) {
  return {std::move(key),
          [member](SimConfig& c, std::string_view k, std::string_view v) {
            if constexpr (std::is_floating_point_v<T>) {
              c.*member = parse_double(k, v);
            } else {
              c.*member = parse_int<T>(k, v);
            }
          },
          [member](const SimConfig& c) {
            if constexpr (std::is_floating_point_v<T>) {
              return format_double(c.*member);
            } else {
              return std::to_string(c.*member);
            }
          }};
}

Field list(std::string key, std::vector<double> SimConfig::*member) {
  return {std::move(key), [member](SimConfig& c, std::string_view k, std::string_view v) { c.*member = parse_list(k, v); },
          [member](const SimConfig& c) { return format_list(c.*member); }};
}

Field modulation(std::string key, double ModulationConstants::*member) {
  return {std::move(key),
          [member](SimConfig& c, std::string_view k, std::string_view v) { c.modulation.*member = parse_double(k, v); },
          [member](const SimConfig& c) { return format_double(c.modulation.*member); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(number("seed", &SimConfig::seed));
    f.push_back(number("replications", &SimConfig::replications));
    f.push_back(number("threads", &SimConfig::threads));
    f.push_back(number("arena_width_m", &SimConfig::arena_width_m));
    f.push_back(number("arena_height_m", &SimConfig::arena_height_m));
    f.push_back(number("coverage_m", &SimConfig::coverage_m));
    f.push_back(number("iu_count", &SimConfig::iu_count));
    f.push_back(number("ris_spacing_m", &SimConfig::ris_spacing_m));
    f.push_back(number("ris_elements", &SimConfig::ris_elements));
    f.push_back(number("source_x", &SimConfig::source_x));
    f.push_back(number("source_y", &SimConfig::source_y));
    f.push_back(number("dest_x", &SimConfig::dest_x));
    f.push_back(number("dest_y", &SimConfig::dest_y));
    f.push_back(list("lambda_off_ms", &SimConfig::lambda_off_ms));
    f.push_back(list("mu_on_ms", &SimConfig::mu_on_ms));
    f.push_back(number("slot_us", &SimConfig::slot_us));
    f.push_back(number("delta", &SimConfig::delta));
    f.push_back(number("p_th", &SimConfig::p_th));
    f.push_back(number("tx_power_dbm", &SimConfig::tx_power_dbm));
    f.push_back(number("proc_power_dbm", &SimConfig::proc_power_dbm));
    f.push_back(number("rho_l_db", &SimConfig::rho_l_db));
    f.push_back(number("alpha_d2d", &SimConfig::alpha_d2d));
    f.push_back(number("alpha_other", &SimConfig::alpha_other));
    f.push_back(number("noise_power_dbm", &SimConfig::noise_power_dbm));
    f.push_back(number("rician_k_db", &SimConfig::rician_k_db));
    f.push_back(number("target_ber", &SimConfig::target_ber));
    f.push_back({"threshold_rule",
                 [](SimConfig& c, std::string_view k, std::string_view v) {
                   v = trim(v);
                   if (v == "table3") {
                     c.threshold_rule = ThresholdRule::per_bit;
                   } else if (v == "eqtext") {
                     c.threshold_rule = ThresholdRule::per_symbol_minus_one;
                   } else {
                     throw ConfigError("key '" + std::string(k) + "': expected table3 or eqtext, got '" +
                                       std::string(v) + "'");
                   }
                 },
                 [](const SimConfig& c) {
                   return std::string(c.threshold_rule == ThresholdRule::per_bit ? "table3" : "eqtext");
                 }});
    f.push_back(modulation("modulation.c1", &ModulationConstants::c1));
    f.push_back(modulation("modulation.c2", &ModulationConstants::c2));
    f.push_back(modulation("modulation.c3", &ModulationConstants::c3));
    f.push_back(modulation("modulation.c4", &ModulationConstants::c4));
    f.push_back(number("max_bits", &SimConfig::max_bits));
    f.push_back(number("harvester.mh_mw", &SimConfig::harvester_mh_mw));
    f.push_back(number("harvester.a", &SimConfig::harvester_a));
    f.push_back(number("harvester.b", &SimConfig::harvester_b));
    f.push_back(number("demand.packets", &SimConfig::demand_packets));
    f.push_back(number("demand.bits_per_packet", &SimConfig::demand_bits_per_packet));
    f.push_back(number("blocklength", &SimConfig::blocklength));
    f.push_back(number("epsilon", &SimConfig::epsilon));
    f.push_back(number("delay_budget_ms", &SimConfig::delay_budget_ms));
    f.push_back({"variant",
                 [](SimConfig& c, std::string_view k, std::string_view v) {
                   const auto parsed = parse_variant(trim(v));
                   if (!parsed) {
                     throw ConfigError("key '" + std::string(k) + "': unknown variant '" + std::string(trim(v)) +
                                       "'");
                   }
                   c.variant = *parsed;
                 },
                 [](const SimConfig& c) { return std::string(to_string(c.variant)); }});
    f.push_back(number("fixed_constellation", &SimConfig::fixed_constellation));
    f.push_back({"throughput_units",
                 [](SimConfig& c, std::string_view k, std::string_view v) {
                   v = trim(v);
                   if (v == "verbatim") {
                     c.throughput_units = ThroughputUnits::verbatim;
                   } else if (v == "bits") {
                     c.throughput_units = ThroughputUnits::bits;
                   } else {
                     throw ConfigError("key '" + std::string(k) + "': expected verbatim or bits, got '" +
                                       std::string(v) + "'");
                   }
                 },
                 [](const SimConfig& c) {
                   return std::string(c.throughput_units == ThroughputUnits::verbatim ? "verbatim" : "bits");
                 }});
    f.push_back(number("align_rounds", &SimConfig::align_rounds));
    f.push_back(number("ris_overhead_slots", &SimConfig::ris_overhead_slots));
    f.push_back(list("coverage_grid_m", &SimConfig::coverage_grid_m));
    f.push_back(list("coverage_densities", &SimConfig::coverage_densities));
    f.push_back(list("density_grid", &SimConfig::density_grid));
    f.push_back(list("density_coverages_m", &SimConfig::density_coverages_m));
    f.push_back(list("comparison_coverage_grid_m", &SimConfig::comparison_coverage_grid_m));
    f.push_back(number("mobility_coverage_m", &SimConfig::mobility_coverage_m));
    f.push_back(list("vmax_grid", &SimConfig::vmax_grid));
    f.push_back(list("xi_grid", &SimConfig::xi_grid));
    f.push_back(list("delta_grid", &SimConfig::delta_grid));
    f.push_back(number("traffic_fixed_ms", &SimConfig::traffic_fixed_ms));
    f.push_back(number("traffic_chains", &SimConfig::traffic_chains));
    f.push_back(number("traffic_batches", &SimConfig::traffic_batches));
    return f;
  }();
  return table;
}

void require(bool ok, std::string_view key, std::string_view what) {
  if (!ok) throw ConfigError("key '" + std::string(key) + "': " + std::string(what));
}

void require_positive(const std::vector<double>& v, std::string_view key) {
  require(!v.empty(), key, "must not be empty");
  for (const double x : v) require(std::isfinite(x) && x > 0.0, key, "values must be positive and finite");
}

}  // namespace

void SimConfig::validate() const {
  require(replications >= 1, "replications", "must be at least 1");
  require(threads >= 0, "threads", "must be nonnegative");
  require(arena_width_m > 0.0 && std::isfinite(arena_width_m), "arena_width_m", "must be positive");
  require(arena_height_m > 0.0 && std::isfinite(arena_height_m), "arena_height_m", "must be positive");
  require(coverage_m > 0.0 && std::isfinite(coverage_m), "coverage_m", "must be positive");
  require(iu_count >= 0, "iu_count", "must be nonnegative");
  require(ris_spacing_m > 0.0, "ris_spacing_m", "must be positive");
  require(ris_spacing_m <= coverage_m, "ris_spacing_m", "must not exceed coverage_m");
  require(ris_elements >= 1, "ris_elements", "must be at least 1");
  const Arena arena{arena_width_m, arena_height_m};
  require(arena.contains({source_x, source_y}), "source_x", "source lies outside the arena");
  require(arena.contains({dest_x, dest_y}), "dest_x", "destination lies outside the arena");
  require(source_x != dest_x || source_y != dest_y, "dest_x", "source and destination coincide");
  require_positive(lambda_off_ms, "lambda_off_ms");
  require_positive(mu_on_ms, "mu_on_ms");
  require(lambda_off_ms.size() == 1 || lambda_off_ms.size() == static_cast<std::size_t>(iu_count), "lambda_off_ms",
          "needs one value or one per IU");
  require(mu_on_ms.size() == 1 || mu_on_ms.size() == static_cast<std::size_t>(iu_count), "mu_on_ms",
          "needs one value or one per IU");
  require(slot_us > 0.0 && std::isfinite(slot_us), "slot_us", "must be positive");
  require(delta > 0.0 && delta < 1.0, "delta", "must lie in (0, 1)");
  require(p_th > 0.0 && p_th < 1.0, "p_th", "must lie in (0, 1)");
  require(std::isfinite(tx_power_dbm), "tx_power_dbm", "must be finite");
  require(std::isfinite(proc_power_dbm), "proc_power_dbm", "must be finite");
  require(std::isfinite(rho_l_db), "rho_l_db", "must be finite");
  require(alpha_d2d > 0.0, "alpha_d2d", "must be positive");
  require(alpha_other > 0.0, "alpha_other", "must be positive");
  require(std::isfinite(noise_power_dbm), "noise_power_dbm", "must be finite");
  require(!std::isnan(rician_k_db), "rician_k_db", "must be a number");
  require(target_ber > 0.0 && target_ber < 1.0, "target_ber", "must lie in (0, 1)");
  require(modulation.c1 > target_ber, "modulation.c1", "must exceed target_ber");
  require(modulation.c2 > 0.0, "modulation.c2", "must be positive");
  require(max_bits >= 1 && max_bits <= 30, "max_bits", "must lie in [1, 30]");
  require(harvester_mh_mw > 0.0, "harvester.mh_mw", "must be positive");
  require(harvester_a > 0.0, "harvester.a", "must be positive");
  require(harvester_b > 0.0, "harvester.b", "must be positive");
  require(demand_packets >= 1, "demand.packets", "must be at least 1");
  require(demand_bits_per_packet >= 1, "demand.bits_per_packet", "must be at least 1");
  require(blocklength >= 1.0, "blocklength", "must be at least 1 (or inf)");
  require(epsilon > 0.0 && epsilon < 1.0, "epsilon", "must lie in (0, 1)");
  require(delay_budget_ms >= 0.0 && std::isfinite(delay_budget_ms), "delay_budget_ms", "must be nonnegative");
  require(fixed_constellation >= 2 && (fixed_constellation & (fixed_constellation - 1)) == 0 &&
              fixed_constellation <= (1 << max_bits),
          "fixed_constellation", "must be a power of two between 2 and 2^max_bits");
  require(align_rounds >= 1, "align_rounds", "must be at least 1");
  require(ris_overhead_slots >= 0, "ris_overhead_slots", "must be nonnegative");
  require_positive(coverage_grid_m, "coverage_grid_m");
  require_positive(coverage_densities, "coverage_densities");
  require_positive(density_grid, "density_grid");
  require_positive(density_coverages_m, "density_coverages_m");
  require_positive(comparison_coverage_grid_m, "comparison_coverage_grid_m");
  require(mobility_coverage_m > 0.0, "mobility_coverage_m", "must be positive");
  require(!vmax_grid.empty(), "vmax_grid", "must not be empty");
  for (const double v : vmax_grid) require(v >= 0.0 && std::isfinite(v), "vmax_grid", "speeds must be nonnegative");
  require(!xi_grid.empty(), "xi_grid", "must not be empty");
  for (const double x : xi_grid) require(x > 0.0 && x < 1.0, "xi_grid", "duty cycles must lie in (0, 1)");
  require(!delta_grid.empty(), "delta_grid", "must not be empty");
  for (const double d : delta_grid) require(d > 0.0 && d < 1.0, "delta_grid", "values must lie in (0, 1)");
  require(traffic_fixed_ms > 0.0, "traffic_fixed_ms", "must be positive");
  require(traffic_chains >= 2, "traffic_chains", "must be at least 2");
  require(traffic_batches >= 2 && traffic_batches <= traffic_chains, "traffic_batches",
          "must lie in [2, traffic_chains]");
}

TopologySpec SimConfig::topology_spec() const {
  TopologySpec spec;
  spec.arena = {arena_width_m, arena_height_m};
  spec.coverage_radius = coverage_m;
  spec.iu_count = static_cast<std::size_t>(iu_count);
  spec.ris_spacing = ris_spacing_m;
  spec.ris_elements = ris_elements;
  spec.source = {source_x, source_y};
  spec.destination = {dest_x, dest_y};
  return spec;
}

std::vector<TrafficProfile> SimConfig::traffic_profiles() const {
  std::vector<TrafficProfile> out(static_cast<std::size_t>(iu_count));
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k].lambda_off = 1e-3 * (lambda_off_ms.size() == 1 ? lambda_off_ms[0] : lambda_off_ms[k]);
    out[k].mu_on = 1e-3 * (mu_on_ms.size() == 1 ? mu_on_ms[0] : mu_on_ms[k]);
    out[k].slot = slot_s();
  }
  return out;
}

RouterConfig SimConfig::router_config() const {
  RouterConfig rc;
  rc.variant = variant;
  rc.rate_model = std::isinf(blocklength) ? RateModel::shannon : RateModel::finite_blocklength;
  rc.link.rho_l = db_to_linear(rho_l_db);
  rc.link.alpha_d2d = alpha_d2d;
  rc.link.alpha_other = alpha_other;
  rc.link.noise_power = dbm_to_watts(noise_power_dbm);
  rc.link.tx_power = dbm_to_watts(tx_power_dbm);
  rc.link.rician_k_db = rician_k_db;
  rc.modes.table = build_mode_table(target_ber, threshold_rule, modulation, max_bits);
  rc.modes.fixed_constellation = variant == Variant::no_adaptive_modulation ? fixed_constellation : 0;
  rc.demand.packets = demand_packets;
  rc.demand.bits_per_packet = demand_bits_per_packet;
  rc.demand.proc_power = dbm_to_watts(proc_power_dbm);
  rc.harvester.max_power = harvester_mh_mw * 1e-3;
  rc.harvester.slope = harvester_a;
  rc.harvester.threshold = harvester_b;
  rc.delta = delta;
  rc.p_th = p_th;
  rc.delay_bound = delay_budget_ms * 1e-3;
  rc.slot = slot_s();
  rc.blocklength = blocklength;
  rc.epsilon = epsilon;
  rc.align_rounds = align_rounds;
  rc.ris_overhead_slots = ris_overhead_slots;
  return rc;
}

SimConfig parse_config(std::string_view text, const SimConfig& base) {
  SimConfig config = base;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value', got '" + std::string(line) + "'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return f.key == key; });
    if (it == table.end()) {
      throw ConfigError("unknown config key '" + std::string(key) + "' on line " + std::to_string(line_no));
    }
    if (!seen.insert(std::string(key)).second) {
      throw ConfigError("duplicate config key '" + std::string(key) + "' on line " + std::to_string(line_no));
    }
    it->set(config, key, value);
  }
  config.validate();
  return config;
}

SimConfig load_config(const std::filesystem::path& path, const SimConfig& base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str(), base);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string serialize_config(const SimConfig& config) {
  std::string out;
  for (const Field& f : fields()) {
    out += f.key;
    out += " = ";
    out += f.get(config);
    out += '\n';
  }
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const Field& f : fields()) keys.push_back(f.key);
  return keys;
}

}  // namespace drams
