#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "drams/config.hpp"

namespace drams {
namespace {

std::string error_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

TEST(Config, DefaultsAreValid) {
  const SimConfig c;
  EXPECT_NO_THROW(c.validate());
  const RouterConfig rc = c.router_config();
  EXPECT_NEAR(rc.link.rho_l, 2.951209226666386e-4, 1e-18);
  EXPECT_NEAR(rc.link.tx_power, 1.0, 1e-15);
  EXPECT_NEAR(rc.link.noise_power, 1e-13, 1e-27);
  EXPECT_NEAR(rc.demand.proc_power, 0.01, 1e-15);
  EXPECT_NEAR(rc.delay_bound, 0.05, 1e-15);
  EXPECT_NEAR(rc.slot, 100e-6, 1e-18);
  EXPECT_EQ(rc.modes.fixed_constellation, 0);
  EXPECT_EQ(rc.rate_model, RateModel::finite_blocklength);
  EXPECT_NEAR(rc.modes.table[1].snr_lower_db, 9.8554, 1e-4);
}

TEST(Config, ParsesValuesAndComments) {
  const SimConfig c = parse_config(
      "# scenario\n"
      "seed = 42\n"
      "coverage_m = 45   # meters\n"
      "lambda_off_ms = 8\n"
      "blocklength = inf\n"
      "variant = no_adaptive_modulation\n"
      "threshold_rule = eqtext\n"
      "coverage_grid_m = 30, 60\n"
      "harvester.a = 120\n"
      "modulation.c3 = 1\n");
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.coverage_m, 45.0);
  EXPECT_EQ(c.lambda_off_ms, std::vector<double>{8.0});
  EXPECT_TRUE(std::isinf(c.blocklength));
  EXPECT_EQ(c.variant, Variant::no_adaptive_modulation);
  EXPECT_EQ(c.threshold_rule, ThresholdRule::per_symbol_minus_one);
  EXPECT_EQ(c.coverage_grid_m, (std::vector<double>{30.0, 60.0}));
  EXPECT_EQ(c.harvester_a, 120.0);
  const RouterConfig rc = c.router_config();
  EXPECT_EQ(rc.rate_model, RateModel::shannon);
  EXPECT_EQ(rc.modes.fixed_constellation, 4);
}

TEST(Config, RejectsUnknownDuplicateAndMalformed) {
  EXPECT_NE(error_of("sed = 1\n").find("unknown config key 'sed' on line 1"), std::string::npos);
  EXPECT_NE(error_of("seed = 1\nseed = 2\n").find("duplicate config key 'seed' on line 2"), std::string::npos);
  EXPECT_NE(error_of("coverage_m = wide\n").find("coverage_m"), std::string::npos);
  EXPECT_NE(error_of("iu_count = 2.5\n").find("iu_count"), std::string::npos);
  EXPECT_NE(error_of("just words\n").find("line 1"), std::string::npos);
  EXPECT_NE(error_of("variant = opris\n").find("variant"), std::string::npos);
  EXPECT_NE(error_of("delta = 1.5\n").find("delta"), std::string::npos);
  EXPECT_NE(error_of("ris_spacing_m = 80\n").find("ris_spacing_m"), std::string::npos);
  EXPECT_NE(error_of("fixed_constellation = 6\n").find("fixed_constellation"), std::string::npos);
  EXPECT_NE(error_of("mu_on_ms = 4, 5\n").find("mu_on_ms"), std::string::npos);
}

TEST(Config, SerializeRoundTrips) {
  SimConfig c;
  c.seed = 99;
  c.blocklength = std::numeric_limits<double>::infinity();
  c.delta = 0.123456789012345;
  c.vmax_grid = {0.0, 2.5};
  c.throughput_units = ThroughputUnits::bits;
  const std::string text = serialize_config(c);
  const SimConfig back = parse_config(text);
  EXPECT_EQ(serialize_config(back), text);
  EXPECT_EQ(back.delta, c.delta);
  EXPECT_EQ(back.vmax_grid, c.vmax_grid);
  EXPECT_EQ(back.throughput_units, ThroughputUnits::bits);
}

TEST(Config, KeysAreUniqueAndAllSerialized) {
  const std::vector<std::string> keys = config_keys();
  EXPECT_EQ(std::set<std::string>(keys.begin(), keys.end()).size(), keys.size());
  const std::string text = serialize_config(SimConfig{});
  for (const std::string& k : keys) EXPECT_NE(text.find(k + " = "), std::string::npos) << k;
}

TEST(Config, LoadNamesThePath) {
  const auto dir = std::filesystem::temp_directory_path() / "drams_config_test";
  std::filesystem::create_directories(dir);
  const auto missing = dir / "absent.cfg";
  try {
    load_config(missing);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("absent.cfg"), std::string::npos);
  }
  const auto bad = dir / "bad.cfg";
  std::ofstream(bad) << "seed = 1\nbogus = 2\n";
  try {
    load_config(bad);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.cfg"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST(Config, TrafficProfilesPerIu) {
  SimConfig c;
  c.iu_count = 3;
  c.mu_on_ms = {1.0, 2.0, 3.0};
  const auto p = c.traffic_profiles();
  ASSERT_EQ(p.size(), 3u);
  EXPECT_NEAR(p[2].mu_on, 3e-3, 1e-15);
  EXPECT_NEAR(p[0].lambda_off, 16e-3, 1e-15);
}

}  // namespace
}  // namespace drams
