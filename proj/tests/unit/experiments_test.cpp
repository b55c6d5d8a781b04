#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "drams/experiments.hpp"

namespace drams {
namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

SimConfig quick(int replications = 8) {
  SimConfig c;
  c.replications = replications;
  c.threads = 1;
  c.ris_elements = 32;
  return c;
}

TEST(ReplicationSeed, DistinctAndStable) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(replication_seed(1, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(replication_seed(5, 3), replication_seed(5, 3));
  EXPECT_NE(replication_seed(5, 3), replication_seed(6, 3));
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  for (const int threads : {1, 2, 4}) {
    std::vector<std::atomic<int>> hits(257);
    parallel_for(hits.size(), threads, [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(ParallelFor, RethrowsLowestFailingIndex) {
  for (const int threads : {1, 3}) {
    try {
      parallel_for(100, threads, [](std::size_t i) {
        if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
      });
      FAIL();
    } catch (const std::runtime_error& e) {
      EXPECT_STREQ(e.what(), "17");
    }
  }
}

TEST(MobilityStep, StaysInArenaAndRespectsSpeed) {
  Rng rng(1);
  const Arena arena;
  MobilityState s{{200, 200}, {10, 10}, 15.0};
  for (int i = 0; i < 10000; ++i) {
    const MobilityState next = mobility_step(s, 0.05, arena, 20.0, rng);
    EXPECT_TRUE(arena.contains(next.position));
    EXPECT_LE(distance(s.position, next.position), 20.0 * 0.05 + 1e-9);
    EXPECT_LE(next.velocity, 20.0);
    s = next;
  }
  EXPECT_THROW(mobility_step(s, 0.0, arena, 1.0, rng), std::invalid_argument);
}

TEST(MobilityField, StaticAtZeroSpeedAndNestedAcrossSpeeds) {
  const Topology topo = generate_topology(TopologySpec{}, 4);
  const MobilityField still(topo, 4, 0.0);
  const MobilityField slow(topo, 4, 5.0);
  const MobilityField fast(topo, 4, 20.0);
  for (std::size_t k = 0; k < 50; ++k) {
    const Node& n = topo.node(topo.iu_ids()[k]);
    EXPECT_EQ(still.position_at(n, 1.0), n.position);
    EXPECT_EQ(slow.position_at(n, 0.0), n.position);
    // Short horizons stay on the first leg, where displacement scales with speed.
    const double d_slow = distance(n.position, slow.position_at(n, 1e-3));
    const double d_fast = distance(n.position, fast.position_at(n, 1e-3));
    EXPECT_NEAR(d_fast, 4.0 * d_slow, 1e-9);
  }
  const Node& ris = topo.node(topo.ris_ids()[0]);
  EXPECT_EQ(fast.position_at(ris, 10.0), ris.position);
}

TEST(RunReplication, DeterministicAndSafe) {
  const SimConfig c = quick();
  for (std::uint64_t i = 0; i < 8; ++i) {
    RouteLedger a;
    RouteLedger b;
    const ReplicationOutcome x = run_replication(c, replication_seed(c.seed, i), 0.0, &a);
    const ReplicationOutcome y = run_replication(c, replication_seed(c.seed, i), 0.0, &b);
    EXPECT_EQ(x.success, y.success);
    EXPECT_EQ(x.total_slots, y.total_slots);
    EXPECT_EQ(x.metrics.throughput, y.metrics.throughput);
    EXPECT_TRUE(x.within_delay);
    EXPECT_TRUE(x.monotone_progress);
    EXPECT_LE(x.max_reflections, 2);
    EXPECT_EQ(a.hops.size(), b.hops.size());
  }
}

TEST(RunningStat, MatchesTwoPassAndShrinksAsRootN) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(5.0, 2.0);
  std::vector<double> xs(40000);
  for (double& x : xs) x = g(rng);
  RunningStat s;
  for (const double x : xs) s.add(x);
  double mean = 0.0;
  for (const double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (const double x : xs) ss += (x - mean) * (x - mean);
  EXPECT_NEAR(s.mean, mean, 1e-10);
  EXPECT_NEAR(s.variance(), ss / static_cast<double>(xs.size() - 1), 1e-9);

  RunningStat quarter;
  for (std::size_t i = 0; i < xs.size() / 4; ++i) quarter.add(xs[i]);
  EXPECT_NEAR(quarter.se() / s.se(), 2.0, 0.05);
  EXPECT_EQ(RunningStat{}.se(), 0.0);
}

TEST(PointSummary, FailuresCountAsZeroThroughput) {
  PointSummary p;
  ReplicationOutcome ok;
  ok.success = true;
  ok.metrics.throughput = 4.0;
  ok.metrics.ris_count = 2;
  ReplicationOutcome failed;
  failed.failure = FailureReason::mobility_outage;
  failed.metrics.ris_count = 1;
  p.add(ok);
  p.add(failed);
  EXPECT_EQ(p.throughput.mean, 2.0);
  EXPECT_EQ(p.ris_count_success.mean, 2.0);
  EXPECT_EQ(p.ris_count.mean, 1.5);
  EXPECT_EQ(p.outages, 1);
  EXPECT_EQ(p.success_rate(), 0.5);
}

TEST(SurvivalCrossing, ExactOnGeometricCurve) {
  const TrafficProfile profile{4e-3, 4e-3, 100e-6};
  const double p = transition_matrix(profile).p00;
  const std::int64_t chains = std::int64_t{1} << 50;
  std::vector<std::int64_t> survivors;
  for (int n = 0; n < 40; ++n) survivors.push_back(std::llround(static_cast<double>(chains) * std::pow(p, n)));
  for (const double delta : {0.1, 0.2, 0.3}) {
    EXPECT_NEAR(survival_crossing(survivors, chains, delta), duration_of_idleness(profile, delta), 1e-9);
  }
  EXPECT_THROW(survival_crossing({100, 99}, 100, 0.5), std::runtime_error);
}

TEST(TrafficValidation, SmallRunAgreesAndIsMonotone) {
  SimConfig c = quick();
  c.traffic_chains = 4000;
  c.traffic_batches = 8;
  c.xi_grid = {0.2, 0.5, 0.8};
  c.delta_grid = {0.1, 0.3};
  const TrafficValidation v = run_traffic_validation(c);
  ASSERT_EQ(v.nu_b.size(), 6u);
  ASSERT_EQ(v.nu_i.size(), 6u);
  for (const auto* rows : {&v.nu_b, &v.nu_i}) {
    for (const TrafficValidationRow& r : *rows) {
      EXPECT_TRUE(r.in_band()) << r.xi << " " << r.delta << " " << r.analytic << " " << r.mc_mean;
      EXPECT_GT(r.mc_se, 0.0);
    }
  }
  for (std::size_t i = 2; i < 6; ++i) {
    EXPECT_GT(v.nu_b[i].analytic, v.nu_b[i - 2].analytic);
    EXPECT_LT(v.nu_i[i].analytic, v.nu_i[i - 2].analytic);
  }
}

TEST(Sweeps, SharedDrawsAcrossVariants) {
  SimConfig c = quick(6);
  c.comparison_coverage_grid_m = {40, 70};
  const std::vector<SweepRow> rows = run_comparison(c);
  ASSERT_EQ(rows.size(), 10u);
  std::set<std::string> variants;
  for (const SweepRow& r : rows) {
    variants.insert(r.variant);
    EXPECT_EQ(r.summary.replications, 6);
    EXPECT_TRUE(r.summary.within_delay);
    EXPECT_TRUE(r.summary.monotone_progress);
    EXPECT_LE(r.summary.max_reflections, 2);
  }
  EXPECT_EQ(variants, (std::set<std::string>{"drams", "drams_shannon", "no_adaptive_modulation", "single_ris_only",
                                             "double_ris_only"}));
}

TEST(Run, WritesOutputsAndReproducesFromManifest) {
  const auto dir = std::filesystem::temp_directory_path() / "drams_run_test";
  std::filesystem::remove_all(dir);
  SimConfig c = quick(4);
  c.coverage_grid_m = {40, 80};
  c.coverage_densities = {100};
  const ExperimentReport first = run({ExperimentKind::coverage_sweep, c}, dir / "a");
  EXPECT_EQ(first.routes, 8);
  const SimConfig again = load_config(dir / "a" / "manifest.cfg");
  run({ExperimentKind::coverage_sweep, again}, dir / "b");
  EXPECT_EQ(slurp(dir / "a" / "coverage_sweep.csv"), slurp(dir / "b" / "coverage_sweep.csv"));
  EXPECT_EQ(slurp(dir / "a" / "coverage_sweep.csv").rfind("scenario,seed,variant,coverage_m,density,v_max,", 0), 0u);

  const ExperimentReport route = run({ExperimentKind::trajectory, c}, dir / "c");
  EXPECT_EQ(route.routes, 1);
  EXPECT_EQ(route.trace.rfind("S", 0), 0u);
  EXPECT_TRUE(std::filesystem::exists(dir / "c" / "route_ledger.csv"));
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace drams
