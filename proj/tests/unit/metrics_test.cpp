#include <gtest/gtest.h>

#include "drams/metrics.hpp"

namespace drams {
namespace {

Hop direct(int constellation, int bits, std::int64_t slots, double harvested = 0.0) {
  Hop h;
  h.kind = HopKind::direct;
  h.to = NodeId{1};
  h.constellation = constellation;
  h.rate = bits;
  h.slots = h.transfer_slots = slots;
  h.harvested_j = harvested;
  return h;
}

Hop reflected(double rate, std::int64_t slots, int ris = 1) {
  Hop h;
  h.kind = ris == 1 ? HopKind::single_ris : HopKind::double_ris;
  h.via.assign(static_cast<std::size_t>(ris), NodeId{7});
  h.to = NodeId{1};
  h.rate = rate;
  h.transfer_slots = slots;
  h.slots = slots + 1;
  return h;
}

Hop wait(std::int64_t slots) {
  Hop h;
  h.kind = HopKind::wait;
  h.slots = slots;
  return h;
}

TEST(DataThroughput, MixedRoute) {
  RouteLedger ledger;
  ledger.success = true;
  ledger.hops = {direct(256, 8, 4), wait(19), reflected(3.29047, 10, 2), direct(16, 4, 8)};
  const double pb = 1e-6;
  const double oracle = 1.0 / (1.0 / ((1 - pb) * 256) + 1.0 / 3.29047 + 1.0 / ((1 - pb) * 16));
  EXPECT_NEAR(data_throughput(ledger, pb), oracle, 1e-12);
  const double bits = 1.0 / (1.0 / ((1 - pb) * 8) + 1.0 / 3.29047 + 1.0 / ((1 - pb) * 4));
  EXPECT_NEAR(data_throughput(ledger, pb, ThroughputUnits::bits), bits, 1e-12);
}

TEST(DataThroughput, HarmonicCompositionBounds) {
  RouteLedger ledger;
  ledger.hops = {direct(64, 6, 6), direct(64, 6, 6), direct(64, 6, 6)};
  EXPECT_NEAR(data_throughput(ledger, 0.0), 64.0 / 3.0, 1e-12);
  ledger.hops.push_back(reflected(0.0, 1));
  EXPECT_EQ(data_throughput(ledger, 0.0), 0.0);
  EXPECT_EQ(data_throughput(RouteLedger{}, 1e-6), 0.0);
  EXPECT_THROW(data_throughput(ledger, 1.0), std::invalid_argument);
}

TEST(DataThroughput, AddingHopNeverIncreases) {
  RouteLedger ledger;
  double prev = INFINITY;
  for (int k = 0; k < 10; ++k) {
    ledger.hops.push_back(k % 2 ? reflected(1.0 + k, 3) : direct(1 << (1 + k % 8), 1 + k % 8, 4));
    const double dt = data_throughput(ledger, 1e-6);
    EXPECT_LT(dt, prev);
    prev = dt;
  }
}

TEST(EnergyEfficiency, BitsOverNetEnergy) {
  RouteLedger ledger;
  ledger.success = true;
  ledger.hops = {direct(256, 8, 4, 1e-7), wait(30), reflected(3.0, 11)};
  const TransferDemand demand;
  const double spent = (1.0 + 0.01) * 15 * 100e-6;
  EXPECT_NEAR(energy_efficiency(ledger, demand, 1.0, 100e-6), 32.0 / (spent - 1e-7), 1e-9);
}

TEST(EnergyEfficiency, NetNegativeIsAnError) {
  RouteLedger ledger;
  ledger.hops = {direct(256, 8, 4, 1.0)};
  EXPECT_THROW(energy_efficiency(ledger, TransferDemand{}, 1.0, 100e-6), std::domain_error);
}

TEST(RouteMetrics, FailedRouteKeepsCountsOnly) {
  RouteLedger ledger;
  ledger.hops = {reflected(2.0, 4, 2), direct(4, 2, 16)};
  Hop end;
  end.kind = HopKind::terminate;
  ledger.hops.push_back(end);
  const RouteMetrics m = route_metrics(ledger, TransferDemand{}, 1.0, 100e-6, 1e-6, ThroughputUnits::verbatim);
  EXPECT_EQ(m.throughput, 0.0);
  EXPECT_EQ(m.energy_efficiency, 0.0);
  EXPECT_EQ(m.hop_count, 2);
  EXPECT_EQ(m.ris_count, 2);
  ledger.success = true;
  ledger.hops.pop_back();
  const RouteMetrics ok = route_metrics(ledger, TransferDemand{}, 1.0, 100e-6, 1e-6, ThroughputUnits::verbatim);
  EXPECT_GT(ok.throughput, 0.0);
  EXPECT_GT(ok.energy_efficiency, 0.0);
}

}  // namespace
}  // namespace drams
