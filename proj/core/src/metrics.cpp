#include "drams/metrics.hpp"

#include <stdexcept>

namespace drams {

double data_throughput(const RouteLedger& ledger, double target_ber, ThroughputUnits units) {
  if (!(target_ber >= 0.0 && target_ber < 1.0)) throw std::invalid_argument("target BER must lie in [0, 1)");
  double sum = 0.0;
  bool any = false;
  for (const Hop& hop : ledger.hops) {
    if (!hop.transmits()) continue;
    any = true;
    if (hop.kind == HopKind::direct) {
      const double per_symbol = units == ThroughputUnits::verbatim ? hop.constellation : hop.rate;
      if (!(per_symbol > 0.0)) return 0.0;
      sum += 1.0 / ((1.0 - target_ber) * per_symbol);
    } else {
      if (!(hop.rate > 0.0)) return 0.0;
      sum += 1.0 / hop.rate;
    }
  }
  return any ? 1.0 / sum : 0.0;
}

double energy_efficiency(const RouteLedger& ledger, const TransferDemand& demand, double tx_power, double slot) {
  std::int64_t tau = 0;
  double harvested = 0.0;
  for (const Hop& hop : ledger.hops) {
    if (!hop.transmits()) continue;
    tau += hop.transfer_slots;
    harvested += hop.harvested_j;
  }
  const double net = transfer_energy_for_slots(demand, tau, tx_power, slot) - harvested;
  if (!(net > 0.0)) throw std::domain_error("net-negative energy: harvest meets or exceeds spend");
  return static_cast<double>(demand.total_bits()) / net;
}

RouteMetrics route_metrics(const RouteLedger& ledger, const TransferDemand& demand, double tx_power, double slot,
                           double target_ber, ThroughputUnits units) {
  RouteMetrics m;
  m.hop_count = ledger.transmitting_hops();
  m.ris_count = ledger.ris_count();
  if (!ledger.success) return m;
  m.throughput = data_throughput(ledger, target_ber, units);
  m.throughput_normalized = data_throughput(ledger, target_ber, ThroughputUnits::bits);
  m.energy_efficiency = energy_efficiency(ledger, demand, tx_power, slot);
  return m;
}

}  // namespace drams
