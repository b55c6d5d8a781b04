#pragma once

#include <cstdint>

#include "drams/linkbudget.hpp"
#include "drams/router.hpp"

namespace drams {

/// Unit of the direct-hop term in the throughput composition: the
/// constellation size m_q as published, or its bit count log2 m_q.
enum class ThroughputUnits : std::uint8_t { verbatim, bits };

struct RouteMetrics {
  double throughput = 0.0;
  double throughput_normalized = 0.0;
  double energy_efficiency = 0.0;  // bits per joule
  int hop_count = 0;
  int ris_count = 0;
};

/// 1 / sum_i [ (1 - a_i) / ((1 - P_b) m_i) + a_i / R_i ], a_i = 1 on RIS hops.
/// Returns 0 when some hop has zero rate.
double data_throughput(const RouteLedger& ledger, double target_ber, ThroughputUnits units = ThroughputUnits::verbatim);

/// Bits delivered over net energy, alpha phi / ((P + P_proc) T_s sum tau -
/// sum E_harv). Throws std::domain_error on a nonpositive denominator.
double energy_efficiency(const RouteLedger& ledger, const TransferDemand& demand, double tx_power, double slot);

/// All of the above for a successful ledger; zeros otherwise.
RouteMetrics route_metrics(const RouteLedger& ledger, const TransferDemand& demand, double tx_power, double slot,
                           double target_ber, ThroughputUnits units);

}  // namespace drams
