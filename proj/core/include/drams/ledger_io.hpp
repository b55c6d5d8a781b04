#pragma once

#include <iosfwd>
#include <string>

#include "drams/router.hpp"
#include "drams/topology.hpp"

namespace drams {

/// Line-oriented ledger dump.
///
///   # drams route ledger v1
///   index,kind,from,via,to,slots,rate,harvested_J,remaining_distance_m
///   0,direct,S,,U3,4,8,1.2e-12,301.5
///   ...
///   summary,ok,None,,,57,,3.1e-12,0
///
/// `via` lists RIS labels joined by '+'. The summary row carries the outcome,
/// the failure reason, total slots, total harvested energy and the remaining
/// distance at the last position.
void write_ledger_csv(std::ostream& out, const RouteLedger& ledger, const Topology& topo);

/// Hop trace such as "S → R1 → U3 → R3+R4 → U5 → D"; a failed route ends
/// with " ✗ <reason>".
std::string format_trace(const RouteLedger& ledger, const Topology& topo);

}  // namespace drams
