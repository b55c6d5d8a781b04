#include "drams/ledger_io.hpp"

#include <ostream>

#include "drams/csv.hpp"

namespace drams {

void write_ledger_csv(std::ostream& out, const RouteLedger& ledger, const Topology& topo) {
  out << "# drams route ledger v1\n";
  write_csv_header(out, {"index", "kind", "from", "via", "to", "slots", "rate", "harvested_J", "remaining_distance_m"});
  std::int64_t index = 0;
  for (const Hop& hop : ledger.hops) {
    std::string via;
    for (std::size_t k = 0; k < hop.via.size(); ++k) {
      if (k) via += '+';
      via += label(topo.node(hop.via[k]));
    }
    CsvRow row;
    row.add(index++).add(to_string(hop.kind)).add(label(topo.node(hop.from))).add(via);
    if (hop.to) {
      row.add(label(topo.node(*hop.to)));
    } else {
      row.add_empty();
    }
    row.add(hop.slots);
    if (hop.transmits()) {
      row.add(hop.rate);
    } else {
      row.add_empty();
    }
    row.add(hop.harvested_j).add(hop.remaining_distance);
    out << row;
  }
  const double remaining = ledger.hops.empty() ? 0.0 : ledger.hops.back().remaining_distance;
  CsvRow summary;
  summary.add("summary").add(ledger.success ? "ok" : "failed").add(to_string(ledger.failure)).add_empty().add_empty();
  summary.add(ledger.total_slots).add_empty().add(ledger.harvested_j()).add(remaining);
  out << summary;
}

std::string format_trace(const RouteLedger& ledger, const Topology& topo) {
  std::string trace = label(topo.source());
  for (const Hop& hop : ledger.hops) {
    if (!hop.transmits()) continue;
    if (!hop.via.empty()) {
      trace += " → ";
      for (std::size_t k = 0; k < hop.via.size(); ++k) {
        if (k) trace += '+';
        trace += label(topo.node(hop.via[k]));
      }
    }
    trace += " → ";
    trace += label(topo.node(*hop.to));
  }
  if (!ledger.success) {
    trace += " ✗ ";
    trace += to_string(ledger.failure);
  }
  return trace;
}

}  // namespace drams
