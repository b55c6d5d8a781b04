#include <gtest/gtest.h>

#include <sstream>

#include "drams/csv.hpp"
#include "drams/ledger_io.hpp"

namespace drams {
namespace {

Topology small_topology() {
  std::vector<Node> nodes{
      {NodeId{0}, NodeKind::source, {20, 200}, 1, 0},      {NodeId{1}, NodeKind::destination, {200, 200}, 1, 0},
      {NodeId{2}, NodeKind::iu, {60, 200}, 1, 0},          {NodeId{3}, NodeKind::iu, {150, 200}, 2, 0},
      {NodeId{4}, NodeKind::ris, {100, 210}, 1, 4},        {NodeId{5}, NodeKind::ris, {120, 210}, 2, 4},
  };
  return Topology(nodes, 60.0, Arena{});
}

RouteLedger sample_ledger() {
  RouteLedger l;
  Hop a;
  a.kind = HopKind::direct;
  a.from = NodeId{0};
  a.to = NodeId{2};
  a.slots = a.transfer_slots = 4;
  a.rate = 8;
  a.harvested_j = 1.5e-6;
  a.remaining_distance = 140;
  Hop w;
  w.kind = HopKind::wait;
  w.from = NodeId{2};
  w.slots = 19;
  w.remaining_distance = 140;
  Hop b;
  b.kind = HopKind::double_ris;
  b.from = NodeId{2};
  b.via = {NodeId{4}, NodeId{5}};
  b.to = NodeId{3};
  b.slots = 11;
  b.rate = 3.25;
  b.remaining_distance = 50;
  Hop c = a;
  c.from = NodeId{3};
  c.to = NodeId{1};
  c.harvested_j = 0;
  c.remaining_distance = 0;
  l.hops = {a, w, b, c};
  l.success = true;
  l.total_slots = 38;
  return l;
}

TEST(LedgerCsv, Schema) {
  std::ostringstream out;
  write_ledger_csv(out, sample_ledger(), small_topology());
  EXPECT_EQ(out.str(),
            "# drams route ledger v1\n"
            "index,kind,from,via,to,slots,rate,harvested_J,remaining_distance_m\n"
            "0,direct,S,,U1,4,8,1.5e-06,140\n"
            "1,wait,U1,,,19,,0,140\n"
            "2,double_ris,U1,R1+R2,U2,11,3.25,0,50\n"
            "3,direct,U2,,D,4,8,0,0\n"
            "summary,ok,None,,,38,,1.5e-06,0\n");
}

TEST(LedgerCsv, FailedSummary) {
  RouteLedger l;
  Hop end;
  end.kind = HopKind::terminate;
  end.from = NodeId{0};
  end.remaining_distance = 180;
  l.hops = {end};
  l.failure = FailureReason::no_iu_no_ris;
  std::ostringstream out;
  write_ledger_csv(out, l, small_topology());
  EXPECT_NE(out.str().find("0,terminate,S,,,0,,0,180\nsummary,failed,NoIuNoRis,,,0,,0,180\n"), std::string::npos);
  EXPECT_EQ(format_trace(l, small_topology()), "S ✗ NoIuNoRis");
}

TEST(Trace, Notation) {
  EXPECT_EQ(format_trace(sample_ledger(), small_topology()), "S → U1 → R1+R2 → U2 → D");
}

TEST(Csv, ShortestRoundTrip) {
  for (const double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.0, -2.5, 0.0}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(INFINITY), "inf");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_EQ(format_list({1.0, 2.5}), "1,2.5");
  EXPECT_EQ(CsvRow().add("a").add(1.5).add(std::int64_t{3}).add_empty().str(), "a,1.5,3,");
}

}  // namespace
}  // namespace drams
