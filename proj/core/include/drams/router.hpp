#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "drams/channel.hpp"
#include "drams/delaymodel.hpp"
#include "drams/linkbudget.hpp"
#include "drams/topology.hpp"
#include "drams/traffic.hpp"

namespace drams {

enum class Variant : std::uint8_t { drams, single_ris_only, double_ris_only, no_adaptive_modulation };
enum class RateModel : std::uint8_t { finite_blocklength, shannon };

enum class HopKind : std::uint8_t { direct, single_ris, double_ris, wait, terminate };

enum class FailureReason : std::uint8_t {
  none,
  no_iu_no_ris,
  delay_exceeded,
  dead_end_after_single_ris,
  dead_end_after_double_ris,
  mobility_outage,
};

std::string_view to_string(Variant v) noexcept;
std::string_view to_string(RateModel m) noexcept;
std::string_view to_string(HopKind k) noexcept;
std::string_view to_string(FailureReason r) noexcept;
std::optional<Variant> parse_variant(std::string_view s) noexcept;

/// Direct-link constellation choice: adaptive over the whole table, or one
/// fixed constellation (usable only when the SNR reaches its threshold).
struct ModePolicy {
  ModeTable table = build_mode_table(1e-6);
  int fixed_constellation = 0;  // 0 = adaptive

  const TransmissionMode& pick(double snr) const;
};

struct RouterConfig {
  Variant variant = Variant::drams;
  RateModel rate_model = RateModel::finite_blocklength;
  LinkBudgetParams link;
  ModePolicy modes;
  TransferDemand demand;
  HarvesterParams harvester;
  double delta = 0.1;
  double p_th = 0.01;
  double delay_bound = 50e-3;  // T_d, seconds
  double slot = 100e-6;        // T_s, seconds
  double blocklength = 1000.0; // infinity selects the Shannon rate
  double epsilon = 1e-4;
  int align_rounds = 20;
  int ris_overhead_slots = 1;

  /// Rate of a reflected link at linear SNR `gamma`, bits per channel use.
  double ris_rate(double gamma) const;
};

struct Hop {
  HopKind kind = HopKind::terminate;
  NodeId from;
  std::vector<NodeId> via;  // reflecting RISs, at most two
  std::optional<NodeId> to;
  std::int64_t start_slot = 0;
  std::int64_t slots = 0;           // clock slots the hop occupies
  std::int64_t transfer_slots = 0;  // tau, slots spent transmitting
  double rate = 0.0;                // bits/symbol (direct) or bits/channel use (RIS)
  int constellation = 0;            // direct hops only
  double snr = 0.0;
  double received_power = 0.0;  // W
  double harvested_j = 0.0;
  double remaining_distance = 0.0;  // of the receiving node, or of `from`
  double budget = 0.0;              // budget of the position the hop leaves, seconds

  bool transmits() const noexcept { return kind != HopKind::wait && kind != HopKind::terminate; }
};

struct RouteLedger {
  std::vector<Hop> hops;
  std::int64_t total_slots = 0;
  bool success = false;
  FailureReason failure = FailureReason::none;
  /// Deferrals skipped because the window alone exceeded the position's budget.
  int skipped_waits = 0;
  std::vector<double> budgets;  // T_d_i per visited position

  int ris_count() const noexcept;
  int transmitting_hops() const noexcept;
  double harvested_j() const noexcept;
};

/// Fading realizations keyed by endpoints and decision epoch, so that every
/// router variant sees the same channel for the same link at the same slot.
class ChannelField {
 public:
  ChannelField(std::uint64_t seed, double rician_k_db) : seed_(seed), k_db_(rician_k_db) {}

  Complex direct(const Node& tx, const Node& rx, std::int64_t epoch) const;
  FadingVector ingress(const Node& tx, const Node& ris, std::int64_t epoch) const;
  FadingVector egress(const Node& ris, const Node& rx, std::int64_t epoch) const;
  FadingMatrix mesh(const Node& from_ris, const Node& to_ris, std::int64_t epoch) const;

 private:
  std::uint64_t seed_;
  double k_db_;
};

/// An idle IU seen from the current position.
struct IuCandidate {
  NodeId iu;
  double remaining_distance = 0.0;
  double snr = 0.0;          // linear
  double idle_window = 0.0;  // nu_I, slots
};

struct AvailablePair {
  NodeId iu;
  int constellation = 0;
  int bits = 0;
  std::int64_t slots = 0;  // tau_req
  double remaining_distance = 0.0;
  double snr = 0.0;
};

/// Keeps (IU, best mode) pairs with tau_req <= nu_I.
std::vector<AvailablePair> availability_set(std::span<const IuCandidate> idle, const ModePolicy& modes,
                                            const TransferDemand& demand);

/// Smallest tau_req, then least remaining distance, then lower id.
std::optional<AvailablePair> select_iu(std::span<const AvailablePair> set);

/// The decision procedure over one static location map.
class Router {
 public:
  Router(const Topology& topo, ActivityTimeline& activity, const ChannelField& channel, const RouterConfig& config);

  RouteLedger route();

  /// Single reflection from `from`: the RIS whose best qualifying receiver
  /// lies nearest to D; then the selection rule over that RIS's receivers.
  std::optional<Hop> single_ris_hop(const Node& from, std::int64_t clock);

  /// Double reflection via the first RIS in LRD order and one RIS in its
  /// half-disc.
  std::optional<Hop> double_ris_hop(const Node& from, std::int64_t clock);

 private:
  struct RisTarget;

  bool idle_at(const Node& iu, std::int64_t clock);
  double idle_window(const Node& iu) const;
  std::vector<Node> progress_scan(Position center, double remaining_limit, KindMask kinds) const;
  std::optional<Hop> direct_to_destination(const Node& from, std::int64_t clock) const;
  std::optional<Hop> best_direct_iu(const Node& from, std::int64_t clock, std::vector<const Node*>* busy);
  bool qualifies(const Node& target, double rate, std::int64_t* slots) const;

  const Topology& topo_;
  ActivityTimeline& activity_;
  const ChannelField& channel_;
  const RouterConfig& config_;
};

}  // namespace drams
