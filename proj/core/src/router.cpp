#include "drams/router.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace drams {

namespace {

constexpr double kBudgetSlack = 1e-12;

std::uint64_t node_key(const Node& n) noexcept {
  return (static_cast<std::uint64_t>(n.kind) << 32) | n.ordinal;
}

std::uint64_t epoch_key(std::int64_t epoch) noexcept { return static_cast<std::uint64_t>(epoch); }

}  // namespace

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::drams: return "drams";
    case Variant::single_ris_only: return "single_ris_only";
    case Variant::double_ris_only: return "double_ris_only";
    case Variant::no_adaptive_modulation: return "no_adaptive_modulation";
  }
  return "?";
}

std::string_view to_string(RateModel m) noexcept {
  return m == RateModel::shannon ? "shannon" : "finite_blocklength";
}

std::string_view to_string(HopKind k) noexcept {
  switch (k) {
    case HopKind::direct: return "direct";
    case HopKind::single_ris: return "single_ris";
    case HopKind::double_ris: return "double_ris";
    case HopKind::wait: return "wait";
    case HopKind::terminate: return "terminate";
  }
  return "?";
}

std::string_view to_string(FailureReason r) noexcept {
  switch (r) {
    case FailureReason::none: return "None";
    case FailureReason::no_iu_no_ris: return "NoIuNoRis";
    case FailureReason::delay_exceeded: return "DelayExceeded";
    case FailureReason::dead_end_after_single_ris: return "DeadEndAfterSingleRis";
    case FailureReason::dead_end_after_double_ris: return "DeadEndAfterDoubleRis";
    case FailureReason::mobility_outage: return "MobilityOutage";
  }
  return "?";
}

std::optional<Variant> parse_variant(std::string_view s) noexcept {
  for (const Variant v : {Variant::drams, Variant::single_ris_only, Variant::double_ris_only,
                          Variant::no_adaptive_modulation}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

const TransmissionMode& ModePolicy::pick(double snr) const {
  if (fixed_constellation == 0) return select_mode_linear(table, snr);
  const TransmissionMode& fixed = table.by_constellation(fixed_constellation);
  if (snr > 0.0 && 10.0 * std::log10(snr) >= fixed.snr_lower_db) return fixed;
  return table[0];
}

double RouterConfig::ris_rate(double gamma) const {
  if (rate_model == RateModel::shannon || std::isinf(blocklength)) return shannon_rate(gamma);
  return finite_blocklength_rate(gamma, blocklength, epsilon);
}

int RouteLedger::ris_count() const noexcept {
  int n = 0;
  for (const Hop& h : hops) n += static_cast<int>(h.via.size());
  return n;
}

int RouteLedger::transmitting_hops() const noexcept {
  return static_cast<int>(std::count_if(hops.begin(), hops.end(), [](const Hop& h) { return h.transmits(); }));
}

double RouteLedger::harvested_j() const noexcept {
  double sum = 0.0;
  for (const Hop& h : hops) sum += h.harvested_j;
  return sum;
}

Complex ChannelField::direct(const Node& tx, const Node& rx, std::int64_t epoch) const {
  Rng rng = keyed_rng(derive_key(seed_, {tag(StreamTag::direct_link), node_key(tx), node_key(rx), epoch_key(epoch)}));
  return sample_rician(k_db_, rng);
}

FadingVector ChannelField::ingress(const Node& tx, const Node& ris, std::int64_t epoch) const {
  Rng rng = keyed_rng(derive_key(seed_, {tag(StreamTag::ris_ingress), node_key(tx), node_key(ris), epoch_key(epoch)}));
  return sample_fading(static_cast<std::size_t>(ris.ris_elements), k_db_, rng);
}

FadingVector ChannelField::egress(const Node& ris, const Node& rx, std::int64_t epoch) const {
  Rng rng = keyed_rng(derive_key(seed_, {tag(StreamTag::ris_egress), node_key(ris), node_key(rx), epoch_key(epoch)}));
  return sample_fading(static_cast<std::size_t>(ris.ris_elements), k_db_, rng);
}

FadingMatrix ChannelField::mesh(const Node& from_ris, const Node& to_ris, std::int64_t epoch) const {
  Rng rng = keyed_rng(
      derive_key(seed_, {tag(StreamTag::ris_mesh), node_key(from_ris), node_key(to_ris), epoch_key(epoch)}));
  return sample_fading_matrix(static_cast<std::size_t>(to_ris.ris_elements),
                              static_cast<std::size_t>(from_ris.ris_elements), k_db_, rng);
}

std::vector<AvailablePair> availability_set(std::span<const IuCandidate> idle, const ModePolicy& modes,
                                            const TransferDemand& demand) {
  std::vector<AvailablePair> out;
  for (const IuCandidate& c : idle) {
    const TransmissionMode& mode = modes.pick(c.snr);
    if (!mode.transmits()) continue;
    const std::int64_t tau = transfer_slots(demand, mode);
    if (static_cast<double>(tau) <= c.idle_window) {
      out.push_back({c.iu, mode.constellation, mode.bits, tau, c.remaining_distance, c.snr});
    }
  }
  return out;
}

std::optional<AvailablePair> select_iu(std::span<const AvailablePair> set) {
  if (set.empty()) return std::nullopt;
  return *std::min_element(set.begin(), set.end(), [](const AvailablePair& a, const AvailablePair& b) {
    return std::tie(a.slots, a.remaining_distance, a.iu) < std::tie(b.slots, b.remaining_distance, b.iu);
  });
}

Router::Router(const Topology& topo, ActivityTimeline& activity, const ChannelField& channel,
               const RouterConfig& config)
    : topo_(topo), activity_(activity), channel_(channel), config_(config) {
  if (activity_.size() != topo_.iu_count()) throw std::invalid_argument("one traffic profile per IU required");
  config_.link.validate();
  config_.demand.validate();
  config_.harvester.validate();
  if (!(config_.slot > 0.0)) throw std::invalid_argument("slot must be positive");
}

bool Router::idle_at(const Node& iu, std::int64_t clock) {
  return activity_.state_at(iu.ordinal - 1, clock) == ActivityState::idle;
}

double Router::idle_window(const Node& iu) const {
  return duration_of_idleness(activity_.profile(iu.ordinal - 1), config_.delta);
}

std::vector<Node> Router::progress_scan(Position center, double remaining_limit, KindMask kinds) const {
  const Position target = topo_.destination().position;
  std::vector<Node> nodes = half_circle_scan(topo_, center, target, kinds);
  std::erase_if(nodes, [&](const Node& n) { return !(distance(n.position, target) < remaining_limit); });
  return nodes;
}

bool Router::qualifies(const Node& target, double rate, std::int64_t* slots) const {
  if (!(rate > 0.0)) return false;
  *slots = transfer_slots_for_rate(config_.demand, rate);
  if (target.kind == NodeKind::destination) return true;
  return static_cast<double>(*slots) <= idle_window(target);
}

std::optional<Hop> Router::direct_to_destination(const Node& from, std::int64_t clock) const {
  const Node& dst = topo_.destination();
  const double d = distance(from.position, dst.position);
  if (d > topo_.coverage_radius()) return std::nullopt;
  const double snr = direct_snr(config_.link, channel_.direct(from, dst, clock), d);
  const TransmissionMode& mode = config_.modes.pick(snr);
  if (!mode.transmits()) return std::nullopt;
  Hop hop;
  hop.kind = HopKind::direct;
  hop.from = from.id;
  hop.to = dst.id;
  hop.transfer_slots = hop.slots = transfer_slots(config_.demand, mode);
  hop.rate = mode.bits;
  hop.constellation = mode.constellation;
  hop.snr = snr;
  hop.received_power = snr * config_.link.noise_power;
  hop.remaining_distance = 0.0;
  return hop;
}

std::optional<Hop> Router::best_direct_iu(const Node& from, std::int64_t clock, std::vector<const Node*>* busy) {
  const Position target = topo_.destination().position;
  const std::vector<Node> scan = progress_scan(from.position, distance(from.position, target), kIuMask);
  std::vector<IuCandidate> idle;
  for (const Node& n : scan) {
    if (!idle_at(n, clock)) {
      busy->push_back(&topo_.node(n.id));
      continue;
    }
    const double d = distance(from.position, n.position);
    idle.push_back({n.id, distance(n.position, target), direct_snr(config_.link, channel_.direct(from, n, clock), d),
                    idle_window(n)});
  }
  const std::vector<AvailablePair> aset = availability_set(idle, config_.modes, config_.demand);
  const std::optional<AvailablePair> pick = select_iu(aset);
  if (!pick) return std::nullopt;

  Hop hop;
  hop.kind = HopKind::direct;
  hop.from = from.id;
  hop.to = pick->iu;
  hop.transfer_slots = hop.slots = pick->slots;
  hop.rate = pick->bits;
  hop.constellation = pick->constellation;
  hop.snr = pick->snr;
  hop.received_power = pick->snr * config_.link.noise_power;
  hop.harvested_j = harvested_energy_for_transfer(config_.harvester, hop.received_power, hop.slots, config_.slot);
  hop.remaining_distance = pick->remaining_distance;
  return hop;
}

struct Router::RisTarget {
  std::size_t ris = 0;  // index into the RIS candidate list
  Node node;
  double remaining = 0.0;
  double ris_remaining = 0.0;
  bool evaluated = false;
  bool ok = false;
  std::int64_t slots = 0;
  double rate = 0.0;
  double snr = 0.0;
};

namespace {

template <class Target, class Evaluate>
Target* pick_ris_target(std::vector<Target>& pairs, Evaluate&& evaluate) {
  std::sort(pairs.begin(), pairs.end(), [](const Target& a, const Target& b) {
    return std::tie(a.remaining, a.ris_remaining, a.ris, a.node.id) <
           std::tie(b.remaining, b.ris_remaining, b.ris, b.node.id);
  });
  Target* first = nullptr;
  for (Target& p : pairs) {
    evaluate(p);
    if (p.ok) {
      first = &p;
      break;
    }
  }
  if (first == nullptr) return nullptr;
  if (first->node.kind == NodeKind::destination) return first;

  Target* best = first;
  for (Target& p : pairs) {
    if (p.ris != first->ris) continue;
    evaluate(p);
    if (!p.ok) continue;
    if (p.node.kind == NodeKind::destination) return &p;
    if (std::tie(p.slots, p.remaining, p.node.id) < std::tie(best->slots, best->remaining, best->node.id)) best = &p;
  }
  return best;
}

}  // namespace

std::optional<Hop> Router::single_ris_hop(const Node& from, std::int64_t clock) {
  const Position target = topo_.destination().position;
  const double rem_from = distance(from.position, target);
  const std::vector<Node> riss = progress_scan(from.position, rem_from, kRisMask);

  std::vector<RisTarget> pairs;
  for (std::size_t j = 0; j < riss.size(); ++j) {
    for (const Node& t : progress_scan(riss[j].position, rem_from, kIuMask | kDestinationMask)) {
      if (t.kind == NodeKind::iu && !idle_at(t, clock)) continue;
      pairs.push_back({j, t, distance(t.position, target), distance(riss[j].position, target)});
    }
  }

  std::vector<std::optional<FadingVector>> ingress(riss.size());
  auto evaluate = [&](RisTarget& p) {
    if (p.evaluated) return;
    p.evaluated = true;
    const Node& ris = riss[p.ris];
    if (!ingress[p.ris]) ingress[p.ris] = channel_.ingress(from, ris, clock);
    const FadingVector h_out = channel_.egress(ris, p.node, clock);
    p.snr = optimal_single_reflection_snr(config_.link, *ingress[p.ris], h_out, distance(from.position, ris.position),
                                          distance(ris.position, p.node.position));
    p.rate = config_.ris_rate(p.snr);
    p.ok = qualifies(p.node, p.rate, &p.slots);
  };

  const RisTarget* chosen = pick_ris_target(pairs, evaluate);
  if (chosen == nullptr) return std::nullopt;

  Hop hop;
  hop.kind = HopKind::single_ris;
  hop.from = from.id;
  hop.via = {riss[chosen->ris].id};
  hop.to = chosen->node.id;
  hop.transfer_slots = chosen->slots;
  hop.slots = config_.ris_overhead_slots + chosen->slots;
  hop.rate = chosen->rate;
  hop.snr = chosen->snr;
  hop.received_power = chosen->snr * config_.link.noise_power;
  if (chosen->node.kind == NodeKind::iu) {
    hop.harvested_j = harvested_energy_for_transfer(config_.harvester, hop.received_power, hop.transfer_slots,
                                                    config_.slot);
  }
  hop.remaining_distance = chosen->remaining;
  return hop;
}

std::optional<Hop> Router::double_ris_hop(const Node& from, std::int64_t clock) {
  const Position target = topo_.destination().position;
  const double rem_from = distance(from.position, target);
  const std::vector<Node> firsts = progress_scan(from.position, rem_from, kRisMask);
  if (firsts.empty()) return std::nullopt;
  const Node& ri = firsts.front();
  const std::vector<Node> seconds = progress_scan(ri.position, distance(ri.position, target), kRisMask);

  std::vector<RisTarget> pairs;
  for (std::size_t j = 0; j < seconds.size(); ++j) {
    for (const Node& t : progress_scan(seconds[j].position, rem_from, kIuMask | kDestinationMask)) {
      if (t.kind == NodeKind::iu && !idle_at(t, clock)) continue;
      pairs.push_back({j, t, distance(t.position, target), distance(seconds[j].position, target)});
    }
  }
  if (pairs.empty()) return std::nullopt;

  const FadingVector h_in = channel_.ingress(from, ri, clock);
  const double d_in = distance(from.position, ri.position);
  struct Mesh {
    FadingMatrix h;
    std::vector<double> bound;
  };
  std::vector<std::optional<Mesh>> meshes(seconds.size());
  const LinkBudgetParams& link = config_.link;

  auto evaluate = [&](RisTarget& p) {
    if (p.evaluated) return;
    p.evaluated = true;
    const Node& rj = seconds[p.ris];
    if (!meshes[p.ris]) {
      FadingMatrix h = channel_.mesh(ri, rj, clock);
      std::vector<double> bound = double_reflection_ingress_bound(h_in, h);
      meshes[p.ris] = Mesh{std::move(h), std::move(bound)};
    }
    const Mesh& mesh = *meshes[p.ris];
    const FadingVector h_out = channel_.egress(rj, p.node, clock);
    const double d_mid = distance(ri.position, rj.position);
    const double d_out = distance(rj.position, p.node.position);

    double bound = 0.0;
    for (std::size_t r = 0; r < mesh.bound.size(); ++r) bound += h_out.amplitudes[r] * mesh.bound[r];
    const double loss = link.tx_power * link.rho_l * link.rho_l * link.rho_l * std::pow(d_in, -link.alpha_other) *
                        std::pow(d_mid, -link.alpha_other) * std::pow(d_out, -link.alpha_other) / link.noise_power;
    std::int64_t bound_slots = 0;
    if (!qualifies(p.node, config_.ris_rate(loss * bound * bound), &bound_slots)) return;

    const DoubleReflectionPhases phases = align_double_reflection(h_in, mesh.h, h_out, config_.align_rounds);
    p.snr = double_reflection_sinr(link, h_in, phases.first, mesh.h, phases.second, h_out, d_in, d_mid, d_out);
    p.rate = config_.ris_rate(p.snr);
    p.ok = qualifies(p.node, p.rate, &p.slots);
  };

  const RisTarget* chosen = pick_ris_target(pairs, evaluate);
  if (chosen == nullptr) return std::nullopt;

  Hop hop;
  hop.kind = HopKind::double_ris;
  hop.from = from.id;
  hop.via = {ri.id, seconds[chosen->ris].id};
  hop.to = chosen->node.id;
  hop.transfer_slots = chosen->slots;
  hop.slots = config_.ris_overhead_slots + chosen->slots;
  hop.rate = chosen->rate;
  hop.snr = chosen->snr;
  hop.received_power = chosen->snr * link.noise_power;
  if (chosen->node.kind == NodeKind::iu) {
    hop.harvested_j = harvested_energy_for_transfer(config_.harvester, hop.received_power, hop.transfer_slots,
                                                    config_.slot);
  }
  hop.remaining_distance = chosen->remaining;
  return hop;
}

RouteLedger Router::route() {
  RouteLedger ledger;
  const Node& src = topo_.source();
  const Node& dst = topo_.destination();
  const double r = topo_.coverage_radius();
  const double slot = config_.slot;
  const int psi = min_hops(distance(src.position, dst.position), r);

  DelayBudget budget = DelayBudget::start(config_.delay_bound, psi);
  double limit = budget.limits.front();
  ledger.budgets.push_back(limit);

  const Node* pos = &src;
  std::int64_t clock = 0;

  auto fits = [&](std::int64_t slots) { return static_cast<double>(slots) * slot <= limit * (1.0 + kBudgetSlack); };
  auto fail = [&](FailureReason why) {
    Hop end;
    end.kind = HopKind::terminate;
    end.from = pos->id;
    end.start_slot = clock;
    end.remaining_distance = distance(pos->position, dst.position);
    end.budget = limit;
    ledger.hops.push_back(std::move(end));
    ledger.failure = why;
    ledger.total_slots = clock;
    return ledger;
  };

  if (config_.delay_bound < slot) return fail(FailureReason::delay_exceeded);

  for (std::size_t position = 0;; ++position) {
    if (position > topo_.nodes().size()) throw std::logic_error("route failed to make progress");
    const double rem_here = distance(pos->position, dst.position);
    std::int64_t here = 0;
    bool waited = false;
    bool over_budget = false;
    std::optional<Hop> hop;

    for (;;) {
      hop = direct_to_destination(*pos, clock);
      if (hop && fits(here + hop->slots)) break;
      over_budget = over_budget || hop.has_value();

      std::vector<const Node*> busy;
      hop = best_direct_iu(*pos, clock, &busy);
      if (hop && fits(here + hop->slots)) break;
      over_budget = over_budget || hop.has_value();
      hop.reset();

      if (waited || busy.empty()) break;
      std::vector<TrafficProfile> profiles;
      profiles.reserve(busy.size());
      for (const Node* b : busy) profiles.push_back(activity_.profile(b->ordinal - 1));
      const int window = deferral_window(profiles, config_.p_th);
      if (!fits(here + window)) {
        ++ledger.skipped_waits;
        break;
      }
      Hop wait;
      wait.kind = HopKind::wait;
      wait.from = pos->id;
      wait.start_slot = clock;
      wait.slots = window;
      wait.remaining_distance = rem_here;
      wait.budget = limit;
      ledger.hops.push_back(std::move(wait));
      clock += window;
      here += window;
      waited = true;
    }

    if (!hop) {
      if (progress_scan(pos->position, rem_here, kRisMask).empty()) {
        return fail(over_budget ? FailureReason::delay_exceeded : FailureReason::no_iu_no_ris);
      }
      if (config_.variant != Variant::double_ris_only) hop = single_ris_hop(*pos, clock);
      if (!hop && config_.variant != Variant::single_ris_only) hop = double_ris_hop(*pos, clock);
      if (!hop) {
        if (over_budget) return fail(FailureReason::delay_exceeded);
        return fail(config_.variant == Variant::single_ris_only ? FailureReason::dead_end_after_single_ris
                                                                : FailureReason::dead_end_after_double_ris);
      }
      if (!fits(here + hop->slots)) return fail(FailureReason::delay_exceeded);
    }

    if (!(hop->remaining_distance < rem_here)) throw std::logic_error("hop without progress");
    hop->start_slot = clock;
    hop->budget = limit;
    clock += hop->slots;
    here += hop->slots;

    HopWait wait;
    wait.busy = waited;
    wait.d2d = hop->kind == HopKind::direct;
    (wait.d2d ? wait.t_d2d : wait.t_ris) = static_cast<double>(here) * slot;
    budget.waits.push_back(wait);

    pos = &topo_.node(*hop->to);
    ledger.hops.push_back(std::move(*hop));

    if (pos->kind == NodeKind::destination) {
      ledger.total_slots = clock;
      if (static_cast<double>(clock) * slot > config_.delay_bound * (1.0 + kBudgetSlack)) {
        ledger.failure = FailureReason::delay_exceeded;
        return ledger;
      }
      ledger.success = true;
      return ledger;
    }

    const int psi_i = std::min(hops_consumed(src.position, pos->position, r), psi - 1);
    limit = next_budget_ris_iu(budget, static_cast<int>(position) + 1, psi_i);
    budget.limits.push_back(limit);
    ledger.budgets.push_back(limit);
  }
}

}  // namespace drams
