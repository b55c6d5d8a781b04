#include "drams/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "drams/csv.hpp"
#include "drams/ledger_io.hpp"
#include "drams/traffic.hpp"

namespace drams {

namespace {

constexpr double kBand = 1.96;

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

Position uniform_point(const Arena& arena, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double x = u(rng) * arena.width;
  const double y = u(rng) * arena.height;
  return {x, y};
}

void write_file(const std::filesystem::path& path, const std::string& content, ExperimentReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
  report.files.push_back(path);
}

template <class Writer>
void write_with(const std::filesystem::path& path, ExperimentReport& report, Writer&& writer) {
  std::ostringstream buf;
  writer(buf);
  write_file(path, buf.str(), report);
}

void tally(const std::vector<SweepRow>& rows, ExperimentReport& report) {
  for (const SweepRow& r : rows) {
    report.routes += r.summary.replications;
    report.successes += r.summary.successes;
  }
}

}  // namespace

std::uint64_t replication_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return derive_key(seed, {tag(StreamTag::replication), index});
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const auto workers = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex error_mutex;
  std::size_t error_index = n;
  std::exception_ptr error;

  auto work = [&] {
    for (;;) {
      if (stop.load(std::memory_order_relaxed)) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
        stop.store(true, std::memory_order_relaxed);
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

MobilityState mobility_step(const MobilityState& state, double dt, const Arena& arena, double v_max, Rng& rng) {
  if (!(dt > 0.0)) throw std::invalid_argument("mobility step needs dt > 0");
  if (!(v_max >= 0.0)) throw std::invalid_argument("v_max must be nonnegative");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MobilityState s = state;
  s.velocity = std::clamp(s.velocity, 0.0, v_max);
  double remaining = dt;
  for (int legs = 0; remaining > 0.0 && legs < 1'000'000; ++legs) {
    if (s.velocity <= 0.0) break;
    const double gap = distance(s.position, s.waypoint);
    const double reach = s.velocity * remaining;
    if (gap > reach) {
      const double f = reach / gap;
      s.position = {s.position.x + f * (s.waypoint.x - s.position.x), s.position.y + f * (s.waypoint.y - s.position.y)};
      break;
    }
    remaining -= gap / s.velocity;
    s.position = s.waypoint;
    s.waypoint = uniform_point(arena, rng);
    s.velocity = v_max * u(rng);
  }
  return s;
}

MobilityField::MobilityField(const Topology& topo, std::uint64_t seed, double v_max)
    : topo_(topo), seed_(seed), v_max_(v_max) {
  if (!(v_max >= 0.0)) throw std::invalid_argument("v_max must be nonnegative");
}

Position MobilityField::position_at(const Node& node, double t) const {
  if (node.kind != NodeKind::iu || v_max_ == 0.0 || !(t > 0.0)) return node.position;
  Rng rng = keyed_rng(derive_key(seed_, {tag(StreamTag::mobility), node.ordinal}));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double fraction = u(rng);
  MobilityState s{node.position, uniform_point(topo_.arena(), rng), fraction * v_max_};
  return mobility_step(s, t, topo_.arena(), v_max_, rng).position;
}

bool has_mobility_outage(const RouteLedger& ledger, const Topology& topo, const MobilityField& mobility,
                         double slot) {
  const double r = topo.coverage_radius();
  for (const Hop& hop : ledger.hops) {
    if (!hop.transmits()) continue;
    const double t_end = static_cast<double>(hop.start_slot + hop.slots) * slot;
    const Position from = mobility.position_at(topo.node(hop.from), t_end);
    const Position to = mobility.position_at(topo.node(*hop.to), t_end);
    if (hop.via.empty()) {
      if (distance(from, to) > r) return true;
    } else {
      if (distance(from, topo.node(hop.via.front()).position) > r) return true;
      if (distance(topo.node(hop.via.back()).position, to) > r) return true;
    }
  }
  return false;
}

ReplicationOutcome run_replication(const SimConfig& config, std::uint64_t rep_seed, double v_max,
                                   RouteLedger* ledger_out, std::optional<Topology>* topology_out) {
  const Topology topo = generate_topology(config.topology_spec(), rep_seed);
  ActivityTimeline activity(config.traffic_profiles(), rep_seed);
  const ChannelField channel(rep_seed, config.rician_k_db);
  const RouterConfig rc = config.router_config();
  Router router(topo, activity, channel, rc);
  RouteLedger ledger = router.route();

  if (ledger.success && v_max > 0.0) {
    const MobilityField mobility(topo, rep_seed, v_max);
    if (has_mobility_outage(ledger, topo, mobility, rc.slot)) {
      ledger.success = false;
      ledger.failure = FailureReason::mobility_outage;
    }
  }

  ReplicationOutcome out;
  out.success = ledger.success;
  out.failure = ledger.failure;
  out.total_slots = ledger.total_slots;
  out.metrics = route_metrics(ledger, rc.demand, rc.link.tx_power, rc.slot, config.target_ber, config.throughput_units);
  out.within_delay = !ledger.success || static_cast<double>(ledger.total_slots) * rc.slot <= rc.delay_bound * (1 + 1e-12);
  double rem = distance(topo.source().position, topo.destination().position);
  for (const Hop& hop : ledger.hops) {
    out.max_reflections = std::max(out.max_reflections, static_cast<int>(hop.via.size()));
    if (!hop.transmits()) continue;
    if (!(hop.remaining_distance < rem)) out.monotone_progress = false;
    rem = hop.remaining_distance;
  }
  if (ledger_out != nullptr) *ledger_out = std::move(ledger);
  if (topology_out != nullptr) topology_out->emplace(topo);
  return out;
}

void RunningStat::add(double x) noexcept {
  ++n;
  const double d = x - mean;
  mean += d / static_cast<double>(n);
  m2 += d * (x - mean);
}

double RunningStat::se() const noexcept {
  return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
}

void PointSummary::add(const ReplicationOutcome& o) {
  ++replications;
  if (o.failure == FailureReason::mobility_outage) ++outages;
  throughput.add(o.metrics.throughput);
  throughput_normalized.add(o.metrics.throughput_normalized);
  ris_count.add(o.metrics.ris_count);
  if (o.success) {
    ++successes;
    energy_efficiency.add(o.metrics.energy_efficiency);
    ris_count_success.add(o.metrics.ris_count);
    hops.add(o.metrics.hop_count);
  }
  within_delay = within_delay && o.within_delay;
  monotone_progress = monotone_progress && o.monotone_progress;
  max_reflections = std::max(max_reflections, o.max_reflections);
}

double PointSummary::success_rate() const noexcept {
  return replications > 0 ? static_cast<double>(successes) / replications : 0.0;
}

std::vector<SweepRow> run_grid(const std::vector<GridPoint>& points, int threads) {
  std::vector<std::size_t> offsets;
  std::size_t total = 0;
  for (const GridPoint& p : points) {
    p.config.validate();
    offsets.push_back(total);
    total += static_cast<std::size_t>(p.config.replications);
  }
  std::vector<ReplicationOutcome> outcomes(total);
  parallel_for(total, threads, [&](std::size_t task) {
    const auto it = std::upper_bound(offsets.begin(), offsets.end(), task);
    const std::size_t point = static_cast<std::size_t>(it - offsets.begin()) - 1;
    const GridPoint& p = points[point];
    const std::uint64_t rep = task - offsets[point];
    outcomes[task] = run_replication(p.config, replication_seed(p.config.seed, rep), p.v_max);
  });

  std::vector<SweepRow> rows;
  rows.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const GridPoint& p = points[i];
    SweepRow row{p.scenario, p.variant, p.config.coverage_m, p.config.iu_count, p.v_max, {}};
    for (int k = 0; k < p.config.replications; ++k) row.summary.add(outcomes[offsets[i] + static_cast<std::size_t>(k)]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SweepRow> run_coverage_sweep(const SimConfig& config) {
  std::vector<GridPoint> points;
  for (const double density : config.coverage_densities) {
    for (const double r : config.coverage_grid_m) {
      SimConfig c = config;
      c.iu_count = static_cast<int>(density);
      c.coverage_m = r;
      points.push_back({"coverage", std::string(to_string(c.variant)), c, 0.0});
    }
  }
  return run_grid(points, config.threads);
}

std::vector<SweepRow> run_density_sweep(const SimConfig& config) {
  std::vector<GridPoint> points;
  for (const double r : config.density_coverages_m) {
    for (const double density : config.density_grid) {
      SimConfig c = config;
      c.iu_count = static_cast<int>(density);
      c.coverage_m = r;
      points.push_back({"density", std::string(to_string(c.variant)), c, 0.0});
    }
  }
  return run_grid(points, config.threads);
}

namespace {

struct NamedVariant {
  std::string name;
  std::function<void(SimConfig&)> apply;
};

std::vector<NamedVariant> comparison_variants() {
  return {
      {"drams", [](SimConfig& c) { c.variant = Variant::drams; }},
      {"drams_shannon",
       [](SimConfig& c) {
         c.variant = Variant::drams;
         c.blocklength = std::numeric_limits<double>::infinity();
       }},
      {"no_adaptive_modulation", [](SimConfig& c) { c.variant = Variant::no_adaptive_modulation; }},
      {"single_ris_only", [](SimConfig& c) { c.variant = Variant::single_ris_only; }},
      {"double_ris_only", [](SimConfig& c) { c.variant = Variant::double_ris_only; }},
  };
}

}  // namespace

std::vector<SweepRow> run_comparison(const SimConfig& config) {
  std::vector<GridPoint> points;
  for (const NamedVariant& v : comparison_variants()) {
    for (const double r : config.comparison_coverage_grid_m) {
      SimConfig c = config;
      c.coverage_m = r;
      v.apply(c);
      points.push_back({"comparison", v.name, c, 0.0});
    }
  }
  return run_grid(points, config.threads);
}

std::vector<SweepRow> run_mobility(const SimConfig& config) {
  std::vector<GridPoint> points;
  const auto variants = comparison_variants();
  for (std::size_t k = 0; k < 2; ++k) {
    for (const double v : config.vmax_grid) {
      SimConfig c = config;
      c.coverage_m = config.mobility_coverage_m;
      variants[k].apply(c);
      points.push_back({"mobility", variants[k].name, c, v});
    }
  }
  return run_grid(points, config.threads);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, std::uint64_t seed) {
  write_csv_header(out, {"scenario", "seed", "variant", "coverage_m", "density", "v_max", "replications",
                         "success_rate", "D_T", "D_T_se", "D_T_normalized", "D_T_normalized_se", "E_eff", "E_eff_se",
                         "ris_count", "ris_count_se", "ris_count_all", "ris_count_all_se", "hops", "hops_se",
                         "outages"});
  for (const SweepRow& r : rows) {
    const PointSummary& s = r.summary;
    CsvRow row;
    row.add(r.scenario).add(std::to_string(seed)).add(r.variant).add(r.coverage_m).add(r.density).add(r.v_max);
    row.add(s.replications).add(s.success_rate());
    row.add(s.throughput.mean).add(s.throughput.se());
    row.add(s.throughput_normalized.mean).add(s.throughput_normalized.se());
    row.add(s.energy_efficiency.mean).add(s.energy_efficiency.se());
    row.add(s.ris_count_success.mean).add(s.ris_count_success.se());
    row.add(s.ris_count.mean).add(s.ris_count.se());
    row.add(s.hops.mean).add(s.hops.se()).add(s.outages);
    out << row;
  }
}

bool TrafficValidationRow::in_band() const noexcept { return std::abs(analytic - mc_mean) <= kBand * mc_sd; }

double survival_crossing(const std::vector<std::int64_t>& survivors_at, std::int64_t chains, double delta) {
  if (chains <= 0 || survivors_at.empty()) throw std::invalid_argument("no chains");
  const double level = 1.0 - delta;
  const auto s = [&](std::size_t n) { return static_cast<double>(survivors_at[n]) / static_cast<double>(chains); };
  std::size_t n = 0;
  while (n + 1 < survivors_at.size() && s(n + 1) >= level) ++n;
  if (n + 1 >= survivors_at.size()) throw std::runtime_error("survival curve truncated before its crossing");
  const double lo = s(n);
  const double hi = s(n + 1);
  if (hi <= 0.0) return static_cast<double>(n);
  return static_cast<double>(n) + std::log(level / lo) / std::log(hi / lo);
}

TrafficValidation run_traffic_validation(const SimConfig& config) {
  config.validate();
  const double slot = config.slot_s();
  const double fixed = config.traffic_fixed_ms * 1e-3;
  const double max_delta = *std::max_element(config.delta_grid.begin(), config.delta_grid.end());
  const auto batches = static_cast<std::size_t>(config.traffic_batches);
  const std::size_t xs = config.xi_grid.size();

  struct Task {
    bool busy = false;  // true: nu_B, start busy
    std::size_t xi = 0;
    std::size_t batch = 0;
  };
  std::vector<Task> tasks;
  for (const bool busy : {true, false}) {
    for (std::size_t x = 0; x < xs; ++x) {
      for (std::size_t b = 0; b < batches; ++b) tasks.push_back({busy, x, b});
    }
  }

  auto profile_for = [&](bool busy, double xi) {
    TrafficProfile p;
    p.slot = slot;
    if (busy) {
      p.lambda_off = fixed;
      p.mu_on = xi * fixed / (1.0 - xi);
    } else {
      p.mu_on = fixed;
      p.lambda_off = fixed * (1.0 - xi) / xi;
    }
    return p;
  };
  auto analytic = [&](bool busy, const TrafficProfile& p, double delta) {
    return busy ? duration_of_busyness(p, delta) : duration_of_idleness(p, delta);
  };

  std::vector<std::vector<std::int64_t>> survivors(tasks.size());
  std::vector<std::int64_t> chains_in(tasks.size());
  parallel_for(tasks.size(), config.threads, [&](std::size_t i) {
    const Task& t = tasks[i];
    const TrafficProfile p = profile_for(t.busy, config.xi_grid[t.xi]);
    const auto horizon = static_cast<std::size_t>(std::ceil(3.0 * analytic(t.busy, p, max_delta))) + 20;
    const auto total = static_cast<std::size_t>(config.traffic_chains);
    const std::size_t chains = total / batches + (t.batch < total % batches ? 1 : 0);
    Rng rng = keyed_rng(derive_key(config.seed, {tag(StreamTag::traffic_mc), t.busy ? 1u : 0u, t.xi, t.batch}));
    const ActivityState start = t.busy ? ActivityState::busy : ActivityState::idle;

    std::vector<std::int64_t> lengths(horizon + 2, 0);
    for (std::size_t c = 0; c < chains; ++c) {
      std::size_t stay = 0;
      while (stay <= horizon && step(p, start, rng) == start) ++stay;
      ++lengths[stay];
    }
    std::vector<std::int64_t> surv(horizon + 2, 0);
    std::int64_t acc = 0;
    for (std::size_t n = horizon + 2; n-- > 0;) {
      acc += lengths[n];
      surv[n] = acc;
    }
    survivors[i] = std::move(surv);
    chains_in[i] = static_cast<std::int64_t>(chains);
  });

  TrafficValidation out;
  std::size_t base = 0;
  for (const bool busy : {true, false}) {
    auto& rows = busy ? out.nu_b : out.nu_i;
    for (std::size_t x = 0; x < xs; ++x) {
      const TrafficProfile p = profile_for(busy, config.xi_grid[x]);
      for (const double delta : config.delta_grid) {
        RunningStat stat;
        for (std::size_t b = 0; b < batches; ++b) {
          const std::size_t i = base + x * batches + b;
          stat.add(survival_crossing(survivors[i], chains_in[i], delta));
        }
        rows.push_back({config.xi_grid[x], delta, analytic(busy, p, delta), stat.mean, stat.se(),
                        std::sqrt(stat.variance())});
      }
    }
    base += xs * batches;
  }
  return out;
}

void write_traffic_csv(std::ostream& out, const std::vector<TrafficValidationRow>& rows) {
  write_csv_header(out, {"xi", "delta", "analytic", "mc_mean", "mc_se"});
  for (const auto& r : rows) out << CsvRow().add(r.xi).add(r.delta).add(r.analytic).add(r.mc_mean).add(r.mc_se);
}

ExperimentReport run(const ExperimentPlan& plan, const std::filesystem::path& out_dir) {
  const SimConfig& config = plan.config;
  config.validate();
  std::filesystem::create_directories(out_dir);
  ExperimentReport report;
  write_file(out_dir / "manifest.cfg", serialize_config(config), report);

  auto sweep = [&](const std::vector<SweepRow>& rows, const char* name) {
    write_with(out_dir / name, report, [&](std::ostream& o) { write_sweep_csv(o, rows, config.seed); });
    tally(rows, report);
  };

  switch (plan.kind) {
    case ExperimentKind::trajectory: {
      RouteLedger ledger;
      std::optional<Topology> topo;
      const ReplicationOutcome o = run_replication(config, replication_seed(config.seed, 0), 0.0, &ledger, &topo);
      write_with(out_dir / "route_ledger.csv", report, [&](std::ostream& s) { write_ledger_csv(s, ledger, *topo); });
      report.trace = format_trace(ledger, *topo);
      report.routes = 1;
      report.successes = o.success ? 1 : 0;
      break;
    }
    case ExperimentKind::coverage_sweep: sweep(run_coverage_sweep(config), "coverage_sweep.csv"); break;
    case ExperimentKind::density_sweep: sweep(run_density_sweep(config), "density_sweep.csv"); break;
    case ExperimentKind::comparison: sweep(run_comparison(config), "comparison.csv"); break;
    case ExperimentKind::mobility: sweep(run_mobility(config), "mobility.csv"); break;
    case ExperimentKind::traffic_validation: {
      const TrafficValidation v = run_traffic_validation(config);
      write_with(out_dir / "nu_b.csv", report, [&](std::ostream& s) { write_traffic_csv(s, v.nu_b); });
      write_with(out_dir / "nu_i.csv", report, [&](std::ostream& s) { write_traffic_csv(s, v.nu_i); });
      break;
    }
  }
  return report;
}

}  // namespace drams
