#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "drams/config.hpp"
#include "drams/metrics.hpp"
#include "drams/router.hpp"
#include "drams/topology.hpp"

namespace drams {

enum class ExperimentKind : std::uint8_t {
  trajectory,
  coverage_sweep,
  density_sweep,
  traffic_validation,
  comparison,
  mobility,
};

struct ExperimentPlan {
  ExperimentKind kind = ExperimentKind::trajectory;
  SimConfig config;
};

/// Seed of replication `index`. Grid points share replication seeds, so
/// every grid point and variant sees the same topologies, traffic and fading
/// draws (common random numbers).
std::uint64_t replication_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Runs fn(0) .. fn(n-1) on up to `threads` workers (0: hardware
/// concurrency). Results must be written to per-index slots; the first
/// exception by index is rethrown after all workers stop.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

struct MobilityState {
  Position position;
  Position waypoint;
  double velocity = 0.0;  // m/s
};

/// Random waypoint with zero pause: move toward the waypoint; on arrival draw
/// a new uniform waypoint and a uniform speed in [0, v_max] and continue with
/// the remaining time.
MobilityState mobility_step(const MobilityState& state, double dt, const Arena& arena, double v_max, Rng& rng);

/// Where each IU of `topo` actually is after `t` seconds. The initial
/// waypoint and the speed fraction u (speed = u v_max) come from a stream
/// keyed on (seed, IU), so runs with different v_max share them.
class MobilityField {
 public:
  MobilityField(const Topology& topo, std::uint64_t seed, double v_max);

  Position position_at(const Node& node, double t) const;

 private:
  const Topology& topo_;
  std::uint64_t seed_;
  double v_max_;
};

/// True when some transmitting hop of `ledger` has an IU endpoint that has
/// moved out of coverage of its counterpart by the end of the hop.
bool has_mobility_outage(const RouteLedger& ledger, const Topology& topo, const MobilityField& mobility,
                         double slot);

struct ReplicationOutcome {
  bool success = false;
  FailureReason failure = FailureReason::none;
  RouteMetrics metrics;
  std::int64_t total_slots = 0;
  bool within_delay = true;       // success implies total time <= T_d
  bool monotone_progress = true;  // every transmitting hop reduced remaining distance
  int max_reflections = 0;        // RISs on a single hop
};

/// One seeded route under `config`, with optional IU mobility.
ReplicationOutcome run_replication(const SimConfig& config, std::uint64_t rep_seed, double v_max = 0.0,
                                   RouteLedger* ledger_out = nullptr,
                                   std::optional<Topology>* topology_out = nullptr);

struct RunningStat {
  std::int64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept;
  double variance() const noexcept { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double se() const noexcept;
};

struct PointSummary {
  int replications = 0;
  int successes = 0;
  int outages = 0;
  RunningStat throughput;             // all replications, failures count as 0
  RunningStat throughput_normalized;  // same
  RunningStat energy_efficiency;      // successful routes
  RunningStat ris_count;              // all replications
  RunningStat ris_count_success;      // successful routes
  RunningStat hops;                   // successful routes
  bool within_delay = true;
  bool monotone_progress = true;
  int max_reflections = 0;

  void add(const ReplicationOutcome& o);
  double success_rate() const noexcept;
};

struct SweepRow {
  std::string scenario;
  std::string variant;
  double coverage_m = 0.0;
  int density = 0;
  double v_max = 0.0;
  PointSummary summary;
};

/// Grid point definition used by the sweep runners.
struct GridPoint {
  std::string scenario;
  std::string variant;
  SimConfig config;
  double v_max = 0.0;
};

/// Runs config.replications replications of every point, in parallel,
/// merging in grid order.
std::vector<SweepRow> run_grid(const std::vector<GridPoint>& points, int threads);

std::vector<SweepRow> run_coverage_sweep(const SimConfig& config);
std::vector<SweepRow> run_density_sweep(const SimConfig& config);

/// Variants: drams (finite blocklength), drams_shannon, no_adaptive_modulation,
/// single_ris_only, double_ris_only over the comparison coverage grid.
std::vector<SweepRow> run_comparison(const SimConfig& config);

/// drams and drams_shannon over the V_max grid at the mobility coverage.
std::vector<SweepRow> run_mobility(const SimConfig& config);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, std::uint64_t seed);

struct TrafficValidationRow {
  double xi = 0.0;
  double delta = 0.0;
  double analytic = 0.0;
  double mc_mean = 0.0;
  double mc_se = 0.0;
  double mc_sd = 0.0;  // spread of the per-batch estimates

  /// analytic within mc_mean +- 1.96 mc_sd.
  bool in_band() const noexcept;
};

struct TrafficValidation {
  std::vector<TrafficValidationRow> nu_b;  // lambda fixed, mu from the duty cycle
  std::vector<TrafficValidationRow> nu_i;  // mu fixed, lambda from the duty cycle
};

/// Empirical crossing of the survival curve: the real n at which the
/// fraction of sojourns lasting at least n slots falls to 1 - delta,
/// log-linearly interpolated between integer slots.
double survival_crossing(const std::vector<std::int64_t>& survivors_at, std::int64_t chains, double delta);

TrafficValidation run_traffic_validation(const SimConfig& config);

void write_traffic_csv(std::ostream& out, const std::vector<TrafficValidationRow>& rows);

struct ExperimentReport {
  std::vector<std::filesystem::path> files;
  std::int64_t routes = 0;
  std::int64_t successes = 0;
  std::string trace;  // trajectory runs only
};

/// Runs a plan and writes its CSV outputs plus manifest.cfg into `out_dir`.
ExperimentReport run(const ExperimentPlan& plan, const std::filesystem::path& out_dir);

}  // namespace drams
