#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "drams/rng.hpp"

namespace drams {

enum class ActivityState : std::uint8_t { idle = 0, busy = 1 };

/// ON/OFF traffic of one IU: exponential OFF (idle) periods with mean
/// `lambda_off`, exponential ON (busy) periods with mean `mu_on`, observed on
/// a slot grid of width `slot`. All in seconds.
struct TrafficProfile {
  double lambda_off = 16e-3;
  double mu_on = 4e-3;
  double slot = 100e-6;

  /// Throws std::invalid_argument unless all three are positive and finite.
  void validate() const;
  /// The DTMC assumes at most one state change per slot; false when the slot
  /// is not small (here: more than a tenth of either mean).
  bool slot_is_small() const noexcept;
  /// Long-run busy fraction mu / (mu + lambda).
  double duty_cycle() const noexcept { return mu_on / (mu_on + lambda_off); }
};

struct TransitionMatrix {
  double p00 = 1.0;
  double p01 = 0.0;
  double p10 = 0.0;
  double p11 = 1.0;
};

TransitionMatrix transition_matrix(const TrafficProfile& profile);

/// One slot of the chain, driven by a uniform draw in [0, 1).
ActivityState step(const TrafficProfile& profile, ActivityState state, double uniform);

template <class Urbg>
ActivityState step(const TrafficProfile& profile, ActivityState state, Urbg& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return step(profile, state, u(rng));
}

/// Expected remaining idle time in slots, (lambda / slot) ln(1 / (1 - delta)).
double duration_of_idleness(const TrafficProfile& profile, double delta);

/// Expected remaining busy time in slots, (mu / slot) ln(1 / (1 - delta)).
double duration_of_busyness(const TrafficProfile& profile, double delta);

/// Slots until a busy IU is expected to turn idle with per-slot success
/// probability at least `p_th`: (mu / slot) ln(max(p10 / p_th, 1)) + 1.
double idle_wait_estimate(const TrafficProfile& profile, double p_th);

/// Deferral window over the busy IUs: the smallest idle_wait_estimate,
/// rounded up to whole slots. Throws std::invalid_argument("no busy IU") on an
/// empty list.
int deferral_window(std::span<const TrafficProfile> busy_profiles, double p_th);

/// Stationary probability of the busy state, p01 / (p01 + p10).
double stationary_busy_probability(const TrafficProfile& profile);

/// Activity of every IU on the shared slot clock. States are generated
/// lazily but each slot transition consumes a uniform keyed on
/// (seed, IU, slot), so the state at a slot does not depend on query order.
class ActivityTimeline {
 public:
  ActivityTimeline(std::vector<TrafficProfile> profiles, std::uint64_t seed);

  std::size_t size() const noexcept { return profiles_.size(); }
  const TrafficProfile& profile(std::size_t iu) const { return profiles_.at(iu); }
  std::span<const TrafficProfile> profiles() const noexcept { return profiles_; }

  ActivityState state_at(std::size_t iu, std::int64_t slot);

 private:
  struct Cursor {
    std::int64_t slot = 0;
    ActivityState state = ActivityState::idle;
  };

  std::vector<TrafficProfile> profiles_;
  std::vector<TransitionMatrix> matrices_;
  std::vector<Cursor> cursors_;
  std::uint64_t seed_;
};

}  // namespace drams
