#include "drams/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace drams {

void TrafficProfile::validate() const {
  const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(lambda_off) || !positive(mu_on) || !positive(slot)) {
    throw std::invalid_argument("traffic profile needs positive lambda_off, mu_on and slot");
  }
}

bool TrafficProfile::slot_is_small() const noexcept { return slot <= 0.1 * std::min(lambda_off, mu_on); }

TransitionMatrix transition_matrix(const TrafficProfile& profile) {
  profile.validate();
  TransitionMatrix m;
  m.p00 = std::exp(-profile.slot / profile.lambda_off);
  m.p01 = -std::expm1(-profile.slot / profile.lambda_off);
  m.p11 = std::exp(-profile.slot / profile.mu_on);
  m.p10 = -std::expm1(-profile.slot / profile.mu_on);
  return m;
}

ActivityState step(const TrafficProfile& profile, ActivityState state, double uniform) {
  const TransitionMatrix m = transition_matrix(profile);
  if (state == ActivityState::idle) return uniform < m.p01 ? ActivityState::busy : ActivityState::idle;
  return uniform < m.p10 ? ActivityState::idle : ActivityState::busy;
}

namespace {

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
}

}  // namespace

double duration_of_idleness(const TrafficProfile& profile, double delta) {
  profile.validate();
  check_delta(delta);
  return profile.lambda_off / profile.slot * -std::log1p(-delta);
}

double duration_of_busyness(const TrafficProfile& profile, double delta) {
  profile.validate();
  check_delta(delta);
  return profile.mu_on / profile.slot * -std::log1p(-delta);
}

double idle_wait_estimate(const TrafficProfile& profile, double p_th) {
  profile.validate();
  if (!(p_th > 0.0 && p_th < 1.0)) throw std::invalid_argument("p_th must lie in (0, 1)");
  const double p10 = -std::expm1(-profile.slot / profile.mu_on);
  const double ratio = std::max(p10 / p_th, 1.0);
  return profile.mu_on / profile.slot * std::log(ratio) + 1.0;
}

int deferral_window(std::span<const TrafficProfile> busy_profiles, double p_th) {
  if (busy_profiles.empty()) throw std::invalid_argument("no busy IU");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : busy_profiles) best = std::min(best, idle_wait_estimate(p, p_th));
  return static_cast<int>(std::ceil(best));
}

double stationary_busy_probability(const TrafficProfile& profile) {
  const TransitionMatrix m = transition_matrix(profile);
  return m.p01 / (m.p01 + m.p10);
}

ActivityTimeline::ActivityTimeline(std::vector<TrafficProfile> profiles, std::uint64_t seed)
    : profiles_(std::move(profiles)), seed_(seed) {
  matrices_.reserve(profiles_.size());
  cursors_.reserve(profiles_.size());
  for (std::size_t k = 0; k < profiles_.size(); ++k) {
    matrices_.push_back(transition_matrix(profiles_[k]));
    const double u = keyed_uniform(derive_key(seed_, {tag(StreamTag::activity), k, ~0ULL}));
    const double busy = matrices_.back().p01 / (matrices_.back().p01 + matrices_.back().p10);
    cursors_.push_back({0, u < busy ? ActivityState::busy : ActivityState::idle});
  }
}

ActivityState ActivityTimeline::state_at(std::size_t iu, std::int64_t slot) {
  Cursor& c = cursors_.at(iu);
  if (slot < c.slot) throw std::invalid_argument("activity timeline only moves forward");
  const TransitionMatrix& m = matrices_[iu];
  while (c.slot < slot) {
    const double u = keyed_uniform(derive_key(seed_, {tag(StreamTag::activity), iu, static_cast<std::uint64_t>(c.slot)}));
    if (c.state == ActivityState::idle) {
      c.state = u < m.p01 ? ActivityState::busy : ActivityState::idle;
    } else {
      c.state = u < m.p10 ? ActivityState::idle : ActivityState::busy;
    }
    ++c.slot;
  }
  return c.state;
}

}  // namespace drams
