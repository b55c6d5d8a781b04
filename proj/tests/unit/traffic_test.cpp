#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "drams/traffic.hpp"

namespace drams {
namespace {

TrafficProfile profile(double lambda_ms, double mu_ms) { return {lambda_ms * 1e-3, mu_ms * 1e-3, 100e-6}; }

// Fraction of exponential(mean) draws that end within one slot.
double mc_end_within_slot(double mean, double slot, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> e(1.0 / mean);
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += e(rng) <= slot ? 1 : 0;
  return static_cast<double>(hits) / n;
}

TEST(TransitionMatrix, MatchesExponentialOracle) {
  const TransitionMatrix m = transition_matrix(profile(4.0, 4.0));
  const double oracle = mc_end_within_slot(4e-3, 100e-6, 1'000'000, 1);
  const double tol = 4.0 * std::sqrt(oracle * (1 - oracle) / 1e6);
  EXPECT_NEAR(m.p01, oracle, tol);
  EXPECT_NEAR(m.p10, mc_end_within_slot(4e-3, 100e-6, 1'000'000, 2), tol);
  EXPECT_NEAR(m.p01, 0.024690087971667, 1e-12);
}

TEST(TransitionMatrix, LongIdleLimit) {
  const TransitionMatrix m = transition_matrix({1e12, 4e-3, 100e-6});
  EXPECT_NEAR(m.p01, 0.0, 1e-12);
  EXPECT_NEAR(m.p00, 1.0, 1e-12);
}

TEST(TransitionMatrix, RowsAreStochastic) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-6.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const TransitionMatrix m = transition_matrix({std::pow(10.0, u(rng)), std::pow(10.0, u(rng)), std::pow(10.0, u(rng))});
    EXPECT_NEAR(m.p00 + m.p01, 1.0, 1e-12);
    EXPECT_NEAR(m.p10 + m.p11, 1.0, 1e-12);
    for (const double p : {m.p00, m.p01, m.p10, m.p11}) {
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
    }
  }
}

TEST(TrafficProfile, ValidationAndSmallSlotWarning) {
  EXPECT_THROW((TrafficProfile{0.0, 1.0, 1.0}.validate()), std::invalid_argument);
  EXPECT_THROW((TrafficProfile{1.0, -1.0, 1.0}.validate()), std::invalid_argument);
  EXPECT_TRUE(profile(4.0, 4.0).slot_is_small());
  EXPECT_FALSE((TrafficProfile{1e-3, 1e-3, 5e-4}.slot_is_small()));
}

TEST(Step, ForcedTransitions) {
  const TrafficProfile never_busy{1e300, 4e-3, 100e-6};
  for (double u = 0.005; u < 1.0; u += 0.01) EXPECT_EQ(step(never_busy, ActivityState::idle, u), ActivityState::idle);
  const TrafficProfile always_release{16e-3, 1e-300, 100e-6};
  for (double u = 0.0; u < 1.0; u += 0.01) EXPECT_EQ(step(always_release, ActivityState::busy, u), ActivityState::idle);
}

TEST(Step, StationaryBusyFraction) {
  const TrafficProfile p = profile(16.0, 4.0);
  std::mt19937_64 rng(9);
  ActivityState s = ActivityState::idle;
  const int n = 1'000'000;
  int busy = 0;
  for (int i = 0; i < n; ++i) {
    s = step(p, s, rng);
    busy += s == ActivityState::busy ? 1 : 0;
  }
  const double pi = stationary_busy_probability(p);
  EXPECT_NEAR(pi, 0.2, 0.002);  // p01 / (p01 + p10) vs mu / (mu + lambda)
  // Correlated chain: inflate the binomial sigma by the integrated autocorrelation.
  const TransitionMatrix m = transition_matrix(p);
  const double rho = 1.0 - m.p01 - m.p10;
  const double sigma = std::sqrt(pi * (1 - pi) / n * (1 + rho) / (1 - rho));
  EXPECT_NEAR(static_cast<double>(busy) / n, pi, 3.0 * sigma);
}

// Largest n with p^n >= 1 - delta, by direct iteration.
int largest_surviving_n(double p, double delta) {
  int n = 0;
  double s = 1.0;
  while (s * p >= 1.0 - delta) {
    s *= p;
    ++n;
  }
  return n;
}

TEST(DurationEstimators, Examples) {
  const TrafficProfile p = profile(4.0, 4.0);
  EXPECT_NEAR(duration_of_idleness(p, 0.1), 4.214420626313048, 1e-12);
  EXPECT_NEAR(duration_of_busyness(p, 0.1), 4.214420626313048, 1e-12);
  EXPECT_EQ(largest_surviving_n(transition_matrix(p).p00, 0.1), 4);
  EXPECT_EQ(largest_surviving_n(transition_matrix(p).p11, 0.1), 4);
  EXPECT_LT(duration_of_idleness(p, 1e-9), 1e-6);
  EXPECT_LT(duration_of_busyness(p, 1e-9), 1e-6);
  EXPECT_NEAR(duration_of_idleness(profile(8.0, 4.0), 0.2), 2.0 * duration_of_idleness(profile(4.0, 4.0), 0.2), 1e-12);
  EXPECT_THROW(duration_of_idleness(p, 0.0), std::invalid_argument);
  EXPECT_THROW(duration_of_busyness(p, 1.0), std::invalid_argument);
}

TEST(DurationEstimators, WithinOneSlotOfIntegerOracle) {
  for (double xi = 0.1; xi < 0.85; xi += 0.1) {
    for (const double delta : {0.1, 0.2, 0.3}) {
      const TrafficProfile busy = profile(4.0, 4.0 * xi / (1 - xi));
      const TrafficProfile idle = profile(4.0 * (1 - xi) / xi, 4.0);
      EXPECT_NEAR(duration_of_busyness(busy, delta), largest_surviving_n(transition_matrix(busy).p11, delta), 1.0);
      EXPECT_NEAR(duration_of_idleness(idle, delta), largest_surviving_n(transition_matrix(idle).p00, delta), 1.0);
    }
  }
}

TEST(DurationEstimators, ComplementInDutyCycle) {
  double prev_b = 0.0;
  double prev_i = std::numeric_limits<double>::infinity();
  for (double xi = 0.05; xi < 0.99; xi += 0.05) {
    const double b = duration_of_busyness(profile(4.0, 4.0 * xi / (1 - xi)), 0.1);
    const double i = duration_of_idleness(profile(4.0 * (1 - xi) / xi, 4.0), 0.1);
    EXPECT_GT(b, prev_b);
    EXPECT_LT(i, prev_i);
    prev_b = b;
    prev_i = i;
  }
}

TEST(IdleWaitEstimate, Examples) {
  const TrafficProfile p = profile(16.0, 4.0);
  EXPECT_DOUBLE_EQ(idle_wait_estimate(p, 0.5), 1.0);
  const double eta = idle_wait_estimate(p, 0.01);
  EXPECT_NEAR(eta, 37.15267, 1e-4);
  // Oracle: first n where the decayed release probability reaches p_th.
  const double p10 = transition_matrix(p).p10;
  double n = 1.0;
  while (std::exp(-(n - 1.0) * p.slot / p.mu_on) * p10 > 0.01) n += 1e-4;
  EXPECT_NEAR(eta, n, 2e-4);
  EXPECT_THROW(idle_wait_estimate(p, 0.0), std::invalid_argument);
}

TEST(IdleWaitEstimate, AtLeastOneSlotAndFlatOnceReleaseIsRare) {
  for (double mu = 0.5; mu <= 20.0; mu += 0.25) {
    const TrafficProfile p = profile(16.0, mu);
    const double eta = idle_wait_estimate(p, 0.01);
    EXPECT_GE(eta, 1.0);
    if (transition_matrix(p).p10 <= 0.01) EXPECT_EQ(eta, 1.0);
  }
}

TEST(DeferralWindow, MinimumRoundedUp) {
  const TrafficProfile a = profile(16.0, 8.0);
  const TrafficProfile b = profile(16.0, 4.0);
  const std::vector<TrafficProfile> one{b};
  EXPECT_EQ(deferral_window(one, 0.01), static_cast<int>(std::ceil(idle_wait_estimate(b, 0.01))));
  const std::vector<TrafficProfile> two{b, a};
  EXPECT_LT(idle_wait_estimate(a, 0.01), idle_wait_estimate(b, 0.01));
  EXPECT_EQ(deferral_window(two, 0.01), static_cast<int>(std::ceil(idle_wait_estimate(a, 0.01))));
  const std::vector<TrafficProfile> same{a, a, a};
  EXPECT_EQ(deferral_window(same, 0.01), static_cast<int>(std::ceil(idle_wait_estimate(a, 0.01))));
  EXPECT_THROW(deferral_window({}, 0.01), std::invalid_argument);
}

TEST(ActivityTimeline, QueryOrderIndependent) {
  std::vector<TrafficProfile> profiles(20, profile(4.0, 4.0));
  ActivityTimeline forward(profiles, 77);
  ActivityTimeline sparse(profiles, 77);
  std::vector<ActivityState> seen;
  for (std::int64_t t = 0; t < 300; ++t) {
    for (std::size_t k = 0; k < 20; ++k) seen.push_back(forward.state_at(k, t));
  }
  for (std::size_t k = 20; k-- > 0;) {
    EXPECT_EQ(sparse.state_at(k, 299), seen[299 * 20 + k]);
    EXPECT_EQ(sparse.state_at(k, 299), seen[299 * 20 + k]);
  }
  EXPECT_THROW(sparse.state_at(0, 10), std::invalid_argument);
}

TEST(ActivityTimeline, StartsFromStationaryDistribution) {
  std::vector<TrafficProfile> profiles(2000, profile(16.0, 4.0));
  ActivityTimeline timeline(profiles, 5);
  int busy = 0;
  for (std::size_t k = 0; k < profiles.size(); ++k) busy += timeline.state_at(k, 0) == ActivityState::busy ? 1 : 0;
  const double pi = stationary_busy_probability(profiles[0]);
  EXPECT_NEAR(busy / 2000.0, pi, 4.0 * std::sqrt(pi * (1 - pi) / 2000.0));
}

}  // namespace
}  // namespace drams
