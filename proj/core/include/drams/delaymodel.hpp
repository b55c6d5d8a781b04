#pragma once

#include <span>
#include <vector>

namespace drams {

/// Delay suffered at one relay position before it hands the data on.
/// `t_d2d` is the wait when the next hop is an IU, `t_ris` the time after
/// which the position gave up on IUs and used an RIS. `busy` marks a wait in
/// the IU-only setting; `d2d` selects which of the two delays applies in the
/// mixed setting.
struct HopWait {
  double t_d2d = 0.0;  // seconds
  double t_ris = 0.0;  // seconds
  bool busy = false;
  bool d2d = true;
};

/// Budget bookkeeping for one route. `limits[i]` is the budget granted to
/// position i (T_d_i); `waits[i]` what position i actually used.
struct DelayBudget {
  double total = 0.0;  // T_d, seconds
  int psi = 1;         // ceil(l / r)
  std::vector<double> limits;
  std::vector<HopWait> waits;

  /// Fresh budget with limits = {T_d / psi}.
  static DelayBudget start(double total, int psi);
};

/// General recursion with per-position effective waits w_0 .. w_{i-1}:
/// (T_d - sum_{k<=i-2} w_k - T_{d_{i-1}}) / (psi - psi_i) + T_{d_{i-1}} - w_{i-1}.
/// Throws std::domain_error("overshoot") when psi_i >= psi.
double next_budget(double total, int psi, double prev_limit, std::span<const double> waits, int psi_i);

/// Only-IU setting: w_k = busy_k * t_d2d_k.
double next_budget_only_iu(const DelayBudget& state, int i, int psi_i);

/// Every earlier position waited: w_k = t_d2d_k.
double next_budget_case2(const DelayBudget& state, int i, int psi_i);

/// Mixed setting: w_k = d2d_k ? t_d2d_k : t_ris_k.
double next_budget_ris_iu(const DelayBudget& state, int i, int psi_i);

/// Closed form when nobody waits:
/// T_d [ sum_p 1/(psi-psi_p) prod_{q>p} (1 - 1/(psi-psi_q)) + (1/psi) prod_n (1 - 1/(psi-psi_n)) ].
double closed_form_case1(double total, int psi, std::span<const int> psi_list);

/// First-relay budget after the source waited one idle-wait estimate of an IU
/// with mean busy time `mu`: closed-form case I value minus
/// mu ln(max(p10 / p_th, 1)) + slot.
double first_budget_after_wait_exact(double total, int psi, int psi_1, double mu, double slot, double p_th);

/// Same with p10 replaced by its first-order expansion slot / mu.
double first_budget_after_wait_linearized(double total, int psi, int psi_1, double mu, double slot, double p_th);

}  // namespace drams
