#include "drams/delaymodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace drams {

namespace {

void check_psi(int psi, int psi_i) {
  if (psi < 1) throw std::invalid_argument("psi must be at least 1");
  if (psi_i < 0) throw std::invalid_argument("psi_i must be nonnegative");
  if (psi_i >= psi) {
    throw std::domain_error("overshoot: psi_i = " + std::to_string(psi_i) + " is not below psi = " +
                            std::to_string(psi));
  }
}

template <class Effective>
double recurse(const DelayBudget& state, int i, int psi_i, Effective effective) {
  if (i < 1) throw std::invalid_argument("hop index must be at least 1");
  const auto n = static_cast<std::size_t>(i);
  if (state.limits.size() < n || state.waits.size() < n) {
    throw std::invalid_argument("delay budget holds fewer than i positions");
  }
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = effective(state.waits[k]);
  return next_budget(state.total, state.psi, state.limits[n - 1], w, psi_i);
}

}  // namespace

DelayBudget DelayBudget::start(double total, int psi) {
  if (!(total >= 0.0)) throw std::invalid_argument("delay bound must be nonnegative");
  if (psi < 1) throw std::invalid_argument("psi must be at least 1");
  return DelayBudget{total, psi, {total / psi}, {}};
}

double next_budget(double total, int psi, double prev_limit, std::span<const double> waits, int psi_i) {
  check_psi(psi, psi_i);
  if (waits.empty()) throw std::invalid_argument("need the previous position's wait");
  double earlier = 0.0;
  for (std::size_t k = 0; k + 1 < waits.size(); ++k) earlier += waits[k];
  return (total - earlier - prev_limit) / (psi - psi_i) + prev_limit - waits.back();
}

double next_budget_only_iu(const DelayBudget& state, int i, int psi_i) {
  return recurse(state, i, psi_i, [](const HopWait& w) { return w.busy ? w.t_d2d : 0.0; });
}

double next_budget_case2(const DelayBudget& state, int i, int psi_i) {
  return recurse(state, i, psi_i, [](const HopWait& w) { return w.t_d2d; });
}

double next_budget_ris_iu(const DelayBudget& state, int i, int psi_i) {
  return recurse(state, i, psi_i, [](const HopWait& w) { return w.d2d ? w.t_d2d : w.t_ris; });
}

double closed_form_case1(double total, int psi, std::span<const int> psi_list) {
  for (const int p : psi_list) check_psi(psi, p);
  const std::size_t i = psi_list.size();
  double sum = 0.0;
  for (std::size_t p = 0; p < i; ++p) {
    double prod = 1.0;
    for (std::size_t q = p + 1; q < i; ++q) prod *= 1.0 - 1.0 / (psi - psi_list[q]);
    sum += prod / (psi - psi_list[p]);
  }
  double tail = 1.0;
  for (const int p : psi_list) tail *= 1.0 - 1.0 / (psi - p);
  return total * (sum + tail / psi);
}

double first_budget_after_wait_exact(double total, int psi, int psi_1, double mu, double slot, double p_th) {
  const int list[] = {psi_1};
  const double p10 = -std::expm1(-slot / mu);
  return closed_form_case1(total, psi, list) - mu * std::log(std::max(p10 / p_th, 1.0)) - slot;
}

double first_budget_after_wait_linearized(double total, int psi, int psi_1, double mu, double slot, double p_th) {
  const int list[] = {psi_1};
  return closed_form_case1(total, psi, list) - mu * std::log(slot / (mu * p_th)) - slot;
}

}  // namespace drams
