#include "drams/linkbudget.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace drams {

namespace {

std::string mode_name(int bits) {
  switch (bits) {
    case 1: return "BPSK";
    case 2: return "QPSK";
    default: return std::to_string(1 << bits) + "-QAM";
  }
}

}  // namespace

ModeTable::ModeTable(std::vector<TransmissionMode> modes) : modes_(std::move(modes)) {
  if (modes_.empty() || modes_.front().transmits()) throw std::invalid_argument("mode table must start with a rate-0 mode");
  if (!std::isinf(modes_.front().snr_lower_db) || !std::isinf(modes_.back().snr_upper_db)) {
    throw std::invalid_argument("mode table must cover the whole SNR axis");
  }
  for (std::size_t i = 1; i < modes_.size(); ++i) {
    if (modes_[i].snr_lower_db != modes_[i - 1].snr_upper_db) throw std::invalid_argument("mode intervals must abut");
    if (modes_[i].bits <= modes_[i - 1].bits) throw std::invalid_argument("mode rates must increase");
    if (!(modes_[i].snr_lower_db < modes_[i].snr_upper_db)) throw std::invalid_argument("empty mode interval");
  }
}

const TransmissionMode& ModeTable::by_constellation(int m) const {
  for (const auto& mode : modes_) {
    if (mode.constellation == m) return mode;
  }
  throw std::invalid_argument("no mode with constellation " + std::to_string(m));
}

ModeTable build_mode_table(double target_ber, ThresholdRule rule, const ModulationConstants& constants, int max_bits) {
  if (!(target_ber > 0.0 && target_ber < 1.0)) throw std::invalid_argument("target BER must lie in (0, 1)");
  if (max_bits < 1 || max_bits > 30) throw std::invalid_argument("max_bits must lie in [1, 30]");
  if (!(constants.c1 > target_ber) || !(constants.c2 > 0.0)) {
    throw std::invalid_argument("modulation constants need c1 > target BER and c2 > 0");
  }
  const double k = std::log(constants.c1 / target_ber) / constants.c2;
  constexpr double inf = std::numeric_limits<double>::infinity();

  std::vector<double> thresholds;
  for (int b = 1; b <= max_bits; ++b) {
    const double m = std::ldexp(1.0, b);
    const double factor = rule == ThresholdRule::per_bit ? static_cast<double>(b)
                                                         : std::pow(m, constants.c3) - constants.c4;
    if (!(factor > 0.0)) throw std::invalid_argument("modulation constants give a nonpositive SNR requirement");
    thresholds.push_back(10.0 * std::log10(k * factor));
  }

  std::vector<TransmissionMode> modes;
  modes.push_back({"No transmission", 0, 0, -inf, thresholds.front()});
  for (int b = 1; b <= max_bits; ++b) {
    const double upper = b < max_bits ? thresholds[static_cast<std::size_t>(b)] : inf;
    modes.push_back({mode_name(b), 1 << b, b, thresholds[static_cast<std::size_t>(b - 1)], upper});
  }
  return ModeTable(std::move(modes));
}

const TransmissionMode& select_mode(const ModeTable& table, double snr_db) {
  const auto modes = table.modes();
  if (std::isnan(snr_db)) return modes.front();
  auto it = std::upper_bound(modes.begin() + 1, modes.end(), snr_db,
                             [](double v, const TransmissionMode& m) { return v < m.snr_lower_db; });
  return *(it - 1);
}

const TransmissionMode& select_mode_linear(const ModeTable& table, double snr) {
  if (!(snr > 0.0)) return table.modes().front();
  return select_mode(table, 10.0 * std::log10(snr));
}

void TransferDemand::validate() const {
  if (packets < 1 || bits_per_packet < 1) throw std::invalid_argument("demand needs at least one packet of one bit");
  if (!(proc_power >= 0.0)) throw std::invalid_argument("processing power must be nonnegative");
}

std::int64_t transfer_slots(const TransferDemand& demand, const TransmissionMode& mode) {
  if (!mode.transmits()) throw std::domain_error("untransmittable: mode has rate 0");
  return (demand.total_bits() + mode.bits - 1) / mode.bits;
}

std::int64_t transfer_slots_for_rate(const TransferDemand& demand, double rate) {
  if (!(rate > 0.0)) throw std::domain_error("untransmittable: rate is 0");
  const double slots = std::ceil(static_cast<double>(demand.total_bits()) / rate);
  if (slots >= static_cast<double>(kMaxSlots)) return kMaxSlots;
  return static_cast<std::int64_t>(slots);
}

double transfer_energy_for_slots(const TransferDemand& demand, std::int64_t slots, double tx_power, double slot) {
  return (tx_power + demand.proc_power) * static_cast<double>(slots) * slot;
}

double transfer_energy(const TransferDemand& demand, const TransmissionMode& mode, double tx_power, double slot) {
  return transfer_energy_for_slots(demand, transfer_slots(demand, mode), tx_power, slot);
}

void HarvesterParams::validate() const {
  if (!(max_power > 0.0) || !(slope > 0.0) || !(threshold > 0.0)) {
    throw std::invalid_argument("harvester parameters must be positive");
  }
}

double harvested_power(const HarvesterParams& params, double received_power) {
  if (!(received_power >= 0.0)) throw std::invalid_argument("received power must be nonnegative");
  const double num = -std::expm1(-params.slope * received_power);
  const double den = 1.0 + std::exp(-params.slope * (received_power - params.threshold));
  return params.max_power * num / den;
}

double harvested_energy_for_transfer(const HarvesterParams& params, double received_power, std::int64_t slots,
                                     double slot) {
  if (slots < 0) throw std::invalid_argument("slot count must be nonnegative");
  return harvested_power(params, received_power) * static_cast<double>(slots) * slot;
}

}  // namespace drams
