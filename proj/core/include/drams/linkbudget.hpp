#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace drams {

/// How the SNR requirement of an m-ary constellation scales with m.
/// per_bit: K log2(m) (the published mode table); per_symbol_minus_one:
/// K (m^c3 - c4) (the closed-form BER approximation taken literally).
enum class ThresholdRule : std::uint8_t { per_bit, per_symbol_minus_one };

/// BER approximation P_b = c1 exp(-c2 snr / f(m)); K = ln(c1 / P_b) / c2.
struct ModulationConstants {
  double c1 = 0.2;
  double c2 = 1.261948704099311;  // ln(0.2 / 1e-6) / 9.6724
  double c3 = 1.0;
  double c4 = 1.0;
};

struct TransmissionMode {
  std::string name;
  int constellation = 0;  // m_q; 0 for "No transmission"
  int bits = 0;           // D_q = log2(m_q)
  double snr_lower_db = 0.0;
  double snr_upper_db = 0.0;

  bool transmits() const noexcept { return bits > 0; }
};

/// Modes ordered by rate, with half-open SNR intervals [lower, upper) that
/// tile the real line. Entry 0 is always "No transmission".
class ModeTable {
 public:
  explicit ModeTable(std::vector<TransmissionMode> modes);

  std::span<const TransmissionMode> modes() const noexcept { return modes_; }
  std::size_t size() const noexcept { return modes_.size(); }
  const TransmissionMode& operator[](std::size_t i) const { return modes_.at(i); }

  /// The mode with the given constellation size; throws if absent.
  const TransmissionMode& by_constellation(int m) const;

 private:
  std::vector<TransmissionMode> modes_;
};

/// Square/cross M-QAM modes for m = 2 .. 2^max_bits.
ModeTable build_mode_table(double target_ber, ThresholdRule rule = ThresholdRule::per_bit,
                           const ModulationConstants& constants = {}, int max_bits = 8);

const TransmissionMode& select_mode(const ModeTable& table, double snr_db);

/// Linear-SNR convenience; nonpositive SNR maps to "No transmission".
const TransmissionMode& select_mode_linear(const ModeTable& table, double snr);

struct TransferDemand {
  int packets = 4;          // alpha
  int bits_per_packet = 8;  // phi
  double proc_power = 0.01; // W, 10 dBm

  void validate() const;
  std::int64_t total_bits() const noexcept { return static_cast<std::int64_t>(packets) * bits_per_packet; }
};

/// ceil(alpha phi / D_q). Throws std::domain_error for a rate-0 mode.
std::int64_t transfer_slots(const TransferDemand& demand, const TransmissionMode& mode);

/// ceil(alpha phi / rate) for a real-valued rate in bits per channel use.
/// Throws std::domain_error when rate <= 0. Saturates at kMaxSlots.
std::int64_t transfer_slots_for_rate(const TransferDemand& demand, double rate);

inline constexpr std::int64_t kMaxSlots = std::int64_t{1} << 40;

/// (P + P_proc) tau T_s.
double transfer_energy(const TransferDemand& demand, const TransmissionMode& mode, double tx_power, double slot);
double transfer_energy_for_slots(const TransferDemand& demand, std::int64_t slots, double tx_power, double slot);

struct HarvesterParams {
  double max_power = 24e-3;  // W
  double slope = 150.0;
  double threshold = 0.014;

  void validate() const;
};

/// Logistic harvester, M_h (1 - e^{-a x}) / (1 + e^{-a (x - b)}).
double harvested_power(const HarvesterParams& params, double received_power);

/// harvested_power * slots * slot, in joules.
double harvested_energy_for_transfer(const HarvesterParams& params, double received_power, std::int64_t slots,
                                     double slot);

}  // namespace drams
