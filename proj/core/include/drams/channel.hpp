#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "drams/rng.hpp"

namespace drams {

using Complex = std::complex<double>;

/// Per-element fading of an RIS-facing link. Element n has complex gain
/// amplitudes[n] * exp(-j phases[n]); phases are kept in [0, 2pi).
struct FadingVector {
  std::vector<double> amplitudes;
  std::vector<double> phases;

  std::size_t size() const noexcept { return amplitudes.size(); }
  Complex gain(std::size_t n) const;

  static FadingVector from_gains(std::span<const Complex> gains);
};

/// Inter-RIS channel, `rows` = elements of the receiving RIS, `cols` =
/// elements of the transmitting RIS, row-major complex gains.
struct FadingMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Complex> gains;

  Complex at(std::size_t r, std::size_t c) const { return gains[r * cols + c]; }
  Complex& at(std::size_t r, std::size_t c) { return gains[r * cols + c]; }

  static FadingMatrix identity(std::size_t n);
};

/// Diagonal unit-modulus RIS response, element n = exp(j phases[n]).
struct PhaseShiftMatrix {
  std::vector<double> phases;

  std::size_t size() const noexcept { return phases.size(); }
  Complex response(std::size_t n) const { return std::polar(1.0, phases[n]); }

  static PhaseShiftMatrix zeros(std::size_t n) { return {std::vector<double>(n, 0.0)}; }
};

struct LinkBudgetParams {
  double rho_l = 2.951209226666386e-4;  // 10^-3.53
  double alpha_d2d = 4.2;
  double alpha_other = 2.0;
  double noise_power = 1e-13;  // W, -100 dBm
  double tx_power = 1.0;       // W, 30 dBm
  double rician_k_db = 10.0;

  void validate() const;
};

/// Wraps an angle into [0, 2pi).
double wrap_phase(double theta) noexcept;

/// One unit-mean-power Rician coefficient; `k_db` may be +infinity (pure LoS).
Complex sample_rician(double k_db, Rng& rng);

/// `n` independent Rician coefficients, uniformly distributed phases.
FadingVector sample_fading(std::size_t n, double k_db, Rng& rng);

/// Rician inter-RIS channel: rank-one LoS part exp(j(a_r + b_c)) with uniform
/// per-element steering phases plus i.i.d. scattering, unit mean power per
/// entry.
FadingMatrix sample_fading_matrix(std::size_t rows, std::size_t cols, double k_db, Rng& rng);

double direct_received_power(const LinkBudgetParams& params, Complex h, double d);

/// P rho_L d^-alpha_d2d |h|^2 / sigma^2.
double direct_snr(const LinkBudgetParams& params, Complex h, double d);

/// h_out * Phi * h_in.
Complex cascade_gain(const FadingVector& h_in, const PhaseShiftMatrix& phase, const FadingVector& h_out);

/// h_out * Phi_j * H * Phi_i * h_in.
Complex cascade_gain(const FadingVector& h_in, const PhaseShiftMatrix& phase_i, const FadingMatrix& h_mid,
                     const PhaseShiftMatrix& phase_j, const FadingVector& h_out);

/// Another pair's cascade through a different RIS towards the same receiver.
struct SingleReflectionInterferer {
  FadingVector h_in;
  PhaseShiftMatrix phase;
  FadingVector h_out;
  double d_in = 1.0;
  double d_out = 1.0;
};

double single_reflection_received_power(const LinkBudgetParams& params, const FadingVector& h_in,
                                        const PhaseShiftMatrix& phase, const FadingVector& h_out, double d_in,
                                        double d_out);

double single_reflection_sinr(const LinkBudgetParams& params, const FadingVector& h_in,
                              const PhaseShiftMatrix& phase, const FadingVector& h_out, double d_in, double d_out,
                              std::span<const SingleReflectionInterferer> interferers = {});

/// Phases that bring every cascaded term h_out[n] phi[n] h_in[n] onto the
/// positive real axis: theta_n = theta_out,n + theta_in,n.
PhaseShiftMatrix optimal_single_user_phases(const FadingVector& h_in, const FadingVector& h_out);

/// Closed-form SNR under optimal phases, P (sum zeta_n omega_n)^2 rho_L^2
/// d_out^-a d_in^-a / sigma^2.
double optimal_single_reflection_snr(const LinkBudgetParams& params, const FadingVector& h_in,
                                     const FadingVector& h_out, double d_in, double d_out);

/// A different first RIS feeding the same second RIS; it shares the second
/// RIS phase matrix and egress channel with the desired cascade.
struct DoubleReflectionInterferer {
  FadingVector h_in;
  PhaseShiftMatrix phase_first;
  FadingMatrix h_mid;
  double d_in = 1.0;
  double d_mid = 1.0;
};

double double_reflection_received_power(const LinkBudgetParams& params, const FadingVector& h_in,
                                        const PhaseShiftMatrix& phase_i, const FadingMatrix& h_mid,
                                        const PhaseShiftMatrix& phase_j, const FadingVector& h_out, double d_in,
                                        double d_mid, double d_out);

double double_reflection_sinr(const LinkBudgetParams& params, const FadingVector& h_in,
                              const PhaseShiftMatrix& phase_i, const FadingMatrix& h_mid,
                              const PhaseShiftMatrix& phase_j, const FadingVector& h_out, double d_in, double d_mid,
                              double d_out, std::span<const DoubleReflectionInterferer> interferers = {});

struct DoubleReflectionPhases {
  PhaseShiftMatrix first;
  PhaseShiftMatrix second;
  int rounds = 0;  // rounds that changed a phase
};

/// Alternating per-RIS alignment: with the second RIS fixed, align the first
/// to its effective egress vector h_out Phi_j H; then align the second to the
/// effective ingress vector H Phi_i h_in. Starts from zero phases and runs at
/// most `max_rounds` rounds; stops early only at an exact fixed point, where
/// further rounds would reproduce the same phases.
DoubleReflectionPhases align_double_reflection(const FadingVector& h_in, const FadingMatrix& h_mid,
                                               const FadingVector& h_out, int max_rounds = 20);

/// Upper bound on |h_out Phi_j H Phi_i h_in| over all phase choices (triangle
/// inequality). Lets callers skip alignment for hopeless candidates.
double double_reflection_gain_bound(const FadingVector& h_in, const FadingMatrix& h_mid, const FadingVector& h_out);

/// The h_out-independent part of that bound, w_r = sum_c |H_rc| |h_in,c|;
/// the bound is then sum_r |h_out,r| w_r.
std::vector<double> double_reflection_ingress_bound(const FadingVector& h_in, const FadingMatrix& h_mid);

/// Q^-1(eps) = sqrt(2) erfc^-1(2 eps).
double inverse_q(double epsilon);

/// Normal-approximation rate at blocklength M_b and error probability eps,
/// in bits per channel use; negative values clamp to 0. An infinite
/// blocklength yields log2(1 + gamma).
double finite_blocklength_rate(double gamma, double blocklength, double epsilon);

double shannon_rate(double gamma);

}  // namespace drams
