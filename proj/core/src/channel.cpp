#include "drams/channel.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace drams {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string("dimension mismatch: ") + what);
}

double los_fraction(double k_db) {
  if (std::isinf(k_db)) return k_db > 0 ? 1.0 : 0.0;
  const double k = std::pow(10.0, k_db / 10.0);
  return k / (k + 1.0);
}

std::vector<Complex> responses(const PhaseShiftMatrix& phase) {
  std::vector<Complex> out(phase.size());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = phase.response(n);
  return out;
}

}  // namespace

Complex FadingVector::gain(std::size_t n) const { return std::polar(amplitudes[n], -phases[n]); }

FadingVector FadingVector::from_gains(std::span<const Complex> gains) {
  FadingVector v;
  v.amplitudes.reserve(gains.size());
  v.phases.reserve(gains.size());
  for (const Complex g : gains) {
    v.amplitudes.push_back(std::abs(g));
    v.phases.push_back(wrap_phase(-std::arg(g)));
  }
  return v;
}

FadingMatrix FadingMatrix::identity(std::size_t n) {
  FadingMatrix m{n, n, std::vector<Complex>(n * n, Complex{0.0, 0.0})};
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

void LinkBudgetParams::validate() const {
  if (!(rho_l > 0.0) || !(noise_power > 0.0) || !(tx_power > 0.0)) {
    throw std::invalid_argument("link budget powers and rho_L must be positive");
  }
  if (!(alpha_d2d > 0.0) || !(alpha_other > 0.0)) throw std::invalid_argument("path-loss exponents must be positive");
}

double wrap_phase(double theta) noexcept {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

Complex sample_rician(double k_db, Rng& rng) {
  std::uniform_real_distribution<double> uphase(0.0, kTwoPi);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double los = los_fraction(k_db);
  const Complex los_part = std::polar(std::sqrt(los), uphase(rng));
  if (los >= 1.0) return los_part;
  const double s = std::sqrt((1.0 - los) / 2.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return los_part + Complex{s * re, s * im};
}

FadingVector sample_fading(std::size_t n, double k_db, Rng& rng) {
  if (n == 0) throw std::invalid_argument("sample_fading needs at least one element");
  std::vector<Complex> g(n);
  for (auto& x : g) x = sample_rician(k_db, rng);
  return FadingVector::from_gains(g);
}

FadingMatrix sample_fading_matrix(std::size_t rows, std::size_t cols, double k_db, Rng& rng) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("sample_fading_matrix needs a nonempty shape");
  std::uniform_real_distribution<double> uphase(0.0, kTwoPi);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double los = los_fraction(k_db);
  const double a = std::sqrt(los);
  const double s = std::sqrt((1.0 - los) / 2.0);

  std::vector<Complex> steer_rx(rows);
  std::vector<Complex> steer_tx(cols);
  for (auto& x : steer_rx) x = std::polar(1.0, uphase(rng));
  for (auto& x : steer_tx) x = std::polar(1.0, uphase(rng));

  FadingMatrix m{rows, cols, std::vector<Complex>(rows * cols)};
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      Complex g = a * steer_rx[r] * steer_tx[c];
      if (s > 0.0) {
        const double re = normal(rng);
        const double im = normal(rng);
        g += Complex{s * re, s * im};
      }
      m.at(r, c) = g;
    }
  }
  return m;
}

double direct_received_power(const LinkBudgetParams& params, Complex h, double d) {
  if (!(d > 0.0)) throw std::invalid_argument("link distance must be positive");
  return params.tx_power * params.rho_l * std::pow(d, -params.alpha_d2d) * std::norm(h);
}

double direct_snr(const LinkBudgetParams& params, Complex h, double d) {
  return direct_received_power(params, h, d) / params.noise_power;
}

Complex cascade_gain(const FadingVector& h_in, const PhaseShiftMatrix& phase, const FadingVector& h_out) {
  require_same_size(h_in.size(), phase.size(), "ingress vs RIS");
  require_same_size(h_out.size(), phase.size(), "egress vs RIS");
  Complex sum{0.0, 0.0};
  for (std::size_t n = 0; n < phase.size(); ++n) {
    // zeta e^{-j theta_z} e^{j phi} omega e^{-j theta_w}
    sum += std::polar(h_out.amplitudes[n] * h_in.amplitudes[n], phase.phases[n] - h_out.phases[n] - h_in.phases[n]);
  }
  return sum;
}

Complex cascade_gain(const FadingVector& h_in, const PhaseShiftMatrix& phase_i, const FadingMatrix& h_mid,
                     const PhaseShiftMatrix& phase_j, const FadingVector& h_out) {
  require_same_size(h_in.size(), phase_i.size(), "ingress vs first RIS");
  require_same_size(h_mid.cols, phase_i.size(), "inter-RIS columns vs first RIS");
  require_same_size(h_mid.rows, phase_j.size(), "inter-RIS rows vs second RIS");
  require_same_size(h_out.size(), phase_j.size(), "egress vs second RIS");
  std::vector<Complex> x(phase_i.size());
  for (std::size_t c = 0; c < x.size(); ++c) x[c] = phase_i.response(c) * h_in.gain(c);
  Complex sum{0.0, 0.0};
  for (std::size_t r = 0; r < h_mid.rows; ++r) {
    Complex acc{0.0, 0.0};
    const Complex* row = &h_mid.gains[r * h_mid.cols];
    for (std::size_t c = 0; c < h_mid.cols; ++c) acc += row[c] * x[c];
    sum += h_out.gain(r) * phase_j.response(r) * acc;
  }
  return sum;
}

double single_reflection_received_power(const LinkBudgetParams& params, const FadingVector& h_in,
                                        const PhaseShiftMatrix& phase, const FadingVector& h_out, double d_in,
                                        double d_out) {
  if (!(d_in > 0.0) || !(d_out > 0.0)) throw std::invalid_argument("link distance must be positive");
  const double loss = params.rho_l * params.rho_l * std::pow(d_in, -params.alpha_other) *
                      std::pow(d_out, -params.alpha_other);
  return params.tx_power * std::norm(cascade_gain(h_in, phase, h_out)) * loss;
}

double single_reflection_sinr(const LinkBudgetParams& params, const FadingVector& h_in,
                              const PhaseShiftMatrix& phase, const FadingVector& h_out, double d_in, double d_out,
                              std::span<const SingleReflectionInterferer> interferers) {
  const double signal = single_reflection_received_power(params, h_in, phase, h_out, d_in, d_out);
  double interference = 0.0;
  for (const auto& i : interferers) {
    interference += single_reflection_received_power(params, i.h_in, i.phase, i.h_out, i.d_in, i.d_out);
  }
  return signal / (interference + params.noise_power);
}

PhaseShiftMatrix optimal_single_user_phases(const FadingVector& h_in, const FadingVector& h_out) {
  require_same_size(h_in.size(), h_out.size(), "ingress vs egress");
  PhaseShiftMatrix p;
  p.phases.resize(h_in.size());
  for (std::size_t n = 0; n < h_in.size(); ++n) p.phases[n] = wrap_phase(h_out.phases[n] + h_in.phases[n]);
  return p;
}

double optimal_single_reflection_snr(const LinkBudgetParams& params, const FadingVector& h_in,
                                     const FadingVector& h_out, double d_in, double d_out) {
  require_same_size(h_in.size(), h_out.size(), "ingress vs egress");
  if (!(d_in > 0.0) || !(d_out > 0.0)) throw std::invalid_argument("link distance must be positive");
  double coherent = 0.0;
  for (std::size_t n = 0; n < h_in.size(); ++n) coherent += h_in.amplitudes[n] * h_out.amplitudes[n];
  return params.tx_power * coherent * coherent * params.rho_l * params.rho_l *
         std::pow(d_out, -params.alpha_other) * std::pow(d_in, -params.alpha_other) / params.noise_power;
}

double double_reflection_received_power(const LinkBudgetParams& params, const FadingVector& h_in,
                                        const PhaseShiftMatrix& phase_i, const FadingMatrix& h_mid,
                                        const PhaseShiftMatrix& phase_j, const FadingVector& h_out, double d_in,
                                        double d_mid, double d_out) {
  if (!(d_in > 0.0) || !(d_mid > 0.0) || !(d_out > 0.0)) throw std::invalid_argument("link distance must be positive");
  const double loss = params.rho_l * params.rho_l * params.rho_l * std::pow(d_out, -params.alpha_other) *
                      std::pow(d_in, -params.alpha_other) * std::pow(d_mid, -params.alpha_other);
  return params.tx_power * std::norm(cascade_gain(h_in, phase_i, h_mid, phase_j, h_out)) * loss;
}

double double_reflection_sinr(const LinkBudgetParams& params, const FadingVector& h_in,
                              const PhaseShiftMatrix& phase_i, const FadingMatrix& h_mid,
                              const PhaseShiftMatrix& phase_j, const FadingVector& h_out, double d_in, double d_mid,
                              double d_out, std::span<const DoubleReflectionInterferer> interferers) {
  const double signal =
      double_reflection_received_power(params, h_in, phase_i, h_mid, phase_j, h_out, d_in, d_mid, d_out);
  double interference = 0.0;
  for (const auto& i : interferers) {
    interference += double_reflection_received_power(params, i.h_in, i.phase_first, i.h_mid, phase_j, h_out, i.d_in,
                                                     i.d_mid, d_out);
  }
  return signal / (interference + params.noise_power);
}

DoubleReflectionPhases align_double_reflection(const FadingVector& h_in, const FadingMatrix& h_mid,
                                               const FadingVector& h_out, int max_rounds) {
  require_same_size(h_mid.cols, h_in.size(), "inter-RIS columns vs ingress");
  require_same_size(h_mid.rows, h_out.size(), "inter-RIS rows vs egress");
  const std::size_t ni = h_in.size();
  const std::size_t nj = h_out.size();

  std::vector<Complex> gin(ni);
  std::vector<Complex> gout(nj);
  for (std::size_t c = 0; c < ni; ++c) gin[c] = h_in.gain(c);
  for (std::size_t r = 0; r < nj; ++r) gout[r] = h_out.gain(r);

  DoubleReflectionPhases out{PhaseShiftMatrix::zeros(ni), PhaseShiftMatrix::zeros(nj), 0};
  std::vector<Complex> phi_j = responses(out.second);
  std::vector<Complex> egress(ni);
  std::vector<Complex> ingress(nj);
  std::vector<Complex> x(ni);

  for (int round = 0; round < max_rounds; ++round) {
    bool changed = false;

    // Effective egress seen by the first RIS: g = h_out Phi_j H.
    std::fill(egress.begin(), egress.end(), Complex{0.0, 0.0});
    for (std::size_t r = 0; r < nj; ++r) {
      const Complex w = gout[r] * phi_j[r];
      const Complex* row = &h_mid.gains[r * ni];
      for (std::size_t c = 0; c < ni; ++c) egress[c] += w * row[c];
    }
    for (std::size_t c = 0; c < ni; ++c) {
      const double theta = wrap_phase(-std::arg(egress[c]) - std::arg(gin[c]));
      if (theta != out.first.phases[c]) {
        out.first.phases[c] = theta;
        changed = true;
      }
      x[c] = std::polar(1.0, theta) * gin[c];
    }

    // Effective ingress seen by the second RIS: v = H Phi_i h_in.
    for (std::size_t r = 0; r < nj; ++r) {
      Complex acc{0.0, 0.0};
      const Complex* row = &h_mid.gains[r * ni];
      for (std::size_t c = 0; c < ni; ++c) acc += row[c] * x[c];
      ingress[r] = acc;
    }
    for (std::size_t r = 0; r < nj; ++r) {
      const double theta = wrap_phase(-std::arg(ingress[r]) - std::arg(gout[r]));
      if (theta != out.second.phases[r]) {
        out.second.phases[r] = theta;
        changed = true;
      }
      phi_j[r] = std::polar(1.0, theta);
    }

    if (!changed) break;
    out.rounds = round + 1;
  }
  return out;
}

std::vector<double> double_reflection_ingress_bound(const FadingVector& h_in, const FadingMatrix& h_mid) {
  require_same_size(h_mid.cols, h_in.size(), "inter-RIS columns vs ingress");
  std::vector<double> w(h_mid.rows, 0.0);
  for (std::size_t r = 0; r < h_mid.rows; ++r) {
    const Complex* row = &h_mid.gains[r * h_mid.cols];
    double acc = 0.0;
    for (std::size_t c = 0; c < h_mid.cols; ++c) acc += std::abs(row[c]) * h_in.amplitudes[c];
    w[r] = acc;
  }
  return w;
}

double double_reflection_gain_bound(const FadingVector& h_in, const FadingMatrix& h_mid, const FadingVector& h_out) {
  require_same_size(h_mid.rows, h_out.size(), "inter-RIS rows vs egress");
  const std::vector<double> w = double_reflection_ingress_bound(h_in, h_mid);
  double bound = 0.0;
  for (std::size_t r = 0; r < w.size(); ++r) bound += h_out.amplitudes[r] * w[r];
  return bound;
}

double inverse_q(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("error probability must lie in (0, 1)");
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * epsilon);
}

double shannon_rate(double gamma) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("SNR must be nonnegative");
  return std::log2(1.0 + gamma);
}

double finite_blocklength_rate(double gamma, double blocklength, double epsilon) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("SNR must be nonnegative");
  if (!(blocklength >= 1.0)) throw std::invalid_argument("blocklength must be at least 1");
  const double q = inverse_q(epsilon);
  if (std::isinf(blocklength)) return shannon_rate(gamma);
  const double dispersion = (gamma * gamma + 2.0 * gamma) / (blocklength * (1.0 + gamma) * (1.0 + gamma));
  const double rate = std::log1p(gamma) / std::numbers::ln2 - q / std::numbers::ln2 * std::sqrt(dispersion);
  return rate > 0.0 ? rate : 0.0;
}

}  // namespace drams
