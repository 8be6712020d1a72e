#include "toposim/ar2.hpp"

#include "toposim/rng.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace toposim {

Ar2Params ar2_from_peak(double peak_freq_hz, double sampling_rate_hz, double root_magnitude,
                        double noise_sd) {
  if (!(sampling_rate_hz > 0.0) || !std::isfinite(sampling_rate_hz))
    throw std::domain_error("ar2_from_peak: sampling rate must be positive");
  if (!(peak_freq_hz > 0.0) || !(peak_freq_hz < sampling_rate_hz / 2.0))
    throw std::domain_error("ar2_from_peak: peak frequency must lie in (0, Nyquist)");
  if (!(root_magnitude > 1.0) || !std::isfinite(root_magnitude))
    throw std::domain_error("ar2_from_peak: root magnitude must exceed 1");
  if (!(noise_sd > 0.0) || !std::isfinite(noise_sd))
    throw std::domain_error("ar2_from_peak: innovation SD must be positive");

  Ar2Params p;
  p.peak_freq_hz = peak_freq_hz;
  p.sampling_rate_hz = sampling_rate_hz;
  p.root_magnitude = root_magnitude;
  p.phase = peak_freq_hz / sampling_rate_hz;
  p.phi1 = 2.0 * std::cos(2.0 * std::numbers::pi * p.phase) / root_magnitude;
  p.phi2 = -1.0 / (root_magnitude * root_magnitude);
  p.noise_sd = noise_sd;
  return p;
}

double ar2_spectral_density(const Ar2Params& params, double w) {
  using namespace std::complex_literals;
  const double two_pi = 2.0 * std::numbers::pi;
  const std::complex<double> z1 = std::exp(-1i * (two_pi * w));
  const std::complex<double> denom = 1.0 - params.phi1 * z1 - params.phi2 * z1 * z1;
  return params.noise_sd * params.noise_sd / std::norm(denom);
}

double ar2_lag1_autocorrelation(const Ar2Params& params) {
  return params.phi1 / (1.0 - params.phi2);
}

LatentPanel simulate_latents(const Ar2Params& params, Eigen::Index count, Eigen::Index length,
                             std::uint64_t seed, int burn_in) {
  if (count < 1) throw std::invalid_argument("simulate_latents: count must be >= 1");
  if (length < 1) throw std::invalid_argument("simulate_latents: length must be >= 1");
  if (burn_in < 2) throw std::invalid_argument("simulate_latents: burn_in must be >= 2");

  LatentPanel panel;
  panel.processes.resize(count, length);
  panel.sampling_rate_hz = params.sampling_rate_hz;
  panel.seed = seed;
  panel.burn_in = burn_in;

  const Eigen::Index total = length + burn_in;
  Eigen::VectorXd path(total);
  for (Eigen::Index p = 0; p < count; ++p) {
    Rng rng = make_rng(derive_seed(seed, {static_cast<std::uint64_t>(p)}));
    std::normal_distribution<double> innovation(0.0, params.noise_sd);
    double z1 = 0.0, z2 = 0.0;
    for (Eigen::Index t = 0; t < total; ++t) {
      const double z = params.phi1 * z1 + params.phi2 * z2 + innovation(rng);
      path[t] = z;
      z2 = z1;
      z1 = z;
    }
    auto kept = path.tail(length);
    const double mean = kept.mean();
    const double var = (kept.array() - mean).square().mean();
    if (!(var > 0.0))
      throw std::runtime_error("simulate_latents: degenerate latent " + std::to_string(p));
    panel.processes.row(p) = kept.transpose() / std::sqrt(var);
  }
  return panel;
}

double band_preset_peak(std::string_view name) {
  for (const auto& b : kBandPresets)
    if (b.name == name) return b.peak_hz;
  throw std::invalid_argument("unknown band preset '" + std::string(name) + "'");
}

}  // namespace toposim
