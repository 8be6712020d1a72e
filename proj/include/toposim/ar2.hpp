#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string_view>

namespace toposim {

/// Latent AR(2) oscillator Z(t) = phi1 Z(t-1) + phi2 Z(t-2) + W(t) whose
/// characteristic roots sit at root_magnitude * exp(+-i 2 pi phase).
struct Ar2Params {
  double peak_freq_hz = 10.0;
  double sampling_rate_hz = 100.0;
  double root_magnitude = 1.05;
  double phase = 0.1;  // cycles per sample
  double phi1 = 0.0;
  double phi2 = 0.0;
  double noise_sd = 1.0;
};

inline constexpr double kDefaultRootMagnitude = 1.05;
inline constexpr int kDefaultBurnIn = 500;

/// Throws std::domain_error when the peak violates Nyquist, the root
/// magnitude is not > 1 or the innovation SD is not positive.
Ar2Params ar2_from_peak(double peak_freq_hz, double sampling_rate_hz,
                        double root_magnitude = kDefaultRootMagnitude, double noise_sd = 1.0);

/// Closed-form spectral density sigma^2 / |1 - phi1 e^{-i2pi w} - phi2 e^{-i4pi w}|^2
/// at w cycles/sample.
double ar2_spectral_density(const Ar2Params& params, double cycles_per_sample);

/// Lag-1 autocorrelation phi1 / (1 - phi2) from the Yule-Walker equations.
double ar2_lag1_autocorrelation(const Ar2Params& params);

struct LatentPanel {
  Eigen::MatrixXd processes;  // P x T, one row per latent
  double sampling_rate_hz = 100.0;
  std::uint64_t seed = 0;
  int burn_in = kDefaultBurnIn;

  Eigen::Index count() const { return processes.rows(); }
  Eigen::Index length() const { return processes.cols(); }
};

/// P independent Gaussian-innovation AR(2) paths, zero initial state, the
/// first burn_in samples discarded, each row rescaled to unit empirical
/// variance. Latent p draws from derive_seed(seed, {p}).
LatentPanel simulate_latents(const Ar2Params& params, Eigen::Index count, Eigen::Index length,
                             std::uint64_t seed, int burn_in = kDefaultBurnIn);

struct BandPreset {
  std::string_view name;
  double peak_hz;
};

// Labels only; everything downstream is keyed on the numeric peak.
inline constexpr BandPreset kBandPresets[] = {
    {"delta", 2.0}, {"theta", 5.0}, {"alpha", 10.0}, {"beta", 19.5}};

/// Peak frequency for a preset name; throws std::invalid_argument if unknown.
double band_preset_peak(std::string_view name);

}  // namespace toposim
