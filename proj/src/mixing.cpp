#include "toposim/mixing.hpp"

#include "toposim/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace toposim {

namespace {

void check_dims(const LatentPanel& latents, const MixingWeights& weights) {
  const auto& w = weights.matrix;
  if (w.rows() != w.cols() || w.cols() != latents.count())
    throw std::invalid_argument("mix: weight matrix is " + std::to_string(w.rows()) + "x" +
                                std::to_string(w.cols()) + " but the panel holds " +
                                std::to_string(latents.count()) + " latents");
}

Eigen::MatrixXd standard_noise(Eigen::Index channels, Eigen::Index samples, std::uint64_t seed) {
  Eigen::MatrixXd eps(channels, samples);
  for (Eigen::Index p = 0; p < channels; ++p) {
    Rng rng = make_rng(derive_seed(seed, {static_cast<std::uint64_t>(p)}));
    std::normal_distribution<double> n01(0.0, 1.0);
    for (Eigen::Index t = 0; t < samples; ++t) eps(p, t) = n01(rng);
  }
  return eps;
}

MultivariateSeries make_series(const LatentPanel& latents, const MixingWeights& weights,
                               std::uint64_t seed) {
  MultivariateSeries s;
  s.data.noalias() = weights.matrix * latents.processes;
  s.sampling_rate_hz = latents.sampling_rate_hz;
  s.meta.cutoff = weights.cutoff;
  s.meta.seed = seed;
  return s;
}

}  // namespace

MultivariateSeries mix(const LatentPanel& latents, const MixingWeights& weights, double noise_sd,
                       std::uint64_t seed) {
  check_dims(latents, weights);
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd))
    throw std::invalid_argument("mix: noise_sd must be finite and >= 0");
  MultivariateSeries s = make_series(latents, weights, seed);
  if (noise_sd > 0.0) s.data += noise_sd * standard_noise(s.channels(), s.samples(), seed);
  s.meta.noise_sd = noise_sd;
  return s;
}

MultivariateSeries mix_with_snr(const LatentPanel& latents, const MixingWeights& weights,
                                double snr, std::uint64_t seed) {
  check_dims(latents, weights);
  if (!(snr > 0.0) || !std::isfinite(snr))
    throw std::domain_error("mix_with_snr: snr must be positive and finite");
  MultivariateSeries s = make_series(latents, weights, seed);
  const Eigen::VectorXd mean = s.data.rowwise().mean();
  const Eigen::VectorXd signal_var =
      (s.data.colwise() - mean).array().square().rowwise().mean().matrix();
  const Eigen::VectorXd noise_scale = (signal_var.array() / snr).sqrt().matrix();
  s.data += noise_scale.asDiagonal() * standard_noise(s.channels(), s.samples(), seed);
  s.meta.snr = snr;
  s.meta.noise_sd = noise_scale.size() ? noise_scale.mean() : 0.0;
  return s;
}

void validate_series(const MultivariateSeries& series) {
  if (!series.data.allFinite())
    throw std::runtime_error("series contains NaN or infinite values");
  if (!(series.sampling_rate_hz > 0.0))
    throw std::runtime_error("series sampling rate must be positive");
}

}  // namespace toposim
