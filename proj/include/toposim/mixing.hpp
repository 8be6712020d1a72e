#pragma once

#include "toposim/ar2.hpp"
#include "toposim/graphs.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>

namespace toposim {

struct SeriesMeta {
  std::string graph_kind;
  int cutoff = 0;
  std::string band;
  std::uint64_t seed = 0;
  std::optional<double> snr;
  double noise_sd = 0.0;
};

struct MultivariateSeries {
  Eigen::MatrixXd data;  // P x T
  double sampling_rate_hz = 100.0;
  SeriesMeta meta;

  Eigen::Index channels() const { return data.rows(); }
  Eigen::Index samples() const { return data.cols(); }
};

/// Y = W Z + eps, eps iid N(0, noise_sd^2) per channel and sample.
/// Channel p's noise draws from derive_seed(seed, {p}).
MultivariateSeries mix(const LatentPanel& latents, const MixingWeights& weights, double noise_sd,
                       std::uint64_t seed);

/// Like mix, but channel p gets noise variance Var(W Z)_p / snr, using the
/// empirical variance of its noiseless mix.
MultivariateSeries mix_with_snr(const LatentPanel& latents, const MixingWeights& weights,
                                double snr, std::uint64_t seed);

/// Population correlation of channels p and q for unit-variance independent
/// latents: (W W^T)_pq / sqrt((W W^T)_pp (W W^T)_qq).
template <typename Derived>
double population_correlation(const Eigen::MatrixBase<Derived>& w, Eigen::Index p,
                              Eigen::Index q) {
  const double cross = w.row(p).dot(w.row(q));
  return cross / std::sqrt(w.row(p).squaredNorm() * w.row(q).squaredNorm());
}

/// Throws std::runtime_error if any entry is NaN or infinite.
void validate_series(const MultivariateSeries& series);

}  // namespace toposim
