#pragma once

#include "toposim/mixing.hpp"

#include <Eigen/Dense>

#include <string>

namespace toposim {

enum class SmoothingKernel { modified_daniell, uniform };

/// Spectral matrix estimates at the Fourier frequencies k/T, k = 1..floor(T/2).
///
/// The stack keeps the DFT coefficients d(w_k) and the smoothing kernel
/// rather than P x P matrices per bin; matrix(bin) materializes
/// sum_j K_h(j) d(w_{bin+j}) d(w_{bin+j})^* on demand. Near the ends of the
/// frequency range the kernel is truncated and renormalized.
struct SpectralStack {
  Eigen::VectorXd freqs;  // cycles/sample
  Eigen::MatrixXcd dft;   // P x bins
  Eigen::Index samples = 0;
  int bandwidth = 0;  // kernel half-width in bins; 0 is the raw periodogram
  SmoothingKernel kernel = SmoothingKernel::modified_daniell;

  Eigen::Index channels() const { return dft.rows(); }
  Eigen::Index bins() const { return dft.cols(); }

  /// Normalized kernel weights for the window around bin and the first bin
  /// they apply to.
  Eigen::VectorXd window_weights(Eigen::Index bin, Eigen::Index& first) const;

  /// Hermitian P x P estimate at bin (0-based; frequency freqs[bin]).
  Eigen::MatrixXcd matrix(Eigen::Index bin) const;
};

struct PeriodogramOptions {
  bool detrend = false;  // remove a least-squares line instead of just the mean
};

/// Raw periodogram I(w_k) = d(w_k) d(w_k)^* with d(w_k) = T^{-1/2} sum_t Y(t) e^{-i w_k t}
/// on mean-centered channels. Throws std::invalid_argument for T < 8 and
/// std::runtime_error if a channel is constant.
SpectralStack periodogram(const MultivariateSeries& series, PeriodogramOptions options = {});

/// Kernel-smoothed stack; requires 1 <= bandwidth < floor(T/4).
SpectralStack smooth(const SpectralStack& stack, int bandwidth,
                     SmoothingKernel kernel = SmoothingKernel::modified_daniell);

/// Weights for offsets -h..h; nonnegative and summing to 1.
Eigen::VectorXd kernel_weights(int bandwidth, SmoothingKernel kernel);

/// ceil(sqrt(T) / 4) bins.
int default_bandwidth(Eigen::Index samples);

struct Band {
  double lo_hz = 7.5;
  double hi_hz = 15.0;
  std::string name;
};

/// Defaults at SR = 100 Hz: low [1, 7.5], middle [7.5, 15], high [15, 30].
Band named_band(const std::string& name);

/// Parses "lo:hi" (Hz) or a band name.
Band parse_band(const std::string& text);

struct BandMatrices {
  Band band;
  Eigen::MatrixXd coherence;
  Eigen::MatrixXd distance;
  Eigen::Index bins_used = 0;
};

/// Per-bin coherence |f_pq|^2 / (f_pp f_qq) averaged over the Fourier bins
/// with lo <= f <= hi Hz; distance = 1 - coherence. Rejects unsmoothed
/// stacks, empty bands and auto-spectra <= 1e-14.
BandMatrices band_coherence(const SpectralStack& stack, const Band& band,
                            double sampling_rate_hz);

/// Coherence of a single Hermitian spectral matrix.
Eigen::MatrixXd coherence_matrix(const Eigen::MatrixXcd& spectral);

}  // namespace toposim
