#include "toposim/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace toposim {

Eigen::VectorXd kernel_weights(int bandwidth, SmoothingKernel kernel) {
  if (bandwidth < 0) throw std::invalid_argument("kernel_weights: negative bandwidth");
  const int h = bandwidth;
  Eigen::VectorXd w = Eigen::VectorXd::Ones(2 * h + 1);
  if (h > 0 && kernel == SmoothingKernel::modified_daniell) {
    w[0] = 0.5;
    w[2 * h] = 0.5;
  }
  return w / w.sum();
}

int default_bandwidth(Eigen::Index samples) {
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(samples)) / 4.0));
}

Eigen::VectorXd SpectralStack::window_weights(Eigen::Index bin, Eigen::Index& first) const {
  const Eigen::VectorXd full = kernel_weights(bandwidth, kernel);
  const Eigen::Index lo = std::max<Eigen::Index>(0, bin - bandwidth);
  const Eigen::Index hi = std::min<Eigen::Index>(bins() - 1, bin + bandwidth);
  first = lo;
  Eigen::VectorXd w = full.segment(lo - (bin - bandwidth), hi - lo + 1);
  return w / w.sum();
}

Eigen::MatrixXcd SpectralStack::matrix(Eigen::Index bin) const {
  if (bin < 0 || bin >= bins()) throw std::out_of_range("SpectralStack::matrix: bin out of range");
  Eigen::Index first = 0;
  const Eigen::VectorXd w = window_weights(bin, first);
  const Eigen::MatrixXcd scaled = dft.middleCols(first, w.size()) * w.cwiseSqrt().asDiagonal();
  const Eigen::Index p = channels();
  Eigen::MatrixXcd lower = Eigen::MatrixXcd::Zero(p, p);
  lower.selfadjointView<Eigen::Lower>().rankUpdate(scaled);
  Eigen::MatrixXcd out = lower.selfadjointView<Eigen::Lower>();
  out.diagonal() = out.diagonal().real().cast<std::complex<double>>();
  return out;
}

SpectralStack periodogram(const MultivariateSeries& series, PeriodogramOptions options) {
  const Eigen::Index T = series.samples();
  const Eigen::Index P = series.channels();
  if (T < 8) throw std::invalid_argument("periodogram: need at least 8 samples");
  if (P < 1) throw std::invalid_argument("periodogram: series has no channels");
  validate_series(series);

  SpectralStack stack;
  stack.samples = T;
  const Eigen::Index K = T / 2;
  stack.freqs = Eigen::VectorXd::LinSpaced(K, 1.0, static_cast<double>(K)) / static_cast<double>(T);
  stack.dft.resize(P, K);

  const Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(T, 0.0, static_cast<double>(T - 1));
  const double t_mean = t.mean();
  const double t_ss = (t.array() - t_mean).square().sum();
  const double scale = 1.0 / std::sqrt(static_cast<double>(T));

  Eigen::FFT<double> fft;
  std::vector<double> buf(T);
  std::vector<std::complex<double>> spec;
  for (Eigen::Index p = 0; p < P; ++p) {
    Eigen::VectorXd x = series.data.row(p).transpose();
    const double mean = x.mean();
    x.array() -= mean;
    if (options.detrend) {
      const double slope = (t.array() - t_mean).matrix().dot(x) / t_ss;
      x -= slope * (t.array() - t_mean).matrix();
    }
    if (x.cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, std::abs(mean)))
      throw std::runtime_error("periodogram: channel " + std::to_string(p) + " is constant");
    std::copy(x.data(), x.data() + T, buf.begin());
    fft.fwd(spec, buf);
    for (Eigen::Index k = 0; k < K; ++k) stack.dft(p, k) = spec[k + 1] * scale;
  }
  return stack;
}

SpectralStack smooth(const SpectralStack& stack, int bandwidth, SmoothingKernel kernel) {
  if (bandwidth < 1 || bandwidth >= stack.samples / 4)
    throw std::domain_error("smooth: bandwidth must satisfy 1 <= h < floor(T/4) (got " +
                            std::to_string(bandwidth) + " for T = " +
                            std::to_string(stack.samples) + ")");
  SpectralStack out = stack;
  out.bandwidth = bandwidth;
  out.kernel = kernel;
  return out;
}

Band named_band(const std::string& name) {
  if (name == "low") return {1.0, 7.5, "low"};
  if (name == "middle") return {7.5, 15.0, "middle"};
  if (name == "high") return {15.0, 30.0, "high"};
  throw std::invalid_argument("unknown band '" + name + "' (expected low, middle, high or lo:hi)");
}

Band parse_band(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return named_band(text);
  Band b;
  try {
    std::size_t used = 0;
    b.lo_hz = std::stod(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("trailing characters");
    const std::string hi = text.substr(colon + 1);
    b.hi_hz = std::stod(hi, &used);
    if (used != hi.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw std::invalid_argument("band '" + text + "' is not of the form lo:hi");
  }
  if (!(b.lo_hz < b.hi_hz)) throw std::invalid_argument("band '" + text + "' has lo >= hi");
  b.name = text;
  return b;
}

Eigen::MatrixXd coherence_matrix(const Eigen::MatrixXcd& f) {
  const Eigen::Index P = f.rows();
  Eigen::MatrixXd c = Eigen::MatrixXd::Identity(P, P);
  const Eigen::VectorXd auto_spec = f.diagonal().real();
  for (Eigen::Index q = 0; q < P; ++q) {
    for (Eigen::Index p = q + 1; p < P; ++p) {
      const double v = std::norm(f(p, q)) / (auto_spec[p] * auto_spec[q]);
      c(p, q) = c(q, p) = std::clamp(v, 0.0, 1.0);
    }
  }
  return c;
}

BandMatrices band_coherence(const SpectralStack& stack, const Band& band,
                            double sampling_rate_hz) {
  if (stack.bandwidth < 1)
    throw std::invalid_argument(
        "band_coherence: stack is unsmoothed; raw periodogram coherence is identically 1");
  if (!(sampling_rate_hz > 0.0))
    throw std::invalid_argument("band_coherence: sampling rate must be positive");
  const double nyquist = sampling_rate_hz / 2.0;
  if (!(band.lo_hz > 0.0) || !(band.hi_hz <= nyquist) || !(band.lo_hz < band.hi_hz))
    throw std::domain_error("band_coherence: band must lie within (0, Nyquist]");

  const Eigen::Index P = stack.channels();
  BandMatrices out;
  out.band = band;
  out.coherence = Eigen::MatrixXd::Zero(P, P);
  for (Eigen::Index k = 0; k < stack.bins(); ++k) {
    const double f_hz = stack.freqs[k] * sampling_rate_hz;
    if (f_hz < band.lo_hz || f_hz > band.hi_hz) continue;
    const Eigen::MatrixXcd f = stack.matrix(k);
    const double min_auto = f.diagonal().real().minCoeff();
    if (!(min_auto > 1e-14))
      throw std::runtime_error("band_coherence: auto-spectrum <= 1e-14 at " +
                               std::to_string(f_hz) + " Hz");
    out.coherence += coherence_matrix(f);
    ++out.bins_used;
  }
  if (out.bins_used == 0)
    throw std::domain_error("band_coherence: band [" + std::to_string(band.lo_hz) + ", " +
                            std::to_string(band.hi_hz) + "] Hz contains no Fourier bin");
  out.coherence /= static_cast<double>(out.bins_used);
  out.coherence.diagonal().setOnes();
  out.distance = (1.0 - out.coherence.array()).matrix();
  out.distance.diagonal().setZero();
  return out;
}

}  // namespace toposim
