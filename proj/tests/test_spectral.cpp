#include "oracles.hpp"

#include "toposim/graphs.hpp"
#include "toposim/mixing.hpp"
#include "toposim/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace toposim;

namespace {

MultivariateSeries white(int channels, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  MultivariateSeries s;
  s.data.resize(channels, samples);
  for (int p = 0; p < channels; ++p)
    for (int t = 0; t < samples; ++t) s.data(p, t) = n(rng);
  return s;
}

}  // namespace

TEST_CASE("a cosine concentrates in its Fourier bin") {
  const int T = 64, k0 = 5;
  MultivariateSeries s;
  s.data.resize(1, T);
  for (int t = 0; t < T; ++t) s.data(0, t) = std::cos(2 * std::numbers::pi * k0 * t / T);
  const SpectralStack st = periodogram(s);
  CHECK(st.bins() == T / 2);
  CHECK(st.freqs[k0 - 1] == doctest::Approx(static_cast<double>(k0) / T));
  for (Eigen::Index k = 0; k < st.bins(); ++k) {
    const double v = std::norm(st.dft(0, k));
    if (k == k0 - 1)
      CHECK(v == doctest::Approx(T / 4.0).epsilon(1e-12));
    else
      CHECK(v < 1e-20);
  }
}

TEST_CASE("DFT matches a direct sum and satisfies Parseval") {
  const int T = 64;
  const MultivariateSeries s = white(2, T, 5);
  const SpectralStack st = periodogram(s);
  for (int p = 0; p < 2; ++p) {
    const Eigen::VectorXd x = s.data.row(p).transpose().array() - s.data.row(p).mean();
    for (int k = 1; k <= T / 2; ++k)
      CHECK(std::abs(st.dft(p, k - 1) - oracle::direct_dft(x, k)) < 1e-12);
    // mean removed, so bin 0 is empty; bins 1..T/2-1 appear twice
    double energy = std::norm(st.dft(p, T / 2 - 1));
    for (int k = 1; k < T / 2; ++k) energy += 2 * std::norm(st.dft(p, k - 1));
    CHECK(energy == doctest::Approx(x.squaredNorm()).epsilon(1e-12));
  }
}

TEST_CASE("raw periodogram of identical channels is rank one") {
  MultivariateSeries s = white(1, 128, 3);
  s.data.conservativeResize(2, Eigen::NoChange);
  s.data.row(1) = 3.0 * s.data.row(0);
  const SpectralStack st = periodogram(s);
  const Eigen::MatrixXcd f = st.matrix(10);
  CHECK(std::abs(f.determinant()) < 1e-10 * std::norm(f(0, 0)));
}

TEST_CASE("kernel weights") {
  const Eigen::VectorXd md = kernel_weights(2, SmoothingKernel::modified_daniell);
  CHECK(md.size() == 5);
  CHECK(md[0] == doctest::Approx(0.125));
  CHECK(md[2] == doctest::Approx(0.25));
  CHECK(md.sum() == doctest::Approx(1.0));
  CHECK(kernel_weights(3, SmoothingKernel::uniform).isApprox(Eigen::VectorXd::Constant(7, 1.0 / 7)));
  CHECK(kernel_weights(0, SmoothingKernel::modified_daniell)[0] == 1.0);
  CHECK(default_bandwidth(4096) == 16);
  CHECK(default_bandwidth(1000) == 8);
}

TEST_CASE("smoothed matrices are Hermitian and positive semidefinite") {
  const MultivariateSeries s = white(6, 512, 8);
  const SpectralStack st = smooth(periodogram(s), 3);
  for (Eigen::Index k : {Eigen::Index{0}, Eigen::Index{1}, Eigen::Index{100}, st.bins() - 1}) {
    const Eigen::MatrixXcd f = st.matrix(k);
    CHECK(f == f.adjoint());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(f);
    CHECK(es.eigenvalues().minCoeff() > -1e-12);
  }
}

TEST_CASE("uniform kernel is a plain window average") {
  const MultivariateSeries s = white(3, 256, 2);
  const SpectralStack raw = periodogram(s);
  const int h = 4;
  const SpectralStack st = smooth(raw, h, SmoothingKernel::uniform);
  for (Eigen::Index k : {Eigen::Index{20}, Eigen::Index{64}}) {
    Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(3, 3);
    for (Eigen::Index j = k - h; j <= k + h; ++j)
      avg += raw.dft.col(j) * raw.dft.col(j).adjoint();
    avg /= 2.0 * h + 1;
    CHECK((st.matrix(k) - avg).cwiseAbs().maxCoeff() < 1e-12);
  }
  // Truncated at the edge and renormalized over the bins that exist.
  Eigen::MatrixXcd edge = Eigen::MatrixXcd::Zero(3, 3);
  for (Eigen::Index j = 0; j <= h; ++j) edge += raw.dft.col(j) * raw.dft.col(j).adjoint();
  edge /= h + 1.0;
  CHECK((st.matrix(0) - edge).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("smoothed white-noise spectrum has the kernel's variance") {
  const int T = 1024, h = 4;
  const Eigen::VectorXd w = kernel_weights(h, SmoothingKernel::modified_daniell);
  const double expected_var = w.squaredNorm();  // f = 1 for unit white noise
  double sum = 0, sum2 = 0;
  int n = 0;
  for (int seed = 0; seed < 200; ++seed) {
    const SpectralStack st = smooth(periodogram(white(1, T, 500 + seed)), h);
    for (Eigen::Index k = 20; k < 480; k += 20) {
      const double v = st.matrix(k)(0, 0).real();
      sum += v;
      sum2 += v * v;
      ++n;
    }
  }
  const double mean = sum / n;
  const double variance = sum2 / n - mean * mean;
  CHECK(std::abs(mean - 1.0) < 0.02);
  CHECK(variance / expected_var > 0.85);
  CHECK(variance / expected_var < 1.15);
}

TEST_CASE("band coherence") {
  SUBCASE("a channel and its multiple are fully coherent") {
    MultivariateSeries s = white(2, 1024, 4);
    s.data.row(1) = -2.5 * s.data.row(0);
    const BandMatrices m = band_coherence(smooth(periodogram(s), 8), parse_band("middle"), 100.0);
    CHECK(m.coherence(0, 1) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(m.distance(0, 1)) < 1e-10);
  }

  SUBCASE("independent channels sit near the null level") {
    const MultivariateSeries s = white(3, 1 << 14, 6);
    const BandMatrices m = band_coherence(smooth(periodogram(s), 15), parse_band("middle"), 100.0);
    CHECK(m.coherence(0, 1) < 0.2);
    CHECK(m.coherence(1, 2) < 0.2);
    CHECK(m.distance.diagonal().isZero());
    CHECK(m.coherence.diagonal().isOnes());
    CHECK(m.coherence == m.coherence.transpose());
    CHECK(m.bins_used > 0);
  }

  SUBCASE("coherence falls with hop distance on CL_15") {
    const PatternGraph g = circular_ladder(15);
    const LatentPanel z = simulate_latents(ar2_from_peak(10.0, 100.0), 30, 8192, 21);
    const MultivariateSeries y = mix(z, mixing_weights(g, 2), 0.5, 22);
    const BandMatrices m = band_coherence(smooth(periodogram(y), 23), parse_band("middle"), 100.0);
    CHECK(m.coherence(1, 6) < m.coherence(1, 0));
    CHECK(m.coherence(1, 6) < m.coherence(1, 3));
  }

  SUBCASE("invariant under channel rescaling") {
    const PatternGraph g = circular_ladder(4);
    const LatentPanel z = simulate_latents(ar2_from_peak(10.0, 100.0), 8, 2048, 1);
    MultivariateSeries y = mix(z, mixing_weights(g, 1), 0.5, 2);
    const BandMatrices a = band_coherence(smooth(periodogram(y), 6), parse_band("7:13"), 100.0);
    for (Eigen::Index p = 0; p < y.channels(); ++p) y.data.row(p) *= std::pow(10.0, p - 3.0);
    const BandMatrices b = band_coherence(smooth(periodogram(y), 6), parse_band("7:13"), 100.0);
    CHECK((a.coherence - b.coherence).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("spectral guards") {
  const MultivariateSeries s = white(2, 64, 1);
  const SpectralStack raw = periodogram(s);
  CHECK_THROWS_AS(smooth(raw, 0), std::domain_error);
  CHECK_THROWS_AS(smooth(raw, 16), std::domain_error);
  CHECK_THROWS_AS(band_coherence(raw, parse_band("middle"), 100.0), std::invalid_argument);
  const SpectralStack st = smooth(raw, 2);
  // bins are 100/64 = 1.5625 Hz apart
  CHECK_THROWS_AS(band_coherence(st, parse_band("10:10.5"), 100.0), std::domain_error);
  CHECK_THROWS_AS(band_coherence(st, parse_band("10:60"), 100.0), std::domain_error);

  MultivariateSeries tiny = s;
  tiny.data.row(1) *= 1e-9;
  CHECK_THROWS_AS(band_coherence(smooth(periodogram(tiny), 2), parse_band("middle"), 100.0),
                  std::runtime_error);

  MultivariateSeries flat = s;
  flat.data.row(0).setConstant(4.0);
  CHECK_THROWS_AS(periodogram(flat), std::runtime_error);
  CHECK_THROWS_AS(periodogram(white(2, 7, 1)), std::invalid_argument);
}

TEST_CASE("band parsing") {
  const Band b = parse_band("7.5:15");
  CHECK(b.lo_hz == 7.5);
  CHECK(b.hi_hz == 15.0);
  CHECK(parse_band("high").lo_hz == 15.0);
  CHECK(parse_band("low").hi_hz == 7.5);
  CHECK_THROWS_AS(parse_band("5:3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_band("5:x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_band("alpha"), std::invalid_argument);
}
