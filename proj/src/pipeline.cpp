#include "toposim/pipeline.hpp"

#include "toposim/rng.hpp"

#include <stdexcept>
#include <string>

namespace toposim {

Scenario prepare(const RunConfig& config) {
  validate(config);
  Scenario s;
  s.config = config;
  s.graph = build_pattern(config.pattern);
  s.weights = mixing_weights(s.graph, config.cutoff);
  s.ar2 = ar2_from_peak(config.peak_hz, config.sampling_rate_hz, config.root_magnitude);
  s.band = parse_band(config.band);
  return s;
}

LatentPanel simulate_latents(const Scenario& scenario, std::uint64_t seed) {
  return simulate_latents(scenario.ar2, scenario.graph.node_count, scenario.config.samples,
                          derive_seed(seed, {0}));
}

MultivariateSeries simulate(const Scenario& scenario, const LatentPanel& latents,
                            std::uint64_t seed, std::optional<double> snr) {
  if (!snr) snr = scenario.config.snr;
  const std::uint64_t noise_seed = derive_seed(seed, {1});
  MultivariateSeries s = snr ? mix_with_snr(latents, scenario.weights, *snr, noise_seed)
                             : mix(latents, scenario.weights, scenario.config.noise_sd, noise_seed);
  s.meta.graph_kind = to_string(scenario.graph.kind);
  s.meta.band = scenario.config.band;
  s.meta.seed = seed;
  return s;
}

MultivariateSeries simulate(const Scenario& scenario, std::uint64_t seed,
                            std::optional<double> snr) {
  return simulate(scenario, simulate_latents(scenario, seed), seed, snr);
}

AnalysisOptions analysis_options(const RunConfig& config) {
  AnalysisOptions o;
  o.band = parse_band(config.band);
  o.bandwidth = config.smooth_bw;
  o.max_dim = config.max_dim;
  o.threshold = config.threshold;
  return o;
}

Analysis analyze(const MultivariateSeries& series, const AnalysisOptions& options) {
  Analysis a;
  a.bandwidth = options.bandwidth > 0 ? options.bandwidth : default_bandwidth(series.samples());
  const SpectralStack stack = smooth(periodogram(series), a.bandwidth, options.kernel);
  a.matrices = band_coherence(stack, options.band, series.sampling_rate_hz);
  // Duplicated channels collapse to one point of the metric space.
  const Eigen::Index P = a.matrices.distance.rows();
  for (Eigen::Index q = 0; q < P; ++q)
    for (Eigen::Index p = q + 1; p < P; ++p)
      if (a.matrices.distance(p, q) <= 1e-12)
        throw std::runtime_error("analyze: channels " + std::to_string(q) + " and " +
                                 std::to_string(p) +
                                 " are perfectly coherent in the band (duplicated channel?)");
  a.diagram = persistence_diagram(a.matrices.distance, options.max_dim, options.threshold);
  a.total = total_persistence(a.diagram);
  return a;
}

}  // namespace toposim
