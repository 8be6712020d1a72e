#pragma once

#include "toposim/ar2.hpp"
#include "toposim/config.hpp"
#include "toposim/graphs.hpp"
#include "toposim/mixing.hpp"
#include "toposim/persistence.hpp"
#include "toposim/spectral.hpp"

#include <cstdint>
#include <optional>

namespace toposim {

/// Everything about a run that does not depend on the seed.
struct Scenario {
  RunConfig config;
  PatternGraph graph;
  MixingWeights weights;
  Ar2Params ar2;
  Band band;
};

/// Validates the config and builds graph, weights and AR(2) parameters.
Scenario prepare(const RunConfig& config);

/// Latents from derive_seed(seed, {0}), noise from derive_seed(seed, {1}).
/// snr overrides the config's noise setting when given.
MultivariateSeries simulate(const Scenario& scenario, std::uint64_t seed,
                            std::optional<double> snr = std::nullopt);

/// The noise stage alone, for callers that reuse one latent panel.
MultivariateSeries simulate(const Scenario& scenario, const LatentPanel& latents,
                            std::uint64_t seed, std::optional<double> snr);
LatentPanel simulate_latents(const Scenario& scenario, std::uint64_t seed);

struct AnalysisOptions {
  Band band;
  int bandwidth = 0;  // 0 picks ceil(sqrt(T)/4)
  int max_dim = 1;
  double threshold = 1.0;
  SmoothingKernel kernel = SmoothingKernel::modified_daniell;
};

AnalysisOptions analysis_options(const RunConfig& config);

struct Analysis {
  BandMatrices matrices;
  PersistenceDiagram diagram;
  TotalPersistence total;
  int bandwidth = 0;
};

/// Periodogram, smoothing, band coherence and Rips persistence.
Analysis analyze(const MultivariateSeries& series, const AnalysisOptions& options);

}  // namespace toposim
