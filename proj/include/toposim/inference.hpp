#pragma once

#include "toposim/config.hpp"
#include "toposim/persistence.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace toposim {

/// Worker count: TOPOSIM_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
int worker_count();

/// Runs fn(0..n-1) on up to worker_count() threads. Every index runs even
/// if one throws; the exception of the lowest failing index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Seed of replicate r below a master seed.
std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t replicate);

struct SweepRow {
  std::size_t snr_index = 0;
  double snr = 0.0;
  int replicate = 0;
  std::uint64_t seed = 0;
  TotalPersistence total;
};

struct SweepResult {
  std::vector<double> snr_grid;
  std::vector<TotalPersistence> means;  // one per grid point
  int replicates = 0;
  std::vector<SweepRow> rows;  // grid-major, then replicate
};

/// For every replicate r one latent panel is drawn from replicate_seed(seed, r)
/// and mixed at each SNR of the grid, so curves compare like with like.
SweepResult snr_sweep(const RunConfig& config, const std::vector<double>& snr_grid,
                      int replicates, std::uint64_t seed);

/// Total persistence of n independent pipeline runs; run i uses
/// derive_seed(seed, {group, i}).
std::vector<TotalPersistence> group_summaries(const RunConfig& config, int n, int group,
                                              std::uint64_t seed);

struct BootstrapResult {
  std::vector<TotalPersistence> group1, group2;
  std::vector<TotalPersistence> boot1, boot2;  // B resampled means each
  Eigen::MatrixXi draws1, draws2;              // B x N, zero-based indices
  int b = 0;
};

/// B with-replacement resamples of each group (size N), averaged.
BootstrapResult bootstrap_compare(const std::vector<TotalPersistence>& group1,
                                  const std::vector<TotalPersistence>& group2, int b,
                                  std::uint64_t seed);

struct FiveNumber {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

/// Quartiles by linear interpolation between order statistics.
FiveNumber five_number(std::vector<double> values);

/// Whether the [q1, q3] intervals intersect.
bool iqr_overlap(const FiveNumber& a, const FiveNumber& b);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

std::vector<double> component(const std::vector<TotalPersistence>& values, int dim);

}  // namespace toposim
