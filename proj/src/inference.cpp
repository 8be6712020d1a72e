#include "toposim/inference.hpp"

#include "toposim/pipeline.hpp"
#include "toposim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

namespace toposim {

int worker_count() {
  if (const char* env = std::getenv("TOPOSIM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  const std::size_t workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::mutex m;
    std::size_t next = 0;
    auto work = [&] {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard lock(m);
          if (next >= n) return;
          i = next++;
        }
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t replicate) {
  return derive_seed(master, {replicate});
}

SweepResult snr_sweep(const RunConfig& config, const std::vector<double>& snr_grid,
                      int replicates, std::uint64_t seed) {
  if (snr_grid.empty()) throw std::invalid_argument("snr_sweep: empty SNR grid");
  if (replicates < 1) throw std::invalid_argument("snr_sweep: replicates must be >= 1");
  RunConfig checked = config;
  checked.snr_grid = snr_grid;
  checked.replicates = replicates;
  const Scenario scenario = prepare(checked);
  const AnalysisOptions options = analysis_options(checked);

  const std::size_t g = snr_grid.size();
  const auto r_count = static_cast<std::size_t>(replicates);
  SweepResult out;
  out.snr_grid = snr_grid;
  out.replicates = replicates;
  out.rows.resize(g * r_count);
  parallel_for(r_count, [&](std::size_t r) {
    const std::uint64_t s = replicate_seed(seed, r);
    const LatentPanel latents = simulate_latents(scenario, s);
    for (std::size_t i = 0; i < g; ++i) {
      try {
        const Analysis a = analyze(simulate(scenario, latents, s, snr_grid[i]), options);
        out.rows[i * r_count + r] = {i, snr_grid[i], static_cast<int>(r), s, a.total};
      } catch (const std::exception& e) {
        std::ostringstream msg;
        msg << "snr " << snr_grid[i] << ", replicate " << r << ": " << e.what();
        throw std::runtime_error(msg.str());
      }
    }
  });

  out.means.assign(g, {});
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t r = 0; r < r_count; ++r)
      for (int k = 0; k < 3; ++k) out.means[i][k] += out.rows[i * r_count + r].total[k];
    for (int k = 0; k < 3; ++k) out.means[i][k] /= static_cast<double>(replicates);
  }
  return out;
}

std::vector<TotalPersistence> group_summaries(const RunConfig& config, int n, int group,
                                              std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("group_summaries: n must be >= 1");
  const Scenario scenario = prepare(config);
  const AnalysisOptions options = analysis_options(config);
  std::vector<TotalPersistence> out(static_cast<std::size_t>(n));
  parallel_for(out.size(), [&](std::size_t i) {
    try {
      const std::uint64_t s = derive_seed(seed, {static_cast<std::uint64_t>(group), i});
      out[i] = analyze(simulate(scenario, s), options).total;
    } catch (const std::exception& e) {
      throw std::runtime_error("group " + std::to_string(group) + ", replicate " +
                               std::to_string(i) + ": " + e.what());
    }
  });
  return out;
}

namespace {

void resample(const std::vector<TotalPersistence>& group, int b, Rng& rng,
              std::vector<TotalPersistence>& means, Eigen::MatrixXi& draws) {
  const int n = static_cast<int>(group.size());
  std::uniform_int_distribution<int> pick(0, n - 1);
  means.assign(static_cast<std::size_t>(b), {});
  draws.resize(b, n);
  for (int j = 0; j < b; ++j) {
    TotalPersistence sum;
    for (int i = 0; i < n; ++i) {
      const int idx = pick(rng);
      draws(j, i) = idx;
      for (int k = 0; k < 3; ++k) sum[k] += group[idx][k];
    }
    for (int k = 0; k < 3; ++k) means[j][k] = sum[k] / n;
  }
}

}  // namespace

BootstrapResult bootstrap_compare(const std::vector<TotalPersistence>& group1,
                                  const std::vector<TotalPersistence>& group2, int b,
                                  std::uint64_t seed) {
  if (group1.size() < 2 || group2.size() < 2)
    throw std::domain_error("bootstrap_compare: each group needs N >= 2 summaries");
  if (b < 1) throw std::domain_error("bootstrap_compare: B must be >= 1");
  BootstrapResult r;
  r.group1 = group1;
  r.group2 = group2;
  r.b = b;
  Rng rng1 = make_rng(derive_seed(seed, {1}));
  Rng rng2 = make_rng(derive_seed(seed, {2}));
  resample(group1, b, rng1, r.boot1, r.draws1);
  resample(group2, b, rng2, r.boot2, r.draws2);
  return r;
}

FiveNumber five_number(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("five_number: no values");
  std::sort(v.begin(), v.end());
  auto q = [&](double p) {
    const double h = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  return {v.front(), q(0.25), q(0.5), q(0.75), v.back()};
}

bool iqr_overlap(const FiveNumber& a, const FiveNumber& b) {
  return a.q1 <= b.q3 && b.q1 <= a.q3;
}

namespace {

std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("spearman: need two equally sized samples of size >= 2");
  const Eigen::VectorXd rx = Eigen::Map<const Eigen::VectorXd>(ranks(x).data(), x.size());
  const Eigen::VectorXd ry = Eigen::Map<const Eigen::VectorXd>(ranks(y).data(), y.size());
  const Eigen::VectorXd cx = rx.array() - rx.mean();
  const Eigen::VectorXd cy = ry.array() - ry.mean();
  const double denom = std::sqrt(cx.squaredNorm() * cy.squaredNorm());
  return denom > 0 ? cx.dot(cy) / denom : 0.0;
}

std::vector<double> component(const std::vector<TotalPersistence>& values, int dim) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(v[dim]);
  return out;
}

}  // namespace toposim
