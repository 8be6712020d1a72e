// toposim: simulate series with a prescribed dependence topology and
// recover it through coherence and persistent homology.

#include "toposim/commands.hpp"
#include "toposim/config.hpp"
#include "toposim/io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace toposim;

namespace {

// Raw flag values; only the ones given on the command line are applied.
struct Flags {
  std::optional<std::string> preset, config, config2;
  std::optional<std::string> pattern, pattern2, surface, edges;
  std::optional<int> rows, cols, rungs, rungs_b, k, samples, smooth_bw, max_dim, replicates;
  std::optional<int> boot_n, boot_b;
  std::optional<double> peak_hz, sr, root_mag, snr, noise_sd, threshold;
  std::optional<std::string> band, snr_grid, out, format;
  std::optional<std::uint64_t> seed;
};

void add_run_flags(CLI::App* app, Flags& f) {
  app->add_option("--preset", f.preset,
                  "one-cycle, two-cycle, torus, sphere-sweep (fig16), bootstrap-compare");
  app->add_option("--config", f.config, "JSON config file; flags given here override it");
  app->add_option("--pattern", f.pattern,
                  "circular_ladder|double_circular_ladder|quotient_grid|custom, or "
                  "torus|sphere|cylinder");
  app->add_option("--surface", f.surface, "torus|sphere|cylinder for quotient_grid");
  app->add_option("--rows", f.rows, "grid rows");
  app->add_option("--cols", f.cols, "grid columns");
  app->add_option("--rungs", f.rungs, "ladder rungs (first lobe of a double ladder)");
  app->add_option("--rungs-b", f.rungs_b, "rungs of the second lobe");
  app->add_option("--edges", f.edges, "edge list file for a custom pattern");
  app->add_option("--k", f.k, "mixing cutoff K in hops");
  app->add_option("--peak-hz", f.peak_hz, "latent AR(2) peak frequency");
  app->add_option("--sr", f.sr, "sampling rate (Hz)");
  app->add_option("--root-mag", f.root_mag, "AR(2) root magnitude M > 1");
  app->add_option("--samples", f.samples, "series length T");
  app->add_option("--band", f.band, "lo:hi in Hz, or low|middle|high");
  app->add_option("--smooth-bw", f.smooth_bw, "kernel half-width in bins (0 = ceil(sqrt(T)/4))");
  app->add_option("--max-dim", f.max_dim, "highest homology dimension (0-2)");
  app->add_option("--threshold", f.threshold, "Rips threshold / essential death");
  app->add_option("--snr", f.snr, "per-channel signal-to-noise ratio");
  app->add_option("--noise-sd", f.noise_sd, "absolute noise SD when --snr is absent");
  app->add_option("--snr-grid", f.snr_grid, "comma-separated increasing SNR values");
  app->add_option("--replicates", f.replicates, "replicates per SNR");
  app->add_option("--boot-n", f.boot_n, "series per bootstrap group");
  app->add_option("--boot-b", f.boot_b, "bootstrap resamples");
  app->add_option("--seed", f.seed, "master seed");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--format", f.format, "csv|bin series format");
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      grid.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ConfigError("snr_grid", "'" + item + "' is not a number");
    }
  }
  return grid;
}

void apply_pattern(PatternSpec& p, const std::string& name) {
  if (name == "torus" || name == "sphere" || name == "cylinder") {
    p.kind = GraphKind::quotient_grid;
    p.surface = parse_surface(name);
    return;
  }
  try {
    p.kind = parse_graph_kind(name);
  } catch (const std::exception& e) {
    throw ConfigError("pattern", e.what());
  }
}

void apply(const Flags& f, RunConfig& c) {
  if (f.pattern) apply_pattern(c.pattern, *f.pattern);
  if (f.surface) {
    try {
      c.pattern.surface = parse_surface(*f.surface);
    } catch (const std::exception& e) {
      throw ConfigError("surface", e.what());
    }
  }
  if (f.rows) c.pattern.rows = *f.rows;
  if (f.cols) c.pattern.cols = *f.cols;
  if (f.rungs) c.pattern.rungs = *f.rungs;
  if (f.rungs_b) c.pattern.rungs_b = *f.rungs_b;
  if (f.edges) {
    c.pattern.kind = GraphKind::custom;
    c.pattern.edge_file = *f.edges;
  }
  if (f.k) c.cutoff = *f.k;
  if (f.peak_hz) c.peak_hz = *f.peak_hz;
  if (f.sr) c.sampling_rate_hz = *f.sr;
  if (f.root_mag) c.root_magnitude = *f.root_mag;
  if (f.samples) c.samples = *f.samples;
  if (f.band) c.band = *f.band;
  if (f.smooth_bw) c.smooth_bw = *f.smooth_bw;
  if (f.max_dim) c.max_dim = *f.max_dim;
  if (f.threshold) c.threshold = *f.threshold;
  if (f.snr) c.snr = *f.snr;
  if (f.noise_sd) c.noise_sd = *f.noise_sd;
  if (f.snr_grid) c.snr_grid = parse_grid(*f.snr_grid);
  if (f.replicates) c.replicates = *f.replicates;
  if (f.boot_n) c.boot_n = *f.boot_n;
  if (f.boot_b) c.boot_b = *f.boot_b;
  if (f.seed) c.seed = *f.seed;
  if (f.out) c.out = *f.out;
  if (f.format) c.format = *f.format;
}

// Preset, then config file, then flags.
Preset resolve(const Flags& f, const std::string& command) {
  Preset p;
  if (f.preset) {
    p = preset(*f.preset);
  } else {
    p.command = command;
  }
  if (f.config) p.config = config_from_json(read_file(*f.config), p.config);
  apply(f, p.config);
  if (command == "bootstrap") {
    // Group 2 is group 1 with its own pattern; a second config file may
    // override anything except seed, output and the bootstrap sizes.
    if (!p.second && !f.config2 && !f.pattern2)
      throw ConfigError("pattern2", "bootstrap needs a second group (--config2 or --pattern2)");
    RunConfig second = p.config;
    if (p.second) second.pattern = p.second->pattern;
    if (f.config2) second = config_from_json(read_file(*f.config2), second);
    if (f.pattern2) apply_pattern(second.pattern, *f.pattern2);
    second.seed = p.config.seed;
    second.out = p.config.out;
    second.boot_n = p.config.boot_n;
    second.boot_b = p.config.boot_b;
    p.second = second;
  }
  validate(p.config);
  if (p.second) validate(*p.second);
  return p;
}

void report(const CommandResult& r) {
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& file : r.files) std::cout << file << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toposim: topology-prescribed multivariate series and their persistence"};
  app.require_subcommand(1);

  Flags gen_flags, an_flags, sw_flags, bs_flags, gr_flags;
  std::string input;

  auto* gen = app.add_subcommand("generate", "simulate a series and write it with metadata");
  add_run_flags(gen, gen_flags);

  auto* an = app.add_subcommand("analyze", "coherence, distance and persistence of a series");
  add_run_flags(an, an_flags);
  an->add_option("input", input, "series file (CSV or TSTS1 binary)");

  auto* sw = app.add_subcommand("sweep", "total persistence against SNR");
  add_run_flags(sw, sw_flags);

  auto* bs = app.add_subcommand("bootstrap", "two-group bootstrap of total persistence");
  add_run_flags(bs, bs_flags);
  bs->add_option("--config2", bs_flags.config2, "JSON config for group 2");
  bs->add_option("--pattern2", bs_flags.pattern2, "pattern of group 2");

  auto* gr = app.add_subcommand("graph", "write the pattern graph as an edge list");
  add_run_flags(gr, gr_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      report(cmd_generate(resolve(gen_flags, "generate").config));
    } else if (an->parsed()) {
      const Preset p = resolve(an_flags, "analyze");
      if (input.empty()) {
        if (!an_flags.preset) throw ConfigError("input", "analyze needs a series file");
        report(run_preset(p));
      } else {
        report(cmd_analyze(input, p.config));
      }
    } else if (sw->parsed()) {
      report(cmd_sweep(resolve(sw_flags, "sweep").config));
    } else if (bs->parsed()) {
      const Preset p = resolve(bs_flags, "bootstrap");
      report(cmd_bootstrap(p.config, *p.second));
    } else if (gr->parsed()) {
      report(cmd_graph(resolve(gr_flags, "graph").config));
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
