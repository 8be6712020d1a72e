#include "toposim/commands.hpp"

#include "toposim/inference.hpp"
#include "toposim/io.hpp"
#include "toposim/pipeline.hpp"
#include "toposim/rng.hpp"
#include "toposim/svg.hpp"

#include <json.hpp>

#include <sstream>

namespace toposim {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string join(const std::string& dir, const std::string& name) { return dir + "/" + name; }

template <typename F>
std::string render(F&& f) {
  std::ostringstream os;
  f(os);
  return os.str();
}

void emit(CommandResult& r, const std::string& path, const std::string& content) {
  write_file_atomic(path, content);
  r.files.push_back(path);
}

ordered_json totals_json(const TotalPersistence& t) {
  return ordered_json{{"p0", t.p0}, {"p1", t.p1}, {"p2", t.p2}};
}

ordered_json five_json(const FiveNumber& f) {
  return ordered_json{
      {"min", f.min}, {"q1", f.q1}, {"median", f.median}, {"q3", f.q3}, {"max", f.max}};
}

ordered_json graph_json(const PatternGraph& g) {
  ordered_json j;
  j["kind"] = to_string(g.kind);
  if (g.surface) j["surface"] = to_string(*g.surface);
  j["nodes"] = g.node_count;
  j["edges"] = g.edges.size();
  j["diameter"] = g.diameter();
  std::vector<int> lengths;
  for (const auto& c : g.main_cycles) lengths.push_back(static_cast<int>(c.size()));
  j["main_cycle_lengths"] = lengths;
  return j;
}

}  // namespace

CommandResult cmd_generate(const RunConfig& config) {
  const Scenario s = prepare(config);
  const MultivariateSeries series = simulate(s, config.seed);
  CommandResult r;
  r.warnings = s.weights.warnings;

  const bool bin = config.format == "bin";
  const std::string path = join(config.out, bin ? "series.bin" : "series.csv");
  emit(r, path, render([&](std::ostream& os) {
         bin ? write_series_bin(os, series) : write_series_csv(os, series);
       }));

  ordered_json meta;
  meta["config"] = json::parse(to_json(config));
  meta["graph"] = graph_json(s.graph);
  meta["ar2"] = {{"phase", s.ar2.phase}, {"phi1", s.ar2.phi1}, {"phi2", s.ar2.phi2},
                 {"root_magnitude", s.ar2.root_magnitude}};
  meta["channels"] = series.channels();
  meta["samples"] = series.samples();
  meta["sampling_rate_hz"] = series.sampling_rate_hz;
  meta["smooth_bw"] = resolved_bandwidth(config);
  meta["warnings"] = r.warnings;
  emit(r, join(config.out, "series.json"), meta.dump(2) + "\n");
  return r;
}

CommandResult cmd_analyze(const std::string& series_path, const RunConfig& config) {
  validate(config);
  const MultivariateSeries series = read_series_file(series_path, config.sampling_rate_hz);
  const AnalysisOptions options = analysis_options(config);
  const Analysis a = analyze(series, options);
  CommandResult r;
  emit(r, join(config.out, "coherence.csv"),
       render([&](std::ostream& os) { write_matrix_csv(os, a.matrices.coherence); }));
  emit(r, join(config.out, "distance.csv"),
       render([&](std::ostream& os) { write_matrix_csv(os, a.matrices.distance); }));
  emit(r, join(config.out, "diagram.csv"),
       render([&](std::ostream& os) { write_diagram_csv(os, a.diagram); }));
  emit(r, join(config.out, "diagram.svg"),
       diagram_svg(a.diagram, "band " + a.matrices.band.name));

  ordered_json j;
  j["series"] = series_path;
  j["channels"] = series.channels();
  j["samples"] = series.samples();
  j["band_hz"] = {a.matrices.band.lo_hz, a.matrices.band.hi_hz};
  j["bins_used"] = a.matrices.bins_used;
  j["smooth_bw"] = a.bandwidth;
  j["max_dim"] = options.max_dim;
  j["threshold"] = options.threshold;
  j["essential_death"] = a.diagram.death_cap;
  j["total_persistence"] = totals_json(a.total);
  ordered_json counts;
  for (int k = 0; k <= options.max_dim; ++k) counts["H" + std::to_string(k)] = a.diagram.count(k);
  j["feature_counts"] = counts;
  emit(r, join(config.out, "summary.json"), j.dump(2) + "\n");
  return r;
}

CommandResult cmd_sweep(const RunConfig& config) {
  if (config.snr_grid.empty()) throw ConfigError("snr_grid", "sweep needs a non-empty grid");
  CommandResult r;
  r.warnings = prepare(config).weights.warnings;
  const SweepResult s = snr_sweep(config, config.snr_grid, config.replicates, config.seed);
  emit(r, join(config.out, "sweep.csv"), render([&](std::ostream& os) { write_sweep_csv(os, s); }));

  ordered_json j;
  j["config"] = json::parse(to_json(config));
  j["snr_grid"] = s.snr_grid;
  j["replicates"] = s.replicates;
  ordered_json points = ordered_json::array();
  const auto reps = static_cast<std::size_t>(s.replicates);
  for (std::size_t i = 0; i < s.snr_grid.size(); ++i) {
    std::vector<TotalPersistence> at(s.rows.size() / s.snr_grid.size());
    for (std::size_t k = 0; k < reps; ++k) at[k] = s.rows[i * reps + k].total;
    ordered_json box;
    for (int k = 0; k < 3; ++k) box["p" + std::to_string(k)] = five_json(five_number(component(at, k)));
    points.push_back({{"snr", s.snr_grid[i]}, {"mean", totals_json(s.means[i])}, {"box", box}});
  }
  j["points"] = points;
  ordered_json rho;
  for (int k = 0; k < 3; ++k)
    rho["p" + std::to_string(k)] =
        s.snr_grid.size() > 1 ? json(spearman(s.snr_grid, component(s.means, k))) : json(nullptr);
  j["spearman_vs_snr"] = rho;
  emit(r, join(config.out, "sweep.json"), j.dump(2) + "\n");
  emit(r, join(config.out, "sweep.svg"), sweep_svg(s));
  return r;
}

CommandResult cmd_bootstrap(const RunConfig& group1, const RunConfig& group2) {
  validate(group1);
  validate(group2);
  CommandResult r;
  for (const auto& w : prepare(group1).weights.warnings) r.warnings.push_back("group 1: " + w);
  for (const auto& w : prepare(group2).weights.warnings) r.warnings.push_back("group 2: " + w);
  const auto g1 = group_summaries(group1, group1.boot_n, 1, group1.seed);
  const auto g2 = group_summaries(group2, group1.boot_n, 2, group1.seed);
  const BootstrapResult b = bootstrap_compare(g1, g2, group1.boot_b, derive_seed(group1.seed, {3}));

  emit(r, join(group1.out, "summaries.csv"),
       render([&](std::ostream& os) { write_summaries_csv(os, b); }));
  emit(r, join(group1.out, "bootstrap.csv"),
       render([&](std::ostream& os) { write_bootstrap_csv(os, b); }));

  ordered_json j;
  j["group1"] = json::parse(to_json(group1));
  j["group2"] = json::parse(to_json(group2));
  j["n"] = group1.boot_n;
  j["b"] = group1.boot_b;
  const int dims = std::max(group1.max_dim, group2.max_dim);
  ordered_json per_dim;
  for (int k = 0; k <= dims; ++k) {
    const FiveNumber s1 = five_number(component(b.boot1, k));
    const FiveNumber s2 = five_number(component(b.boot2, k));
    per_dim["H" + std::to_string(k)] = {{"group1", five_json(s1)},
                                        {"group2", five_json(s2)},
                                        {"iqr_overlap", iqr_overlap(s1, s2)}};
  }
  j["bootstrap_means"] = per_dim;
  emit(r, join(group1.out, "bootstrap.json"), j.dump(2) + "\n");
  emit(r, join(group1.out, "bootstrap.svg"), bootstrap_svg(b, dims));
  return r;
}

CommandResult cmd_graph(const RunConfig& config) {
  validate(config);
  const PatternGraph g = build_pattern(config.pattern);
  CommandResult r;
  r.warnings = detectability_warnings(g, config.cutoff);
  emit(r, join(config.out, "graph.edges"),
       render([&](std::ostream& os) { write_edge_list(os, g); }));
  ordered_json j = graph_json(g);
  j["k"] = config.cutoff;
  j["warnings"] = r.warnings;
  emit(r, join(config.out, "graph.json"), j.dump(2) + "\n");
  return r;
}

CommandResult run_preset(const Preset& preset) {
  if (preset.command == "sweep") return cmd_sweep(preset.config);
  if (preset.command == "bootstrap") {
    if (!preset.second) throw ConfigError("preset", "bootstrap preset lacks a second group");
    return cmd_bootstrap(preset.config, *preset.second);
  }
  CommandResult r = cmd_generate(preset.config);
  CommandResult a = cmd_analyze(r.files.front(), preset.config);
  r.files.insert(r.files.end(), a.files.begin(), a.files.end());
  return r;
}

}  // namespace toposim
