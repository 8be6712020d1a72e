#pragma once

#include "toposim/config.hpp"

#include <string>
#include <vector>

namespace toposim {

struct CommandResult {
  std::vector<std::string> files;  // paths written, in order
  std::vector<std::string> warnings;
};

/// series.csv or series.bin plus series.json (config echo and derived
/// AR(2) parameters) under config.out.
CommandResult cmd_generate(const RunConfig& config);

/// coherence.csv, distance.csv, diagram.csv, diagram.svg and summary.json
/// under config.out. Band, bandwidth, max_dim, threshold and sampling rate
/// come from the config.
CommandResult cmd_analyze(const std::string& series_path, const RunConfig& config);

/// sweep.csv, sweep.json, sweep.svg over config.snr_grid.
CommandResult cmd_sweep(const RunConfig& config);

/// summaries.csv, bootstrap.csv, bootstrap.json, bootstrap.svg. Group sizes
/// and B come from group1; group1.seed drives both groups and the resampling.
CommandResult cmd_bootstrap(const RunConfig& group1, const RunConfig& group2);

/// graph.edges and graph.json for the configured pattern.
CommandResult cmd_graph(const RunConfig& config);

/// analyze presets run generate followed by analyze in the same directory.
CommandResult run_preset(const Preset& preset);

}  // namespace toposim
