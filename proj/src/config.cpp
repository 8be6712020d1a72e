#include "toposim/config.hpp"

#include "toposim/spectral.hpp"

#include <json.hpp>

#include <cmath>
#include <string>

namespace toposim {

namespace {

using nlohmann::json;

void require(bool ok, const char* field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

json pattern_json(const PatternSpec& p) {
  return json{{"kind", to_string(p.kind)}, {"rungs", p.rungs},     {"rungs_b", p.rungs_b},
              {"rows", p.rows},            {"cols", p.cols},       {"surface", to_string(p.surface)},
              {"edge_file", p.edge_file}};
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& prefix = "") {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(prefix + key, std::string("wrong type (") + e.what() + ")");
  }
}

}  // namespace

int resolved_bandwidth(const RunConfig& c) {
  return c.smooth_bw > 0 ? c.smooth_bw : default_bandwidth(c.samples);
}

void validate(const RunConfig& c) {
  const PatternSpec& p = c.pattern;
  switch (p.kind) {
    case GraphKind::circular_ladder:
      require(p.rungs >= 3, "pattern.rungs", "circular ladder needs at least 3 rungs");
      break;
    case GraphKind::double_circular_ladder:
      require(p.rungs >= 3, "pattern.rungs", "each lobe needs at least 3 rungs");
      require(p.rungs_b >= 3, "pattern.rungs_b", "each lobe needs at least 3 rungs");
      break;
    case GraphKind::quotient_grid:
      require(p.rows >= 3, "pattern.rows", "grid needs at least 3 rows");
      require(p.cols >= 3, "pattern.cols", "grid needs at least 3 columns");
      break;
    case GraphKind::custom:
      require(!p.edge_file.empty(), "pattern.edge_file", "custom pattern needs an edge list file");
      break;
  }
  require(c.cutoff >= 0, "k", "must be >= 0");
  require(c.sampling_rate_hz > 0 && std::isfinite(c.sampling_rate_hz), "sr", "must be positive");
  require(c.peak_hz > 0 && c.peak_hz < c.sampling_rate_hz / 2, "peak_hz",
          "must lie strictly between 0 and the Nyquist frequency");
  require(c.root_magnitude > 1 && std::isfinite(c.root_magnitude), "root_mag", "must be > 1");
  require(c.samples >= 8, "samples", "need at least 8 samples");
  require(!c.snr || (*c.snr > 0 && std::isfinite(*c.snr)), "snr", "must be positive");
  require(c.noise_sd >= 0 && std::isfinite(c.noise_sd), "noise_sd", "must be >= 0");
  require(c.smooth_bw >= 0, "smooth_bw", "must be >= 0 (0 selects the default)");
  const int h = resolved_bandwidth(c);
  require(h >= 1 && h < c.samples / 4, "smooth_bw",
          "half-width " + std::to_string(h) + " must satisfy 1 <= h < floor(T/4)");
  require(c.max_dim >= 0 && c.max_dim <= 2, "max_dim", "must be 0, 1 or 2");
  require(c.threshold > 0 && std::isfinite(c.threshold), "threshold", "must be positive");
  require(c.format == "csv" || c.format == "bin", "format", "must be csv or bin");
  require(!c.out.empty(), "out", "must not be empty");

  Band band;
  try {
    band = parse_band(c.band);
  } catch (const std::exception& e) {
    throw ConfigError("band", e.what());
  }
  require(band.lo_hz > 0 && band.hi_hz <= c.sampling_rate_hz / 2, "band",
          "must lie within (0, Nyquist]");
  const double step = c.sampling_rate_hz / c.samples;
  const double first = std::ceil(band.lo_hz / step - 1e-9) * step;
  require(first <= band.hi_hz + 1e-9 * step && first / step <= c.samples / 2, "band",
          "contains no Fourier frequency at T = " + std::to_string(c.samples));

  for (std::size_t i = 0; i < c.snr_grid.size(); ++i) {
    require(c.snr_grid[i] > 0 && std::isfinite(c.snr_grid[i]), "snr_grid",
            "values must be positive");
    require(i == 0 || c.snr_grid[i] > c.snr_grid[i - 1], "snr_grid",
            "values must be strictly increasing");
  }
  require(c.replicates >= 1, "replicates", "must be >= 1");
  require(c.boot_n >= 2, "boot_n", "must be >= 2");
  require(c.boot_b >= 1, "boot_b", "must be >= 1");
}

std::string to_json(const RunConfig& c) {
  json j{{"pattern", pattern_json(c.pattern)},
         {"k", c.cutoff},
         {"band", c.band},
         {"peak_hz", c.peak_hz},
         {"root_mag", c.root_magnitude},
         {"samples", c.samples},
         {"sr", c.sampling_rate_hz},
         {"snr", c.snr ? json(*c.snr) : json(nullptr)},
         {"noise_sd", c.noise_sd},
         {"smooth_bw", c.smooth_bw},
         {"max_dim", c.max_dim},
         {"threshold", c.threshold},
         {"seed", c.seed},
         {"out", c.out},
         {"format", c.format},
         {"snr_grid", c.snr_grid},
         {"replicates", c.replicates},
         {"boot_n", c.boot_n},
         {"boot_b", c.boot_b}};
  return j.dump(2);
}

RunConfig config_from_json(const std::string& text, const RunConfig& base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config", "top level must be an object");
  static const char* const known[] = {"pattern", "k", "band", "peak_hz", "root_mag", "samples",
                                      "sr", "snr", "noise_sd", "smooth_bw", "max_dim",
                                      "threshold", "seed", "out", "format", "snr_grid",
                                      "replicates", "boot_n", "boot_b"};
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) throw ConfigError(item.key(), "unknown field");
  }

  RunConfig c = base;
  if (j.contains("pattern")) {
    const json& p = j.at("pattern");
    if (!p.is_object()) throw ConfigError("pattern", "must be an object");
    std::string kind = to_string(c.pattern.kind), surface = to_string(c.pattern.surface);
    read(p, "kind", kind, "pattern.");
    read(p, "surface", surface, "pattern.");
    try {
      c.pattern.kind = parse_graph_kind(kind);
    } catch (const std::exception& e) {
      throw ConfigError("pattern.kind", e.what());
    }
    try {
      c.pattern.surface = parse_surface(surface);
    } catch (const std::exception& e) {
      throw ConfigError("pattern.surface", e.what());
    }
    read(p, "rungs", c.pattern.rungs, "pattern.");
    read(p, "rungs_b", c.pattern.rungs_b, "pattern.");
    read(p, "rows", c.pattern.rows, "pattern.");
    read(p, "cols", c.pattern.cols, "pattern.");
    read(p, "edge_file", c.pattern.edge_file, "pattern.");
  }
  read(j, "k", c.cutoff);
  read(j, "band", c.band);
  read(j, "peak_hz", c.peak_hz);
  read(j, "root_mag", c.root_magnitude);
  read(j, "samples", c.samples);
  read(j, "sr", c.sampling_rate_hz);
  if (j.contains("snr")) {
    if (j.at("snr").is_null()) {
      c.snr.reset();
    } else {
      double v = 0;
      read(j, "snr", v);
      c.snr = v;
    }
  }
  read(j, "noise_sd", c.noise_sd);
  read(j, "smooth_bw", c.smooth_bw);
  read(j, "max_dim", c.max_dim);
  read(j, "threshold", c.threshold);
  read(j, "seed", c.seed);
  read(j, "out", c.out);
  read(j, "format", c.format);
  read(j, "snr_grid", c.snr_grid);
  read(j, "replicates", c.replicates);
  read(j, "boot_n", c.boot_n);
  read(j, "boot_b", c.boot_b);
  return c;
}

std::vector<std::string> preset_names() {
  return {"one-cycle", "two-cycle", "torus", "sphere-sweep", "bootstrap-compare"};
}

Preset preset(const std::string& name) {
  Preset p;
  p.name = name;
  RunConfig& c = p.config;
  if (name == "one-cycle") {
    p.command = "analyze";
    c.pattern = {.kind = GraphKind::circular_ladder, .rungs = 15};
    c.samples = 8192;
  } else if (name == "two-cycle") {
    p.command = "analyze";
    c.pattern = {.kind = GraphKind::double_circular_ladder, .rungs = 8, .rungs_b = 8};
    c.samples = 8192;
  } else if (name == "torus") {
    p.command = "analyze";
    c.pattern = {.kind = GraphKind::quotient_grid, .rows = 9, .cols = 17,
                 .surface = Surface::torus};
    c.cutoff = 3;
    c.samples = 8192;
    c.max_dim = 2;
  } else if (name == "sphere-sweep" || name == "fig16") {
    p.name = "sphere-sweep";
    p.command = "sweep";
    c.pattern = {.kind = GraphKind::quotient_grid, .rows = 6, .cols = 10,
                 .surface = Surface::sphere};
    c.max_dim = 2;
    c.snr_grid = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 25.0};
    c.replicates = 100;
  } else if (name == "bootstrap-compare") {
    p.command = "bootstrap";
    c.pattern = {.kind = GraphKind::circular_ladder, .rungs = 15};
    // At lower noise the degree-5 junction of the double ladder shifts the
    // whole H0 distribution; at this level its extra signal power cancels that.
    c.noise_sd = 4.25;
    RunConfig two = c;
    two.pattern = {.kind = GraphKind::double_circular_ladder, .rungs = 8, .rungs_b = 8};
    p.second = two;
  } else {
    throw ConfigError("preset", "unknown preset '" + name +
                                    "' (one-cycle, two-cycle, torus, sphere-sweep, fig16, "
                                    "bootstrap-compare)");
  }
  c.out = "out/" + p.name;
  if (p.second) p.second->out = c.out;
  return p;
}

}  // namespace toposim
