#pragma once

#include "toposim/graphs.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace toposim {

/// Validation failure tied to a single configuration field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct RunConfig {
  PatternSpec pattern;
  int cutoff = kDefaultCutoff;
  std::string band = "middle";  // band name or "lo:hi" in Hz
  double peak_hz = 10.0;
  double root_magnitude = 1.05;
  int samples = 4096;
  double sampling_rate_hz = 100.0;
  std::optional<double> snr;  // overrides noise_sd when set
  double noise_sd = 0.5;
  int smooth_bw = 0;  // 0 picks ceil(sqrt(T)/4)
  int max_dim = 1;
  double threshold = 1.0;
  std::uint64_t seed = 1;
  std::string out = "out";
  std::string format = "csv";  // csv | bin

  std::vector<double> snr_grid;
  int replicates = 100;
  int boot_n = 50;
  int boot_b = 1000;

  bool operator==(const RunConfig&) const = default;
};

/// Checks every field against the module preconditions; throws ConfigError
/// naming the first offending field.
void validate(const RunConfig& config);

/// Smoothing half-width actually used for this config.
int resolved_bandwidth(const RunConfig& config);

std::string to_json(const RunConfig& config);

/// Fields absent from the JSON keep the values in base.
RunConfig config_from_json(const std::string& text, const RunConfig& base = {});

struct Preset {
  std::string name;
  std::string command;  // analyze | sweep | bootstrap
  RunConfig config;
  std::optional<RunConfig> second;  // group 2 for bootstrap
};

/// one-cycle, two-cycle, torus, sphere-sweep (alias fig16), bootstrap-compare.
Preset preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace toposim
