#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qlim/interferometer.hpp"
#include "qlim/squeeze.hpp"

namespace qlim {

// Run configuration, ingested from a single JSON document. Unknown keys are
// rejected: silent defaults are dangerous in a physics tool.
struct SqueezeConfig {
  std::string family = "vacuum";  // vacuum | constant | single-pole
  double r = 0.0;
  double phi = 0.0;              // radians
  double pole_hz = 100.0;        // single-pole family only

  SqueezeProfile make() const;   // throws ConfigError on bad values
};

struct GridConfig {
  double f_min_hz = 10.0;
  double f_max_hz = 1.0e4;
  int n_points = 600;
  std::string spacing = "log";   // log | linear
};

struct ReadoutConfig {
  std::string mode = "phase";    // phase | optimal | fixed-theta
  double theta = 0.0;            // radians, fixed-theta mode
};

struct OutputConfig {
  std::string path = "sweep.csv";
  std::string format = "csv";    // csv | json
  std::string sided = "double";  // double | single
  bool svg = false;
};

struct RunConfig {
  // detector block, Hz-valued fields as users write them
  double mass_kg = 40.0;
  double arm_length_m = 4000.0;
  double cavity_power_w = 8.0e5;
  double laser_freq_hz = 3.0e14;
  double detuning_hz = 0.0;
  double half_bandwidth_hz = 100.0;

  SqueezeConfig squeeze;
  GridConfig grid;
  ReadoutConfig readout;
  OutputConfig output;
  uint64_t seed = 20250101;

  InterferometerParams detector_params() const;
  void validate() const;  // throws ConfigError with field-level messages
};

// Built-in presets carrying the reference parameter sets.
// Names: "fig3-tuned" (detuning 0) and "fig3-detuned" (detuning 400 Hz).
RunConfig preset(const std::string& name);  // throws ConfigError

// Strict JSON parsing; unknown keys rejected with their path in the message.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config_file(const std::string& path);
std::string config_to_json(const RunConfig& c);  // resolved values, 17 digits

// Log- or linear-spaced frequency grid in Hz, per the grid block.
std::vector<double> frequency_grid(const GridConfig& grid);

}  // namespace qlim
