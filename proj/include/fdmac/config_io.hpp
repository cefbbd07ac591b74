#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fdmac/analysis.hpp"
#include "fdmac/config.hpp"
#include "fdmac/optimizer.hpp"
#include "fdmac/simulator.hpp"

namespace fdmac {

// One experiment scenario: the network model plus engine knobs. Loaded
// from a flat key/value file; durations, powers and frequencies carry
// mandatory unit suffixes (ms/us/s, dB/lin, Hz/kHz/MHz).
struct ScenarioConfig {
  NetworkConfig net;
  AnalysisOptions analysis;
  OptimizerOptions optimizer;
  SimOptions sim;
  double sim_horizon = 2000.0;   // seconds
  int sim_replications = 5;
  double hd_sensing_time = 0.0;  // 0 = pick by grid search when needed
  std::uint64_t seed = 1;

  // Applies one "key = value" assignment; throws ConfigError on unknown
  // keys or malformed values.
  void apply(const std::string& key, const std::string& value);

  // All effective parameters in a fixed order, values in base SI units
  // (seconds, linear power, Hz); this is the provenance block every CSV
  // row carries.
  std::vector<std::pair<std::string, std::string>> effective() const;

  // Keeps dependent knobs coherent after overrides (seeds and workers are
  // shared between the engines).
  void finalize();
};

ScenarioConfig load_scenario(const std::string& path);

// Parses "key=value" (as used by --set command-line overrides).
std::pair<std::string, std::string> split_assignment(const std::string& text);

bool is_known_scenario_key(const std::string& key);

}  // namespace fdmac
