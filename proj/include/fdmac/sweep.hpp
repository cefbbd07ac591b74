#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "fdmac/config_io.hpp"

namespace fdmac {

enum class SweepMode { Analysis, Simulation, Both, Optimize };

SweepMode parse_sweep_mode(const std::string& text);

struct SweepSpec {
  std::string parameter;            // scenario key to sweep
  std::vector<std::string> values;  // textual values, parsed per key
  std::vector<std::pair<std::string, std::string>> overrides;
  SweepMode mode = SweepMode::Analysis;
};

// One CSV row per sweep value per requested engine; every row carries the
// full effective parameter set. Returns a nonzero status naming the first
// failing sweep point on stderr.
int run_experiment(const ScenarioConfig& base, const SweepSpec& spec,
                   std::ostream& out, std::ostream& err);

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::pair<std::string, std::string>> derived;
  bool ok() const { return violations.empty(); }
};

// Checks every invariant and reports derived operating-point quantities
// (self-interference, sensing SNRs, calibrated thresholds) without running
// any experiment.
ValidationReport validate_scenario(const ScenarioConfig& scenario);

struct CrossValidation {
  double analysis_nt = 0.0;
  double analysis_se = 0.0;
  double sim_mean_nt = 0.0;
  double sim_sd = 0.0;       // standard error of the replication mean
  int replications = 0;
  double relative_diff = 0.0;
  double combined_sigma = 0.0;
  bool within(double rel_tol, double n_sigma) const;
};

// Analytical engine against replicated simulations on one scenario.
CrossValidation cross_validate(const ScenarioConfig& scenario);

}  // namespace fdmac
