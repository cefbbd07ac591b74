#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fdmac/config_io.hpp"
#include "fdmac/csv.hpp"
#include "fdmac/optimizer.hpp"
#include "fdmac/simulator.hpp"
#include "fdmac/sweep.hpp"
#include "fdmac/units.hpp"

namespace {

using namespace fdmac;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = -1;
};

void add_common(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("-c,--config", args->config_path, "scenario config file")
      ->required();
  cmd->add_option("--set", args->overrides,
                  "override a config key, e.g. --set mac.fragment_time=20ms");
  cmd->add_option("--seed", args->seed, "random seed")
      ->each([args](const std::string&) { args->seed_set = true; });
  cmd->add_option("--workers", args->workers, "worker thread count");
}

ScenarioConfig load_with_overrides(const CommonArgs& args) {
  ScenarioConfig scenario = load_scenario(args.config_path);
  for (const auto& text : args.overrides) {
    auto [key, value] = split_assignment(text);
    scenario.apply(key, value);
  }
  if (args.seed_set) scenario.seed = args.seed;
  if (args.workers >= 0) scenario.analysis.workers = args.workers;
  const char* env_workers = std::getenv("FDMAC_WORKERS");
  if (args.workers < 0 && env_workers) {
    scenario.analysis.workers = std::atoi(env_workers);
  }
  scenario.finalize();
  return scenario;
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw ConfigError("cannot open output file '" + path + "'");
  return file;
}

int cmd_validate(const CommonArgs& args) {
  const ScenarioConfig scenario = load_with_overrides(args);
  const ValidationReport report = validate_scenario(scenario);
  for (const auto& [key, value] : report.derived) {
    std::cout << key << " = " << value << "\n";
  }
  if (!report.ok()) {
    std::cout << "violations:\n";
    for (const auto& v : report.violations) std::cout << "  - " << v << "\n";
    return 1;
  }
  std::cout << "all invariants hold\n";
  return 0;
}

int cmd_analyze(const CommonArgs& args, const std::string& out_path,
                bool per_backoff) {
  const ScenarioConfig scenario = load_with_overrides(args);
  scenario.net.validate();
  const ThroughputReport report =
      normalized_throughput(scenario.net, scenario.analysis);
  std::cout << "normalized_throughput = " << report.normalized_throughput
            << " +/- " << report.std_error << " (rel "
            << report.relative_error << ")\n";
  if (!out_path.empty()) {
    std::ofstream file;
    std::ostream& out = open_out(out_path, file);
    SweepSpec spec;
    spec.mode = SweepMode::Analysis;
    spec.values = {""};
    spec.parameter.clear();
    run_experiment(scenario, spec, out, std::cerr);
  }
  if (per_backoff) {
    CsvWriter csv(std::cout);
    csv.header({"i0", "success_prob", "overhead_s", "conditional_bits"});
    for (const auto& term : report.per_backoff) {
      csv.row({std::to_string(term.i0),
               CsvWriter::format_double(term.success_prob),
               CsvWriter::format_double(term.overhead_time),
               CsvWriter::format_double(term.conditional_bits)});
    }
  }
  return 0;
}

int cmd_simulate(const CommonArgs& args, const std::string& protocol,
                 const std::string& out_path) {
  ScenarioConfig scenario = load_with_overrides(args);
  scenario.net.validate();
  if (protocol == "fd") {
    scenario.hd_sensing_time = 0.0;
  } else if (protocol == "hd") {
    if (scenario.hd_sensing_time <= 0.0) {
      throw ConfigError("hd protocol needs sim.sensing_time");
    }
  } else {
    throw ConfigError("protocol must be fd or hd");
  }
  std::ofstream file;
  std::ostream& out = open_out(out_path, file);
  SweepSpec spec;
  spec.mode = SweepMode::Simulation;
  spec.values = {""};
  return run_experiment(scenario, spec, out, std::cerr);
}

int cmd_optimize(const CommonArgs& args, const std::string& out_path,
                 const std::string& w_spec, double t_steps) {
  const ScenarioConfig scenario = load_with_overrides(args);
  scenario.net.validate();

  std::vector<int> candidates;
  if (w_spec == "pow2" || w_spec.empty()) {
    candidates = window_candidates(scenario.net.mac.max_contention_window);
  } else if (w_spec == "all") {
    candidates = window_candidates(scenario.net.mac.max_contention_window,
                                   /*exhaustive=*/true);
  } else {
    std::stringstream ss(w_spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) candidates.push_back(std::stoi(tok));
  }
  const double t_res =
      t_steps > 0 ? scenario.net.pu.evacuation_time / t_steps : 0.0;

  const OptimizationResult result =
      optimize(scenario.net, candidates, t_res, scenario.optimizer);
  std::cout << "best: W=" << result.best_window
            << " T=" << result.best_fragment_time * 1e3 << "ms"
            << " P=" << units::linear_to_db(result.best_tx_power) << "dB"
            << " NT=" << result.best_throughput << "\n";

  // Re-evaluate the optimum on the full-size analysis sample set.
  ScenarioConfig at_best = scenario;
  at_best.net.mac.contention_window = result.best_window;
  at_best.net.mac.fragment_time = result.best_fragment_time;
  at_best.net.radio.tx_power = result.best_tx_power;
  const ThroughputReport refined =
      normalized_throughput(at_best.net, at_best.analysis);
  std::cout << "refined NT at optimum = " << refined.normalized_throughput
            << " +/- " << refined.std_error << "\n";

  if (!out_path.empty()) {
    std::ofstream file;
    std::ostream& out = open_out(out_path, file);
    CsvWriter csv(out);
    csv.header({"window", "fragment_time_s", "tx_power_lin", "tx_power_db",
                "nt"});
    for (const auto& point : result.trace) {
      csv.row({std::to_string(point.window),
               CsvWriter::format_double(point.fragment_time),
               CsvWriter::format_double(point.tx_power),
               CsvWriter::format_double(units::linear_to_db(point.tx_power)),
               CsvWriter::format_double(point.throughput)});
    }
  }
  return 0;
}

int cmd_sweep(const CommonArgs& args, const std::string& param,
              const std::string& values, const std::string& mode,
              const std::string& out_path) {
  const ScenarioConfig scenario = load_with_overrides(args);
  SweepSpec spec;
  spec.parameter = param;
  spec.mode = parse_sweep_mode(mode);
  std::stringstream ss(values);
  std::string tok;
  while (std::getline(ss, tok, ',')) spec.values.push_back(tok);
  std::ofstream file;
  std::ostream& out = open_out(out_path, file);
  return run_experiment(scenario, spec, out, std::cerr);
}

int cmd_crossval(const CommonArgs& args) {
  const ScenarioConfig scenario = load_with_overrides(args);
  scenario.net.validate();
  const CrossValidation cv = cross_validate(scenario);
  std::cout << "analysis NT   = " << cv.analysis_nt << " +/- "
            << cv.analysis_se << "\n"
            << "simulation NT = " << cv.sim_mean_nt << " +/- " << cv.sim_sd
            << " (" << cv.replications << " replications)\n"
            << "relative diff = " << cv.relative_diff * 100.0 << "%\n";
  const bool ok = cv.within(0.05, 3.0);
  std::cout << (ok ? "PASS" : "FAIL")
            << " (5% relative or 3 sigma combined)\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Saturation-throughput toolkit for a fragment-based full-duplex "
      "cognitive MAC: closed-form analysis, discrete-event simulation, "
      "and protocol configuration search"};
  app.require_subcommand(1);

  CommonArgs validate_args, analyze_args, simulate_args, optimize_args,
      sweep_args, crossval_args;

  auto* validate = app.add_subcommand("validate", "check config invariants");
  add_common(validate, &validate_args);

  auto* analyze = app.add_subcommand("analyze", "analytical throughput");
  add_common(analyze, &analyze_args);
  std::string analyze_out;
  bool analyze_backoff = false;
  analyze->add_option("-o,--out", analyze_out, "CSV output path");
  analyze->add_flag("--per-backoff", analyze_backoff,
                    "dump per-backoff-slot terms");

  auto* simulate = app.add_subcommand("simulate", "discrete-event run");
  add_common(simulate, &simulate_args);
  std::string protocol = "fd";
  std::string simulate_out;
  simulate->add_option("-p,--protocol", protocol, "fd or hd");
  simulate->add_option("-o,--out", simulate_out, "CSV output path");

  auto* optimize_cmd =
      app.add_subcommand("optimize", "search (W, T, P) for peak throughput");
  add_common(optimize_cmd, &optimize_args);
  std::string optimize_out, w_spec = "pow2";
  double t_steps = 21;
  optimize_cmd->add_option("-o,--out", optimize_out, "trace CSV path");
  optimize_cmd->add_option("--windows", w_spec,
                           "pow2, all, or a comma list of windows");
  optimize_cmd->add_option("--t-steps", t_steps,
                           "fragment-time grid points (0 = keep configured)");

  auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep to CSV");
  add_common(sweep_cmd, &sweep_args);
  std::string sweep_param, sweep_values, sweep_mode = "analysis", sweep_out;
  sweep_cmd->add_option("--param", sweep_param, "config key to sweep")
      ->required();
  sweep_cmd->add_option("--values", sweep_values, "comma-separated values")
      ->required();
  sweep_cmd->add_option("--mode", sweep_mode,
                        "analysis, simulation, both or optimize");
  sweep_cmd->add_option("-o,--out", sweep_out, "CSV output path");

  auto* crossval =
      app.add_subcommand("crossval", "analysis vs simulation agreement");
  add_common(crossval, &crossval_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(validate_args);
    if (analyze->parsed())
      return cmd_analyze(analyze_args, analyze_out, analyze_backoff);
    if (simulate->parsed())
      return cmd_simulate(simulate_args, protocol, simulate_out);
    if (optimize_cmd->parsed())
      return cmd_optimize(optimize_args, optimize_out, w_spec, t_steps);
    if (sweep_cmd->parsed())
      return cmd_sweep(sweep_args, sweep_param, sweep_values, sweep_mode,
                       sweep_out);
    if (crossval->parsed()) return cmd_crossval(crossval_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
