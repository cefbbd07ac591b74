#include "fdmac/sweep.hpp"

#include <cmath>
#include <sstream>

#include "fdmac/csv.hpp"
#include "fdmac/units.hpp"

namespace fdmac {

SweepMode parse_sweep_mode(const std::string& text) {
  if (text == "analysis") return SweepMode::Analysis;
  if (text == "simulation") return SweepMode::Simulation;
  if (text == "both") return SweepMode::Both;
  if (text == "optimize") return SweepMode::Optimize;
  throw ConfigError("mode must be analysis, simulation, both or optimize");
}

namespace {

const std::vector<std::string> kResultColumns = {
    "mode",
    "nt",
    "nt_std_error",
    "sim_cycles",
    "sim_collisions",
    "sim_missed_detections",
    "sim_false_alarm_stalls",
    "sim_interference_s",
    "opt_window",
    "opt_fragment_time_s",
    "opt_tx_power_lin",
    "opt_tx_power_db",
};

std::vector<std::string> header_for(const ScenarioConfig& scenario) {
  std::vector<std::string> columns;
  for (const auto& [key, value] : scenario.effective()) {
    (void)value;
    columns.push_back(key);
  }
  columns.insert(columns.end(), kResultColumns.begin(), kResultColumns.end());
  return columns;
}

struct ResultCells {
  std::string mode;
  std::string nt, nt_se;
  std::string cycles, collisions, missed, stalls, interference;
  std::string opt_w, opt_t, opt_p_lin, opt_p_db;
};

void emit_row(CsvWriter& csv, const ScenarioConfig& scenario,
              const ResultCells& cells) {
  std::vector<std::string> fields;
  for (const auto& [key, value] : scenario.effective()) {
    (void)key;
    fields.push_back(value);
  }
  fields.push_back(cells.mode);
  fields.push_back(cells.nt);
  fields.push_back(cells.nt_se);
  fields.push_back(cells.cycles);
  fields.push_back(cells.collisions);
  fields.push_back(cells.missed);
  fields.push_back(cells.stalls);
  fields.push_back(cells.interference);
  fields.push_back(cells.opt_w);
  fields.push_back(cells.opt_t);
  fields.push_back(cells.opt_p_lin);
  fields.push_back(cells.opt_p_db);
  csv.row(fields);
}

ResultCells analysis_cells(const ScenarioConfig& scenario) {
  const ThroughputReport report =
      normalized_throughput(scenario.net, scenario.analysis);
  ResultCells cells;
  cells.mode = "analysis";
  cells.nt = CsvWriter::format_double(report.normalized_throughput);
  cells.nt_se = CsvWriter::format_double(report.std_error);
  return cells;
}

SimStats simulate_once(const ScenarioConfig& scenario, std::uint64_t seed) {
  const auto& net = scenario.net;
  if (scenario.hd_sensing_time > 0.0) {
    const SensingCalibration calib = calibrate_threshold(
        net.radio, net.pu, scenario.hd_sensing_time, net.radio.tx_power,
        net.target_detection_prob, net.flags.prob_idle_uses_shift);
    return run_hd(net, calib, scenario.hd_sensing_time, scenario.sim_horizon,
                  seed, scenario.sim);
  }
  const SensingCalibration calib = calibrate_threshold(
      net.radio, net.pu, net.mac.fragment_time, net.radio.tx_power,
      net.target_detection_prob, net.flags.prob_idle_uses_shift);
  return run_fd(net, calib, scenario.sim_horizon, seed, scenario.sim);
}

ResultCells simulation_cells(const ScenarioConfig& scenario) {
  double sum = 0.0, sq = 0.0;
  SimStats last;
  const int reps = std::max(1, scenario.sim_replications);
  for (int r = 0; r < reps; ++r) {
    last = simulate_once(scenario, scenario.seed + r);
    const double nt = last.measured_nt();
    sum += nt;
    sq += nt * nt;
  }
  const double mean = sum / reps;
  const double var = std::max(0.0, sq / reps - mean * mean);
  const double se = reps > 1 ? std::sqrt(var / (reps - 1)) : 0.0;

  ResultCells cells;
  cells.mode = "simulation";
  cells.nt = CsvWriter::format_double(mean);
  cells.nt_se = CsvWriter::format_double(se);
  cells.cycles = std::to_string(last.cycles);
  cells.collisions = std::to_string(last.collisions);
  cells.missed = std::to_string(last.missed_detections);
  cells.stalls = std::to_string(last.false_alarm_stalls);
  cells.interference = CsvWriter::format_double(last.pu_interference_time);
  return cells;
}

ResultCells optimize_cells(const ScenarioConfig& scenario) {
  const auto& net = scenario.net;
  const auto candidates = window_candidates(net.mac.max_contention_window);
  const double t_res =
      net.pu.evacuation_time / scenario.optimizer.t_grid_points;
  const OptimizationResult result =
      optimize(net, candidates, t_res, scenario.optimizer);
  ResultCells cells;
  cells.mode = "optimize";
  cells.nt = CsvWriter::format_double(result.best_throughput);
  cells.nt_se = "";
  cells.opt_w = std::to_string(result.best_window);
  cells.opt_t = CsvWriter::format_double(result.best_fragment_time);
  cells.opt_p_lin = CsvWriter::format_double(result.best_tx_power);
  cells.opt_p_db =
      CsvWriter::format_double(units::linear_to_db(result.best_tx_power));
  return cells;
}

}  // namespace

int run_experiment(const ScenarioConfig& base, const SweepSpec& spec,
                   std::ostream& out, std::ostream& err) {
  if (!spec.parameter.empty() && !is_known_scenario_key(spec.parameter)) {
    err << "unknown sweep parameter '" << spec.parameter << "'\n";
    return 2;
  }

  CsvWriter csv(out);
  csv.header(header_for(base));

  for (const auto& value : spec.values) {
    ScenarioConfig scenario = base;
    try {
      for (const auto& [key, val] : spec.overrides) scenario.apply(key, val);
      if (!spec.parameter.empty()) scenario.apply(spec.parameter, value);
      scenario.finalize();
      scenario.net.validate();

      switch (spec.mode) {
        case SweepMode::Analysis:
          emit_row(csv, scenario, analysis_cells(scenario));
          break;
        case SweepMode::Simulation:
          emit_row(csv, scenario, simulation_cells(scenario));
          break;
        case SweepMode::Both:
          emit_row(csv, scenario, analysis_cells(scenario));
          emit_row(csv, scenario, simulation_cells(scenario));
          break;
        case SweepMode::Optimize:
          emit_row(csv, scenario, optimize_cells(scenario));
          break;
      }
    } catch (const std::exception& e) {
      err << "sweep point " << spec.parameter << "=" << value
          << " failed: " << e.what() << "\n";
      return 1;
    }
  }
  return 0;
}

ValidationReport validate_scenario(const ScenarioConfig& scenario) {
  ValidationReport report;
  report.violations = scenario.net.violations();

  const auto& net = scenario.net;
  auto d = [](double v) { return CsvWriter::format_double(v); };
  report.derived.emplace_back("self_interference_lin",
                              d(net.radio.self_interference()));
  report.derived.emplace_back(
      "prob_idle", d(prob_idle(net.pu, net.flags.prob_idle_uses_shift)));
  report.derived.emplace_back(
      "packet_time_s", d(net.mac.packet_time()));
  report.derived.emplace_back(
      "overhead_t0_s", d(reservation_overhead(0, net.mac)));

  if (!report.ok()) return report;

  report.derived.emplace_back(
      "sensing_snr_fd",
      d(sensing_snr(net.radio, net.radio.tx_power, SensingMode::FullDuplex)));
  report.derived.emplace_back(
      "sensing_snr_hd",
      d(sensing_snr(net.radio, net.radio.tx_power, SensingMode::HalfDuplex)));
  const FragmentRates rates = FragmentRates::from_radio(
      net.radio, net.flags.receiver_self_interference);
  report.derived.emplace_back("snr_idle", d(rates.snr_idle));
  report.derived.emplace_back("snr_busy", d(rates.snr_busy));
  try {
    const SensingCalibration calib = calibrate_threshold(
        net.radio, net.pu, net.mac.fragment_time, net.radio.tx_power,
        net.target_detection_prob, net.flags.prob_idle_uses_shift);
    report.derived.emplace_back("threshold_fd", d(calib.threshold_fd));
    report.derived.emplace_back("threshold_hd", d(calib.threshold_hd));
    report.derived.emplace_back("achieved_detection_fd",
                                d(calib.achieved_avg_detection_fd));
    report.derived.emplace_back("achieved_detection_hd",
                                d(calib.achieved_avg_detection_hd));
    RadioConfig radio = net.radio;
    report.derived.emplace_back(
        "false_alarm_fd",
        d(false_alarm_00(calib.threshold_fd, radio, net.mac.fragment_time,
                         SensingMode::FullDuplex)));
    report.derived.emplace_back(
        "false_alarm_hd",
        d(false_alarm_00(calib.threshold_hd, radio, net.mac.fragment_time,
                         SensingMode::HalfDuplex)));
  } catch (const std::exception& e) {
    report.violations.push_back(std::string("calibration failed: ") +
                                e.what());
  }
  return report;
}

bool CrossValidation::within(double rel_tol, double n_sigma) const {
  if (std::abs(relative_diff) <= rel_tol) return true;
  return std::abs(analysis_nt - sim_mean_nt) <= n_sigma * combined_sigma;
}

CrossValidation cross_validate(const ScenarioConfig& scenario) {
  CrossValidation cv;
  const ThroughputReport report =
      normalized_throughput(scenario.net, scenario.analysis);
  cv.analysis_nt = report.normalized_throughput;
  cv.analysis_se = report.std_error;

  const int reps = std::max(2, scenario.sim_replications);
  cv.replications = reps;
  double sum = 0.0, sq = 0.0;
  ScenarioConfig run = scenario;
  run.hd_sensing_time = 0.0;  // cross-validation targets the FD protocol
  for (int r = 0; r < reps; ++r) {
    const SimStats stats = simulate_once(run, scenario.seed + r);
    const double nt = stats.measured_nt();
    sum += nt;
    sq += nt * nt;
  }
  cv.sim_mean_nt = sum / reps;
  const double var = std::max(0.0, sq / reps - cv.sim_mean_nt * cv.sim_mean_nt);
  cv.sim_sd = std::sqrt(var / (reps - 1));
  cv.relative_diff = cv.analysis_nt != 0.0
                         ? (cv.sim_mean_nt - cv.analysis_nt) / cv.analysis_nt
                         : 0.0;
  cv.combined_sigma =
      std::sqrt(cv.sim_sd * cv.sim_sd + cv.analysis_se * cv.analysis_se);
  return cv;
}

}  // namespace fdmac
