#include "fdmac/config_io.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "fdmac/csv.hpp"
#include "fdmac/units.hpp"

namespace fdmac {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_bool(const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("expected true/false, got '" + value + "'");
}

int parse_int(const std::string& value) {
  std::size_t pos = 0;
  const int v = std::stoi(value, &pos);
  if (pos != value.size()) throw ConfigError("bad integer '" + value + "'");
  return v;
}

long parse_long(const std::string& value) {
  std::size_t pos = 0;
  const long v = std::stol(value, &pos);
  if (pos != value.size()) throw ConfigError("bad integer '" + value + "'");
  return v;
}

double parse_double(const std::string& value) {
  std::size_t pos = 0;
  const double v = std::stod(value, &pos);
  if (pos != value.size()) throw ConfigError("bad number '" + value + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& value) {
  std::size_t pos = 0;
  const unsigned long long v = std::stoull(value, &pos);
  if (pos != value.size()) throw ConfigError("bad seed '" + value + "'");
  return v;
}

using Setter = std::function<void(ScenarioConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"num_su_pairs",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.num_su_pairs = parse_int(v);
       }},
      {"target_detection_prob",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.target_detection_prob = parse_double(v);
       }},
      {"pu.mean_idle",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.pu.mean_idle = units::parse_duration(v);
       }},
      {"pu.mean_active",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.pu.mean_active = units::parse_duration(v);
       }},
      {"pu.min_idle",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.pu.min_idle = units::parse_duration(v);
       }},
      {"pu.min_active",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.pu.min_active = units::parse_duration(v);
       }},
      {"pu.evacuation_time",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.pu.evacuation_time = units::parse_duration(v);
       }},
      {"mac.mini_slot",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.mac.mini_slot = units::parse_duration(v);
       }},
      {"mac.sifs",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.mac.sifs = units::parse_duration(v);
       }},
      {"mac.difs",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.mac.difs = units::parse_duration(v);
       }},
      {"mac.rts",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.mac.rts = units::parse_duration(v);
       }},
      {"mac.cts",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.mac.cts = units::parse_duration(v);
       }},
      {"mac.contention_window",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.mac.contention_window = parse_int(v);
       }},
      {"mac.max_contention_window",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.mac.max_contention_window = parse_int(v);
       }},
      {"mac.fragments_per_packet",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.mac.fragments_per_packet = parse_int(v);
       }},
      {"mac.fragment_time",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.mac.fragment_time = units::parse_duration(v);
       }},
      {"radio.tx_power",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.radio.tx_power = units::parse_power(v);
       }},
      {"radio.max_tx_power",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.radio.max_tx_power = units::parse_power(v);
       }},
      {"radio.noise_power",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.radio.noise_power = units::parse_power(v);
       }},
      {"radio.pu_received_power",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.radio.pu_received_power = units::parse_power(v);
       }},
      {"radio.si_scale",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.radio.si_scale = parse_double(v);
       }},
      {"radio.si_exponent",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.radio.si_exponent = parse_double(v);
       }},
      {"radio.sampling_frequency",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.radio.sampling_frequency = units::parse_frequency(v);
       }},
      {"flags.prob_idle_uses_shift",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.flags.prob_idle_uses_shift = parse_bool(v);
       }},
      {"flags.receiver_self_interference",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.flags.receiver_self_interference = parse_bool(v);
       }},
      {"flags.count_first_fragment",
       [](ScenarioConfig& c, const std::string& v) {
         c.net.flags.count_first_fragment = parse_bool(v);
       }},
      {"analysis.samples",
       [](ScenarioConfig& c, const std::string& v) {
         c.analysis.samples = parse_long(v);
       }},
      {"analysis.backend",
       [](ScenarioConfig& c, const std::string& v) {
         if (v == "mc") {
           c.analysis.backend = AnalysisBackend::MonteCarlo;
         } else if (v == "quadrature") {
           c.analysis.backend = AnalysisBackend::Quadrature;
         } else {
           throw ConfigError("analysis.backend must be mc or quadrature");
         }
       }},
      {"analysis.workers",
       [](ScenarioConfig& c, const std::string& v) {
         c.analysis.workers = parse_int(v);
       }},
      {"analysis.tabulated_curves",
       [](ScenarioConfig& c, const std::string& v) {
         c.analysis.tabulated_curves = parse_bool(v);
       }},
      {"analysis.perfect_sensing",
       [](ScenarioConfig& c, const std::string& v) {
         c.analysis.perfect_sensing = parse_bool(v);
         c.sim.perfect_sensing = c.analysis.perfect_sensing;
       }},
      {"analysis.quadrature_tol",
       [](ScenarioConfig& c, const std::string& v) {
         c.analysis.quadrature_tol = parse_double(v);
       }},
      {"optimizer.samples",
       [](ScenarioConfig& c, const std::string& v) {
         c.optimizer.samples = parse_long(v);
       }},
      {"optimizer.t_grid_points",
       [](ScenarioConfig& c, const std::string& v) {
         c.optimizer.t_grid_points = parse_int(v);
       }},
      {"sim.warmup_cycles",
       [](ScenarioConfig& c, const std::string& v) {
         c.sim.warmup_cycles = parse_int(v);
       }},
      {"sim.include_ack",
       [](ScenarioConfig& c, const std::string& v) {
         c.sim.include_ack = parse_bool(v);
       }},
      {"sim.ack",
       [](ScenarioConfig& c, const std::string& v) {
         c.sim.ack = units::parse_duration(v);
       }},
      {"sim.horizon",
       [](ScenarioConfig& c, const std::string& v) {
         c.sim_horizon = units::parse_duration(v);
       }},
      {"sim.replications",
       [](ScenarioConfig& c, const std::string& v) {
         c.sim_replications = parse_int(v);
       }},
      {"sim.sensing_time",
       [](ScenarioConfig& c, const std::string& v) {
         c.hd_sensing_time = units::parse_duration(v);
       }},
      {"seed",
       [](ScenarioConfig& c, const std::string& v) {
         c.seed = parse_u64(v);
       }},
  };
  return table;
}

}  // namespace

void ScenarioConfig::apply(const std::string& key, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
  try {
    it->second(*this, value);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

void ScenarioConfig::finalize() {
  analysis.seed = seed;
  optimizer.seed = seed;
  optimizer.workers = analysis.workers;
  optimizer.tabulated_curves = analysis.tabulated_curves;
  optimizer.perfect_sensing = analysis.perfect_sensing;
}

bool is_known_scenario_key(const std::string& key) {
  return setters().count(key) > 0;
}

std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("expected key=value, got '" + text + "'");
  }
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  ScenarioConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      auto [key, value] = split_assignment(line);
      cfg.apply(key, value);
    } catch (const std::exception& e) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
  cfg.finalize();
  return cfg;
}

std::vector<std::pair<std::string, std::string>> ScenarioConfig::effective()
    const {
  auto d = [](double v) { return CsvWriter::format_double(v); };
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("num_su_pairs", std::to_string(net.num_su_pairs));
  out.emplace_back("target_detection_prob", d(net.target_detection_prob));
  out.emplace_back("pu.mean_idle_s", d(net.pu.mean_idle));
  out.emplace_back("pu.mean_active_s", d(net.pu.mean_active));
  out.emplace_back("pu.min_idle_s", d(net.pu.min_idle));
  out.emplace_back("pu.min_active_s", d(net.pu.min_active));
  out.emplace_back("pu.evacuation_time_s", d(net.pu.evacuation_time));
  out.emplace_back("mac.mini_slot_s", d(net.mac.mini_slot));
  out.emplace_back("mac.sifs_s", d(net.mac.sifs));
  out.emplace_back("mac.difs_s", d(net.mac.difs));
  out.emplace_back("mac.rts_s", d(net.mac.rts));
  out.emplace_back("mac.cts_s", d(net.mac.cts));
  out.emplace_back("mac.contention_window",
                   std::to_string(net.mac.contention_window));
  out.emplace_back("mac.max_contention_window",
                   std::to_string(net.mac.max_contention_window));
  out.emplace_back("mac.fragments_per_packet",
                   std::to_string(net.mac.fragments_per_packet));
  out.emplace_back("mac.fragment_time_s", d(net.mac.fragment_time));
  out.emplace_back("radio.tx_power_lin", d(net.radio.tx_power));
  out.emplace_back("radio.max_tx_power_lin", d(net.radio.max_tx_power));
  out.emplace_back("radio.noise_power_lin", d(net.radio.noise_power));
  out.emplace_back("radio.pu_received_power_lin",
                   d(net.radio.pu_received_power));
  out.emplace_back("radio.si_scale", d(net.radio.si_scale));
  out.emplace_back("radio.si_exponent", d(net.radio.si_exponent));
  out.emplace_back("radio.sampling_frequency_hz",
                   d(net.radio.sampling_frequency));
  out.emplace_back("flags.prob_idle_uses_shift",
                   net.flags.prob_idle_uses_shift ? "true" : "false");
  out.emplace_back("flags.receiver_self_interference",
                   net.flags.receiver_self_interference ? "true" : "false");
  out.emplace_back("flags.count_first_fragment",
                   net.flags.count_first_fragment ? "true" : "false");
  out.emplace_back("analysis.samples", std::to_string(analysis.samples));
  out.emplace_back("analysis.backend",
                   analysis.backend == AnalysisBackend::MonteCarlo
                       ? "mc"
                       : "quadrature");
  out.emplace_back("analysis.tabulated_curves",
                   analysis.tabulated_curves ? "true" : "false");
  out.emplace_back("analysis.perfect_sensing",
                   analysis.perfect_sensing ? "true" : "false");
  out.emplace_back("optimizer.samples", std::to_string(optimizer.samples));
  out.emplace_back("optimizer.t_grid_points",
                   std::to_string(optimizer.t_grid_points));
  out.emplace_back("sim.warmup_cycles", std::to_string(sim.warmup_cycles));
  out.emplace_back("sim.include_ack", sim.include_ack ? "true" : "false");
  out.emplace_back("sim.ack_s", d(sim.ack));
  out.emplace_back("sim.horizon_s", d(sim_horizon));
  out.emplace_back("sim.replications", std::to_string(sim_replications));
  out.emplace_back("sim.sensing_time_s", d(hd_sensing_time));
  out.emplace_back("seed", std::to_string(seed));
  return out;
}

}  // namespace fdmac
