#include "fdmac/config.hpp"

#include <cmath>
#include <sstream>

namespace fdmac {

namespace {

void add(std::vector<std::string>* out, const std::string& msg) {
  out->push_back(msg);
}

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

void PuActivityModel::collect_violations(std::vector<std::string>* out) const {
  if (!(mean_idle > 0.0)) add(out, "pu.mean_idle must be > 0");
  if (!(mean_active > 0.0)) add(out, "pu.mean_active must be > 0");
  if (!(min_idle > 0.0)) add(out, "pu.min_idle must be > 0");
  if (!(min_active > 0.0)) add(out, "pu.min_active must be > 0");
  if (!(evacuation_time > 0.0)) add(out, "pu.evacuation_time must be > 0");
  if (min_idle < evacuation_time) {
    add(out, "pu.min_idle (" + num(min_idle) +
                 "s) must be >= pu.evacuation_time (" + num(evacuation_time) +
                 "s)");
  }
  if (min_active < evacuation_time) {
    add(out, "pu.min_active (" + num(min_active) +
                 "s) must be >= pu.evacuation_time (" + num(evacuation_time) +
                 "s)");
  }
}

double prob_idle(const PuActivityModel& pu, bool include_min_in_means) {
  const double idle =
      include_min_in_means ? pu.min_idle + pu.mean_idle : pu.mean_idle;
  const double active =
      include_min_in_means ? pu.min_active + pu.mean_active : pu.mean_active;
  return idle / (idle + active);
}

double prob_busy(const PuActivityModel& pu, bool include_min_in_means) {
  return 1.0 - prob_idle(pu, include_min_in_means);
}

void MacTimingConfig::collect_violations(std::vector<std::string>* out) const {
  if (!(mini_slot > 0.0)) add(out, "mac.mini_slot must be > 0");
  if (!(sifs > 0.0)) add(out, "mac.sifs must be > 0");
  if (!(difs > 0.0)) add(out, "mac.difs must be > 0");
  if (!(rts > 0.0)) add(out, "mac.rts must be > 0");
  if (!(cts > 0.0)) add(out, "mac.cts must be > 0");
  if (contention_window < 1) add(out, "mac.contention_window must be >= 1");
  if (max_contention_window < 1) {
    add(out, "mac.max_contention_window must be >= 1");
  }
  if (contention_window > max_contention_window) {
    add(out, "mac.contention_window (" + std::to_string(contention_window) +
                 ") must be <= mac.max_contention_window (" +
                 std::to_string(max_contention_window) + ")");
  }
  if (fragments_per_packet < 1) {
    add(out, "mac.fragments_per_packet must be >= 1");
  }
  if (!(fragment_time > 0.0)) add(out, "mac.fragment_time must be > 0");
}

void RadioConfig::collect_violations(std::vector<std::string>* out) const {
  if (!(tx_power > 0.0)) add(out, "radio.tx_power must be > 0");
  if (!(max_tx_power > 0.0)) add(out, "radio.max_tx_power must be > 0");
  if (tx_power > max_tx_power) {
    add(out, "radio.tx_power (" + num(tx_power) +
                 ") must be <= radio.max_tx_power (" + num(max_tx_power) + ")");
  }
  if (!(noise_power > 0.0)) add(out, "radio.noise_power must be > 0");
  if (!(pu_received_power > 0.0)) {
    add(out, "radio.pu_received_power must be > 0");
  }
  if (si_scale < 0.0) add(out, "radio.si_scale must be >= 0");
  if (si_exponent < 0.0 || si_exponent > 1.0) {
    add(out, "radio.si_exponent must lie in [0, 1]");
  }
  if (!(sampling_frequency > 0.0)) {
    add(out, "radio.sampling_frequency must be > 0");
  }
}

std::vector<std::string> NetworkConfig::violations() const {
  std::vector<std::string> out;
  if (num_su_pairs < 1) add(&out, "num_su_pairs must be >= 1");
  if (!(target_detection_prob > 0.0 && target_detection_prob < 1.0)) {
    add(&out, "target_detection_prob must lie in (0, 1)");
  }
  pu.collect_violations(&out);
  mac.collect_violations(&out);
  radio.collect_violations(&out);
  if (mac.fragment_time > pu.evacuation_time) {
    add(&out, "mac.fragment_time (" + num(mac.fragment_time) +
                  "s) must be <= pu.evacuation_time (" +
                  num(pu.evacuation_time) + "s)");
  }
  return out;
}

void NetworkConfig::validate() const {
  auto list = violations();
  if (list.empty()) return;
  std::string msg = "invalid configuration:";
  for (const auto& v : list) {
    msg += "\n  - " + v;
  }
  throw ConfigError(msg);
}

}  // namespace fdmac
