#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdmac/math.hpp"

namespace fdmac {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Channel occupancy model: idle and active holding times are shifted
// exponentials, both at least as long as the evacuation deadline.
struct PuActivityModel {
  double mean_idle = 1.0;         // seconds, mean of the exponential part
  double mean_active = 0.1;       // seconds
  double min_idle = 0.045;        // seconds, hard minimum idle duration
  double min_active = 0.040;      // seconds
  double evacuation_time = 0.040;  // seconds

  ShiftedExponential idle_distribution() const {
    return ShiftedExponential(mean_idle, min_idle);
  }
  ShiftedExponential active_distribution() const {
    return ShiftedExponential(mean_active, min_active);
  }

  void collect_violations(std::vector<std::string>* out) const;
};

// Stationary probability that the channel is idle. With
// include_min_in_means (the default) the hard minimum durations are part
// of the mean cycle lengths, which is the renewal-theoretic time fraction;
// the alternative uses only the exponential-part means.
double prob_idle(const PuActivityModel& pu, bool include_min_in_means = true);
double prob_busy(const PuActivityModel& pu, bool include_min_in_means = true);

struct MacTimingConfig {
  double mini_slot = 20e-6;   // seconds, one backoff counter unit
  double sifs = 10e-6;        // seconds
  double difs = 50e-6;        // seconds
  double rts = 352e-6;        // seconds
  double cts = 304e-6;        // seconds
  int contention_window = 1024;      // W
  int max_contention_window = 1024;  // W_max
  int fragments_per_packet = 4;      // number of equal data fragments
  double fragment_time = 0.018;      // seconds, also the sensing window

  double packet_time() const { return fragments_per_packet * fragment_time; }

  void collect_violations(std::vector<std::string>* out) const;
};

struct RadioConfig {
  double tx_power = 10.0;           // linear, noise-normalized
  double max_tx_power = 316.227766; // linear (25 dB)
  double noise_power = 1.0;         // linear, normalized to one
  double pu_received_power = 0.01;  // linear (-20 dB)
  double si_scale = 0.4;            // residual self-interference scale
  double si_exponent = 0.95;        // residual self-interference exponent
  double sampling_frequency = 6e6;  // Hz

  // Residual self-interference power while transmitting at tx_power.
  double self_interference(double tx) const {
    return si_scale * std::pow(tx, si_exponent);
  }
  double self_interference() const { return self_interference(tx_power); }

  void collect_violations(std::vector<std::string>* out) const;
};

// Modeling choices the analysis leaves open; both readings of each are
// implemented and selectable.
struct ModelFlags {
  // Include the hard minimum durations in the idle/active mean cycle
  // lengths when computing the stationary idle probability.
  bool prob_idle_uses_shift = true;
  // Data receiver also suffers the residual self-interference.
  bool receiver_self_interference = true;
  // The first fragment of a packet contributes its bits to throughput
  // (it always transmits; this controls only the accounting).
  bool count_first_fragment = true;
};

struct NetworkConfig {
  int num_su_pairs = 40;               // contending transmitter pairs
  double target_detection_prob = 0.8;  // required average detection level
  PuActivityModel pu;
  MacTimingConfig mac;
  RadioConfig radio;
  ModelFlags flags;

  std::vector<std::string> violations() const;
  void validate() const;  // throws ConfigError listing every violation
};

}  // namespace fdmac
