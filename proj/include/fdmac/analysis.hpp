#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fdmac/config.hpp"
#include "fdmac/fragment_rate.hpp"
#include "fdmac/patterns.hpp"
#include "fdmac/sensing.hpp"

namespace fdmac {

// Probability that exactly one station wins the contention with a backoff
// counter equal to i0: everyone else must draw a strictly larger counter.
double contention_success_prob(int i0, int n0, int W);

// Time spent on backoff and the reservation handshake before the data
// phase when winning at slot i0.
double reservation_overhead(int i0, const MacTimingConfig& mac);

// The renewal intervals between consecutive channel state changes inside
// one reservation cycle, measured from the cycle start; the last entry is
// the open interval extending past the data phase.
struct ChangeInstantVector {
  std::vector<double> intervals;
};

// In-fragment transition instants (one per change fragment of a pattern),
// derived from the interval vector and the fragment grid offset.
struct LocalizedChanges {
  bool valid = false;                    // every change lands in its fragment
  std::vector<double> local_times;       // in [0, T], per change fragment
};

LocalizedChanges localize_changes(const PuPattern& pattern,
                                  const ChangeInstantVector& t_vec,
                                  double overhead_time,
                                  const MacTimingConfig& mac);

// Per-fragment busy-verdict probabilities and bit yields for a calibrated
// operating point. Mixed events can be answered from either the exact
// closed forms or from dense lookup tables (the Monte Carlo fast path).
class SensingCurves {
 public:
  SensingCurves(const RadioConfig& radio, const SensingCalibration& calib,
                const ModelFlags& flags, bool tabulated, bool perfect = false);

  double busy_prob(PuEvent event, double local_t, SensingMode mode) const;
  double bits(PuEvent event, double local_t) const;
  double fragment_time() const { return fragment_time_; }
  double rate_idle() const { return rate_idle_; }
  bool count_first_fragment() const { return count_first_; }

  // Expected bits of one data phase given the realized events, summing
  // over every joint verdict assignment; linear in the fragment count.
  double expected_phase_bits(const PuEvent* events, const double* local_times,
                             int fragments) const;

 private:
  double exact_busy_prob(PuEvent event, double local_t,
                         SensingMode mode) const;

  struct Table {
    double scale = 0.0;
    std::vector<double> values;
    double eval(double t) const;
  };

  double fragment_time_ = 0.0;
  bool count_first_ = true;
  bool perfect_ = false;
  bool tabulated_ = false;
  RadioConfig radio_fd_;  // tx_power pinned to the calibrated point
  double threshold_fd_ = 0.0;
  double threshold_hd_ = 0.0;
  double busy_idle_whole_[2];    // StaysIdle, per mode
  double busy_active_whole_[2];  // StaysActive, per mode
  double rate_idle_ = 0.0;
  double rate_busy_ = 0.0;
  Table becomes_active_[2];
  Table becomes_idle_[2];
};

// Joint probability of one verdict assignment and the bits it delivers,
// for a fixed pattern and transition instants. The verdict chain picks
// full-duplex curves while the station is transmitting and half-duplex
// curves after a busy verdict silenced it.
struct OutcomeTerm {
  double probability = 0.0;
  double bits = 0.0;
};

OutcomeTerm outcome_probability_and_bits(const PuPattern& pattern,
                                         const SensingOutcomeSet& outcome,
                                         const std::vector<double>& local_times,
                                         const SensingCurves& curves);

enum class AnalysisBackend { MonteCarlo, Quadrature };

struct AnalysisOptions {
  long samples = 200000;
  std::uint64_t seed = 1;
  int workers = 0;  // 0 = all hardware threads
  AnalysisBackend backend = AnalysisBackend::MonteCarlo;
  bool tabulated_curves = true;  // Monte Carlo fast path
  bool perfect_sensing = false;
  double quadrature_tol = 1e-8;
};

struct ConditionalThroughput {
  double value = 0.0;      // expected data-phase bits/Hz for a win at i0
  double std_error = 0.0;  // Monte Carlo only
  double quad_error = 0.0; // quadrature only
};

ConditionalThroughput conditional_throughput(int i0, const NetworkConfig& cfg,
                                             const SensingCalibration& calib,
                                             const AnalysisOptions& options);

struct BackoffTerm {
  int i0 = 0;
  double success_prob = 0.0;
  double overhead_time = 0.0;
  double conditional_bits = 0.0;
};

struct ThroughputReport {
  double normalized_throughput = 0.0;
  double std_error = 0.0;       // of normalized_throughput
  double relative_error = 0.0;  // std_error / normalized_throughput
  std::vector<BackoffTerm> per_backoff;
  SensingCalibration calibration;
};

ThroughputReport normalized_throughput(const NetworkConfig& cfg,
                                       const AnalysisOptions& options);

// Holds one set of channel renewal draws so that every configuration
// evaluated during a search sees the same randomness.
class ThroughputEngine {
 public:
  // max_fragment_time and max_window bound the horizon the cached draws
  // must cover across all later evaluate() calls.
  ThroughputEngine(const NetworkConfig& base, const AnalysisOptions& options,
                   double max_fragment_time, int max_window);

  ThroughputReport evaluate(double fragment_time, int window,
                            double tx_power) const;

  // Diagnostic: fraction of draws whose first state change lands at or
  // beyond the start of the data phase for every backoff slot, i.e. the
  // total mass carried by the enumerable patterns.
  double pattern_mass(double fragment_time, int window) const;

  const NetworkConfig& base_config() const { return base_; }

 private:
  friend ConditionalThroughput conditional_throughput(
      int, const NetworkConfig&, const SensingCalibration&,
      const AnalysisOptions&);

  struct Accumulated {
    std::vector<double> per_i0_sum;
    double nt_sum = 0.0;
    double nt_sq_sum = 0.0;
  };

  Accumulated accumulate(const NetworkConfig& cfg,
                         const SensingCurves& curves, int window,
                         const std::vector<double>& weights,
                         const std::vector<double>& weight_prefix) const;

  NetworkConfig base_;
  AnalysisOptions options_;
  double horizon_ = 0.0;
  // change instants per draw, concatenated; offsets_[s]..offsets_[s+1]
  std::vector<double> change_times_;
  std::vector<std::uint32_t> offsets_;
};

}  // namespace fdmac
