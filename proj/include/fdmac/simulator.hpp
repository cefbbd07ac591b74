#pragma once

#include <cstdint>
#include <queue>
#include <vector>

#include "fdmac/analysis.hpp"
#include "fdmac/config.hpp"
#include "fdmac/sensing.hpp"

namespace fdmac {

enum class SimEventKind {
  PuStateChange = 0,
  ContentionComplete,
  HandshakeDone,
  FragmentEnd,
  RoundStart,
};

struct SimEvent {
  double time = 0.0;
  int priority = 0;  // channel state changes outrank station decisions
  std::uint64_t seq = 0;
  SimEventKind kind = SimEventKind::PuStateChange;
  std::uint64_t generation = 0;  // stale-event guard for the countdown
};

// Time-ordered pending events; ties resolved by priority (channel state
// changes first), then by insertion order.
class EventQueue {
 public:
  void push(double time, int priority, SimEventKind kind,
            std::uint64_t generation = 0);
  SimEvent pop();
  bool empty() const { return heap_.empty(); }

 private:
  struct Later {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.priority != b.priority) return a.priority > b.priority;
      return a.seq > b.seq;
    }
  };
  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> heap_;
  std::uint64_t next_seq_ = 0;
};

// Per-station MAC state; a single backoff stage is modeled, so the
// contention window never grows.
struct SuState {
  int backoff_counter = 0;
  int backoff_stage = 0;  // single-stage backoff: always zero
  bool frozen = false;
  bool transmitting = false;
  SensingMode sensing_mode = SensingMode::FullDuplex;
};

struct ContentionRoundTrace {
  double start = 0.0;
  int drawn_slot = 0;     // minimum drawn counter for the round
  int freezes = 0;        // busy interruptions during the countdown
  double complete = 0.0;  // countdown expiry (RTS start)
  bool collision = false;
};

struct SimStats {
  double bits_delivered = 0.0;  // bits/Hz after warm-up
  double elapsed = 0.0;         // measured time span, seconds
  long cycles = 0;              // completed data phases after warm-up
  long collisions = 0;
  long missed_detections = 0;   // idle verdict while the channel ended active
  long false_alarm_stalls = 0;  // busy verdict while the channel ended idle
  double pu_interference_time = 0.0;  // transmit time overlapping activity
  long pu_activations = 0;
  double max_activation_interference = 0.0;
  long protection_violations = 0;  // activations suffering more than one
                                   // fragment of interference
  double pu_active_time = 0.0;
  std::vector<ContentionRoundTrace> rounds;

  double measured_nt() const {
    return elapsed > 0.0 ? bits_delivered / elapsed : 0.0;
  }
};

struct SimOptions {
  int warmup_cycles = 100;
  bool perfect_sensing = false;
  bool include_ack = false;
  double ack = 304e-6;     // seconds, appended after each packet with a SIFS
  int record_rounds = 0;   // keep traces for the first N contention rounds
};

// Full-duplex MAC: contention, reservation handshake, then a fragmented
// data phase with a sensing verdict at every fragment boundary. A busy
// verdict silences the next fragment (sensing continues half-duplex).
SimStats run_fd(const NetworkConfig& cfg, const SensingCalibration& calib,
                double horizon, std::uint64_t seed,
                const SimOptions& options = {});

// Half-duplex baseline: every fragment opens with a silent sensing slice
// of sensing_time and transmits the remainder only on an idle verdict.
// calib_hd must be calibrated for a window of sensing_time.
SimStats run_hd(const NetworkConfig& cfg, const SensingCalibration& calib_hd,
                double sensing_time, double horizon, std::uint64_t seed,
                const SimOptions& options = {});

struct CollisionModelStats {
  long rounds = 0;
  long collisions = 0;
  std::vector<long> wins;  // unique-winner count per backoff slot

  double win_frequency(int i0) const {
    return rounds > 0 ? static_cast<double>(wins[i0]) / rounds : 0.0;
  }
  double collision_frequency() const {
    return rounds > 0 ? static_cast<double>(collisions) / rounds : 0.0;
  }
};

// Contention rounds in isolation (channel held idle): empirical winner
// distribution for validating the per-slot success probabilities.
CollisionModelStats measure_collision_model(const NetworkConfig& cfg,
                                            double horizon,
                                            std::uint64_t seed);

}  // namespace fdmac
