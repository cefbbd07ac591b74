#include "fdmac/simulator.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "fdmac/fragment_rate.hpp"

namespace fdmac {

void EventQueue::push(double time, int priority, SimEventKind kind,
                      std::uint64_t generation) {
  SimEvent ev;
  ev.time = time;
  ev.priority = priority;
  ev.seq = next_seq_++;
  ev.kind = kind;
  ev.generation = generation;
  heap_.push(ev);
}

SimEvent EventQueue::pop() {
  SimEvent ev = heap_.top();
  heap_.pop();
  return ev;
}

namespace {

constexpr int kPuPriority = 0;
constexpr int kSuPriority = 1;

// Parked covers gaps where a RoundStart event is already queued (collision
// aftermath, inter-packet spacing); channel changes there must not open a
// round of their own.
enum class MacPhase { WaitingIdle, Parked, Contending, Handshake, Data };

class Simulation {
 public:
  Simulation(const NetworkConfig& cfg, const SensingCalibration& calib,
             double horizon, std::uint64_t seed, const SimOptions& options,
             bool half_duplex, double sensing_time)
      : cfg_(cfg),
        options_(options),
        horizon_(horizon),
        half_duplex_(half_duplex),
        sensing_time_(sensing_time),
        curves_(cfg.radio, calib, cfg.flags, /*tabulated=*/false,
                options.perfect_sensing),
        rates_(FragmentRates::from_radio(
            cfg.radio, calib.tx_power,
            half_duplex ? false : cfg.flags.receiver_self_interference)),
        idle_dist_(cfg.pu.idle_distribution()),
        active_dist_(cfg.pu.active_distribution()),
        rng_(seed),
        stations_(cfg.num_su_pairs) {
    cfg_.validate();
    if (half_duplex_) {
      if (!(sensing_time_ > 0.0 && sensing_time_ < cfg.mac.fragment_time)) {
        throw std::invalid_argument(
            "sensing time must lie strictly inside the fragment");
      }
      if (std::abs(calib.fragment_time - sensing_time_) > 1e-12) {
        throw std::invalid_argument(
            "half-duplex calibration must use the sensing slice as its "
            "window");
      }
    } else if (std::abs(calib.fragment_time - cfg.mac.fragment_time) >
               1e-12) {
      throw std::invalid_argument(
          "calibration window does not match the fragment time");
    }
  }

  SimStats run() {
    schedule_pu_change(idle_dist_.sample(uniform()));
    start_round(0.0);

    while (!queue_.empty()) {
      const SimEvent ev = queue_.pop();
      if (ev.time > horizon_) break;
      switch (ev.kind) {
        case SimEventKind::PuStateChange:
          on_pu_change(ev.time);
          break;
        case SimEventKind::ContentionComplete:
          if (ev.generation == contention_generation_) {
            on_contention_complete(ev.time);
          }
          break;
        case SimEventKind::HandshakeDone:
          on_handshake_done(ev.time);
          break;
        case SimEventKind::FragmentEnd:
          on_fragment_end(ev.time);
          break;
        case SimEventKind::RoundStart:
          start_round(ev.time);
          break;
      }
    }

    finalize_activation();
    if (stats_.cycles < 1) {
      throw std::runtime_error(
          "horizon too short: no data phase completed after warm-up");
    }
    stats_.elapsed = horizon_ - stats_origin_;
    return stats_;
  }

 private:
  double uniform() { return rng_.next_double(); }

  int draw_counter() {
    return static_cast<int>(uniform() * cfg_.mac.contention_window);
  }

  void schedule_pu_change(double at) {
    queue_.push(at, kPuPriority, SimEventKind::PuStateChange);
  }

  void finalize_activation() {
    if (!activation_seen_) return;
    stats_.max_activation_interference = std::max(
        stats_.max_activation_interference, activation_interference_);
    if (activation_interference_ > cfg_.mac.fragment_time + 1e-9) {
      ++stats_.protection_violations;
    }
    activation_seen_ = false;
  }

  void on_pu_change(double now) {
    pu_active_ = !pu_active_;
    if (pu_active_) {
      // A fresh activation: close out the previous one.
      finalize_activation();
      activation_seen_ = true;
      activation_interference_ = 0.0;
      ++stats_.pu_activations;
      active_since_ = now;
      schedule_pu_change(now + active_dist_.sample(uniform()));
    } else {
      stats_.pu_active_time += now - active_since_;
      schedule_pu_change(now + idle_dist_.sample(uniform()));
    }

    if (phase_ == MacPhase::Data) {
      ++fragment_changes_;
      fragment_change_time_ = now;
      return;
    }
    if (phase_ == MacPhase::Contending) {
      assert(pu_active_);  // the channel was idle while counting down
      freeze_contention(now);
      return;
    }
    if (phase_ == MacPhase::WaitingIdle && !pu_active_) {
      begin_contention(now);
    }
  }

  // --- contention ------------------------------------------------------

  void start_round(double now) {
    if (pu_active_) {
      phase_ = MacPhase::WaitingIdle;
      return;
    }
    begin_contention(now);
  }

  void begin_contention(double now) {
    phase_ = MacPhase::Contending;
    if (!round_open_) {
      // Fresh round: every station draws a new counter.
      round_open_ = true;
      int min_counter = cfg_.mac.contention_window;
      for (auto& su : stations_) {
        su.backoff_counter = draw_counter();
        su.frozen = false;
        su.transmitting = false;
        min_counter = std::min(min_counter, su.backoff_counter);
      }
      remaining_min_ = min_counter;
      trace_.start = now;
      trace_.drawn_slot = min_counter;
      trace_.freezes = 0;
    } else {
      for (auto& su : stations_) su.frozen = false;
    }
    contention_resume_ = now;
    queue_.push(now + cfg_.mac.difs + remaining_min_ * cfg_.mac.mini_slot,
                kSuPriority, SimEventKind::ContentionComplete,
                ++contention_generation_);
  }

  void freeze_contention(double now) {
    const double elapsed = now - contention_resume_ - cfg_.mac.difs;
    int consumed = 0;
    if (elapsed > 0.0) {
      consumed = std::min(remaining_min_,
                          static_cast<int>(elapsed / cfg_.mac.mini_slot));
    }
    for (auto& su : stations_) {
      su.backoff_counter -= consumed;
      su.frozen = true;
    }
    remaining_min_ -= consumed;
    ++trace_.freezes;
    ++contention_generation_;  // invalidate the scheduled completion
    phase_ = MacPhase::WaitingIdle;
  }

  void on_contention_complete(double now) {
    round_open_ = false;
    trace_.complete = now;
    int winners = 0;
    int winner = -1;
    for (int i = 0; i < static_cast<int>(stations_.size()); ++i) {
      if (stations_[i].backoff_counter == remaining_min_) {
        ++winners;
        winner = i;
      }
    }
    if (winners > 1) {
      // Colliding reservation frames occupy the channel, then everyone
      // redraws.
      ++stats_.collisions;
      trace_.collision = true;
      record_round();
      queue_.push(now + cfg_.mac.rts, kSuPriority, SimEventKind::RoundStart);
      phase_ = MacPhase::Parked;
      return;
    }
    trace_.collision = false;
    record_round();
    winner_ = winner;
    phase_ = MacPhase::Handshake;
    queue_.push(now + cfg_.mac.rts + cfg_.mac.sifs + cfg_.mac.cts +
                    cfg_.mac.sifs,
                kSuPriority, SimEventKind::HandshakeDone);
  }

  void record_round() {
    if (static_cast<int>(stats_.rounds.size()) < options_.record_rounds) {
      stats_.rounds.push_back(trace_);
    }
  }

  // --- data phase ------------------------------------------------------

  void on_handshake_done(double now) {
    phase_ = MacPhase::Data;
    fragment_index_ = 0;
    fragment_start_ = now;
    fragment_start_active_ = pu_active_;
    fragment_changes_ = 0;
    transmitting_ = true;  // first fragment of the reservation
    stations_[winner_].transmitting = true;
    stations_[winner_].sensing_mode = SensingMode::FullDuplex;
    queue_.push(now + cfg_.mac.fragment_time, kSuPriority,
                SimEventKind::FragmentEnd);
  }

  void classify_window(double window, double* local, PuEvent* event) const {
    // At most one state change fits in a fragment, because the minimum
    // holding times are at least the fragment length.
    assert(fragment_changes_ <= 1);
    if (fragment_changes_ == 0) {
      *event = fragment_start_active_ ? PuEvent::StaysActive
                                      : PuEvent::StaysIdle;
      *local = 0.0;
      return;
    }
    const double u = fragment_change_time_ - fragment_start_;
    if (u <= window) {
      *event = fragment_start_active_ ? PuEvent::BecomesIdle
                                      : PuEvent::BecomesActive;
      *local = u;
    } else {
      *event = fragment_start_active_ ? PuEvent::StaysActive
                                      : PuEvent::StaysIdle;
      *local = 0.0;
    }
  }

  void on_fragment_end(double now) {
    const double T = cfg_.mac.fragment_time;

    PuEvent fragment_event;
    double change_local = 0.0;
    classify_window(T, &change_local, &fragment_event);

    const double sense_window = half_duplex_ ? sensing_time_ : T;
    PuEvent sense_event;
    double sense_local = 0.0;
    classify_window(sense_window, &sense_local, &sense_event);

    if (half_duplex_) {
      hd_fragment(sense_event, sense_local);
    } else {
      fd_fragment(fragment_event, change_local, sense_event, sense_local);
    }

    if (++fragment_index_ >= cfg_.mac.fragments_per_packet) {
      complete_cycle(now);
      return;
    }
    fragment_start_ = now;
    fragment_start_active_ = pu_active_;
    fragment_changes_ = 0;
    queue_.push(now + T, kSuPriority, SimEventKind::FragmentEnd);
  }

  void fd_fragment(PuEvent event, double local, PuEvent sense_event,
                   double sense_local) {
    const double T = cfg_.mac.fragment_time;
    if (transmitting_) {
      stats_.bits_delivered += fragment_bits(event, local, T, rates_);
      add_interference(event, local, T);
    }
    const SensingMode mode = transmitting_ ? SensingMode::FullDuplex
                                           : SensingMode::HalfDuplex;
    const double p_busy = curves_.busy_prob(sense_event, sense_local, mode);
    const bool verdict_busy = uniform() < p_busy;
    tally_verdict(sense_event, verdict_busy);
    transmitting_ = !verdict_busy;
    stations_[winner_].transmitting = transmitting_;
    stations_[winner_].sensing_mode = mode;
  }

  void hd_fragment(PuEvent sense_event, double sense_local) {
    const double T = cfg_.mac.fragment_time;
    const double p_busy =
        curves_.busy_prob(sense_event, sense_local, SensingMode::HalfDuplex);
    const bool verdict_busy = uniform() < p_busy;
    tally_verdict(sense_event, verdict_busy);
    if (verdict_busy) return;  // silent for the rest of the fragment

    // Transmit the tail (sensing_time_, T]; split it at the state change
    // when one landed inside.
    const double tail_start = sensing_time_;
    double active_part = 0.0;
    double idle_part = 0.0;
    const double tail = T - tail_start;
    bool start_active = fragment_start_active_;
    double change_u = -1.0;
    if (fragment_changes_ == 1) {
      change_u = fragment_change_time_ - fragment_start_;
    }
    if (change_u < 0.0 || change_u <= tail_start) {
      const bool state = change_u < 0.0 ? start_active : !start_active;
      (state ? active_part : idle_part) = tail;
    } else {
      const double before = change_u - tail_start;
      const double after = T - change_u;
      (start_active ? active_part : idle_part) += before;
      (start_active ? idle_part : active_part) += after;
    }
    stats_.bits_delivered += idle_part * rates_.rate_idle() +
                             active_part * rates_.rate_busy();
    if (active_part > 0.0) {
      stats_.pu_interference_time += active_part;
      activation_interference_ += active_part;
    }
  }

  void add_interference(PuEvent event, double local, double T) {
    double overlap = 0.0;
    switch (event) {
      case PuEvent::StaysActive: overlap = T; break;
      case PuEvent::BecomesActive: overlap = T - local; break;
      case PuEvent::BecomesIdle: overlap = local; break;
      case PuEvent::StaysIdle: return;
    }
    stats_.pu_interference_time += overlap;
    activation_interference_ += overlap;
  }

  void tally_verdict(PuEvent event, bool verdict_busy) {
    const bool ends_active = event == PuEvent::StaysActive ||
                             event == PuEvent::BecomesActive;
    if (ends_active && !verdict_busy) ++stats_.missed_detections;
    if (!ends_active && verdict_busy) ++stats_.false_alarm_stalls;
  }

  void complete_cycle(double now) {
    stations_[winner_].transmitting = false;
    ++cycles_total_;
    if (cycles_total_ == options_.warmup_cycles) {
      reset_stats(now);
    } else if (cycles_total_ > options_.warmup_cycles) {
      ++stats_.cycles;
    }
    double next = now;
    if (options_.include_ack) next += cfg_.mac.sifs + options_.ack;
    queue_.push(next, kSuPriority, SimEventKind::RoundStart);
    phase_ = MacPhase::Parked;
  }

  void reset_stats(double now) {
    const auto rounds = stats_.rounds;
    stats_ = SimStats{};
    stats_.rounds = rounds;
    stats_origin_ = now;
    activation_interference_ = 0.0;
    activation_seen_ = false;
  }

  // --- members ---------------------------------------------------------

  NetworkConfig cfg_;
  SimOptions options_;
  double horizon_;
  bool half_duplex_;
  double sensing_time_;
  SensingCurves curves_;
  FragmentRates rates_;
  ShiftedExponential idle_dist_;
  ShiftedExponential active_dist_;
  SplitMix64 rng_;
  EventQueue queue_;

  std::vector<SuState> stations_;
  MacPhase phase_ = MacPhase::WaitingIdle;
  bool pu_active_ = false;
  double active_since_ = 0.0;
  bool activation_seen_ = false;
  double activation_interference_ = 0.0;

  bool round_open_ = false;
  int remaining_min_ = 0;
  double contention_resume_ = 0.0;
  std::uint64_t contention_generation_ = 0;
  ContentionRoundTrace trace_;
  int winner_ = -1;

  int fragment_index_ = 0;
  double fragment_start_ = 0.0;
  bool fragment_start_active_ = false;
  int fragment_changes_ = 0;
  double fragment_change_time_ = 0.0;
  bool transmitting_ = false;

  long cycles_total_ = 0;
  double stats_origin_ = 0.0;
  SimStats stats_;
};

}  // namespace

SimStats run_fd(const NetworkConfig& cfg, const SensingCalibration& calib,
                double horizon, std::uint64_t seed,
                const SimOptions& options) {
  Simulation sim(cfg, calib, horizon, seed, options, /*half_duplex=*/false,
                 /*sensing_time=*/0.0);
  return sim.run();
}

SimStats run_hd(const NetworkConfig& cfg, const SensingCalibration& calib_hd,
                double sensing_time, double horizon, std::uint64_t seed,
                const SimOptions& options) {
  Simulation sim(cfg, calib_hd, horizon, seed, options, /*half_duplex=*/true,
                 sensing_time);
  return sim.run();
}

CollisionModelStats measure_collision_model(const NetworkConfig& cfg,
                                            double horizon,
                                            std::uint64_t seed) {
  cfg.validate();
  const int n0 = cfg.num_su_pairs;
  const int window = cfg.mac.contention_window;
  const double handshake =
      cfg.mac.rts + cfg.mac.cts + 2.0 * cfg.mac.sifs;
  const double packet = cfg.mac.packet_time();

  CollisionModelStats stats;
  stats.wins.assign(window, 0);
  SplitMix64 rng(seed);
  double t = 0.0;
  while (t < horizon) {
    int min_counter = window;
    int winners = 0;
    int winner_slot = 0;
    for (int i = 0; i < n0; ++i) {
      const int counter = static_cast<int>(rng.next_double() * window);
      if (counter < min_counter) {
        min_counter = counter;
        winners = 1;
        winner_slot = counter;
      } else if (counter == min_counter) {
        ++winners;
      }
    }
    ++stats.rounds;
    t += cfg.mac.difs + min_counter * cfg.mac.mini_slot;
    if (winners == 1) {
      ++stats.wins[winner_slot];
      t += handshake + packet;
    } else {
      ++stats.collisions;
      t += cfg.mac.rts;
    }
  }
  return stats;
}

}  // namespace fdmac
