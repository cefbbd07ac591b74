#include "fdmac/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fdmac/quadrature.hpp"

namespace fdmac {

namespace {

constexpr int kCurveTablePoints = 4097;
constexpr int kChunks = 64;

void check_slot_index(int i0, int W) {
  if (i0 < 0 || i0 >= W) {
    throw std::invalid_argument("backoff slot index must lie in [0, W-1]");
  }
}

template <class Fn>
void parallel_chunks(int chunks, int workers, Fn&& fn) {
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
  }
  workers = std::max(1, std::min(workers, chunks));
  if (workers == 1) {
    for (int c = 0; c < chunks; ++c) fn(c);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int c; (c = next.fetch_add(1)) < chunks;) fn(c);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

double contention_success_prob(int i0, int n0, int W) {
  if (W < 1) throw std::invalid_argument("contention window must be >= 1");
  if (n0 < 1) throw std::invalid_argument("station count must be >= 1");
  check_slot_index(i0, W);
  const double w = static_cast<double>(W);
  return n0 * (1.0 / w) *
         std::pow((w - 1.0 - i0) / w, static_cast<double>(n0 - 1));
}

double reservation_overhead(int i0, const MacTimingConfig& mac) {
  if (i0 < 0) throw std::invalid_argument("backoff slot index must be >= 0");
  return i0 * mac.mini_slot + 2.0 * mac.sifs + mac.rts + mac.cts + mac.difs;
}

LocalizedChanges localize_changes(const PuPattern& pattern,
                                  const ChangeInstantVector& t_vec,
                                  double overhead_time,
                                  const MacTimingConfig& mac) {
  const int changes = pattern.num_changes();
  if (static_cast<int>(t_vec.intervals.size()) < changes) {
    throw std::invalid_argument(
        "interval vector shorter than the pattern's change count");
  }
  const double T = mac.fragment_time;
  LocalizedChanges out;
  out.valid = true;
  out.local_times.reserve(changes);
  double cumulative = 0.0;
  for (int j = 0; j < changes; ++j) {
    cumulative += t_vec.intervals[j];
    const int fragment = pattern.change_fragments[j];
    const double local = cumulative - overhead_time - (fragment - 1) * T;
    if (local < 0.0 || local > T) out.valid = false;
    out.local_times.push_back(local);
  }
  // When the trailing open interval is supplied it must clear the end of
  // the data phase.
  if (static_cast<int>(t_vec.intervals.size()) > changes) {
    cumulative += t_vec.intervals[changes];
    const double phase_end =
        overhead_time + mac.fragments_per_packet * T;
    if (cumulative < phase_end) out.valid = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// SensingCurves

double SensingCurves::Table::eval(double t) const {
  double x = t * scale;
  const int last = static_cast<int>(values.size()) - 2;
  if (x <= 0.0) return values.front();
  int i = static_cast<int>(x);
  if (i > last) return values.back();
  const double f = x - i;
  return values[i] + f * (values[i + 1] - values[i]);
}

SensingCurves::SensingCurves(const RadioConfig& radio,
                             const SensingCalibration& calib,
                             const ModelFlags& flags, bool tabulated,
                             bool perfect)
    : fragment_time_(calib.fragment_time),
      count_first_(flags.count_first_fragment),
      perfect_(perfect),
      tabulated_(tabulated && !perfect),
      radio_fd_(radio),
      threshold_fd_(calib.threshold_fd),
      threshold_hd_(calib.threshold_hd) {
  if (!(fragment_time_ > 0.0)) {
    throw std::invalid_argument("calibration carries no fragment time");
  }
  radio_fd_.tx_power = calib.tx_power;

  const FragmentRates rates = FragmentRates::from_radio(
      radio_fd_, calib.tx_power, flags.receiver_self_interference);
  rate_idle_ = rates.rate_idle();
  rate_busy_ = rates.rate_busy();

  if (perfect_) {
    busy_idle_whole_[0] = busy_idle_whole_[1] = 0.0;
    busy_active_whole_[0] = busy_active_whole_[1] = 1.0;
    return;
  }

  const SensingMode modes[2] = {SensingMode::FullDuplex,
                                SensingMode::HalfDuplex};
  for (int m = 0; m < 2; ++m) {
    const double threshold = m == 0 ? threshold_fd_ : threshold_hd_;
    busy_idle_whole_[m] =
        false_alarm_00(threshold, radio_fd_, fragment_time_, modes[m]);
    busy_active_whole_[m] =
        detection_11(threshold, radio_fd_, fragment_time_, modes[m]);
  }
  if (!tabulated_) return;

  for (int m = 0; m < 2; ++m) {
    const double threshold = m == 0 ? threshold_fd_ : threshold_hd_;
    becomes_active_[m].values.resize(kCurveTablePoints);
    becomes_idle_[m].values.resize(kCurveTablePoints);
    becomes_active_[m].scale = becomes_idle_[m].scale =
        (kCurveTablePoints - 1) / fragment_time_;
    for (int i = 0; i < kCurveTablePoints; ++i) {
      const double t =
          fragment_time_ * static_cast<double>(i) / (kCurveTablePoints - 1);
      becomes_active_[m].values[i] =
          detection_01(threshold, radio_fd_, fragment_time_, t, modes[m]);
      becomes_idle_[m].values[i] =
          false_alarm_10(threshold, radio_fd_, fragment_time_, t, modes[m]);
    }
  }
}

double SensingCurves::exact_busy_prob(PuEvent event, double local_t,
                                      SensingMode mode) const {
  const double threshold =
      mode == SensingMode::FullDuplex ? threshold_fd_ : threshold_hd_;
  switch (event) {
    case PuEvent::StaysIdle:
      return false_alarm_00(threshold, radio_fd_, fragment_time_, mode);
    case PuEvent::StaysActive:
      return detection_11(threshold, radio_fd_, fragment_time_, mode);
    case PuEvent::BecomesActive:
      return detection_01(threshold, radio_fd_, fragment_time_, local_t, mode);
    case PuEvent::BecomesIdle:
      return false_alarm_10(threshold, radio_fd_, fragment_time_, local_t,
                            mode);
  }
  return 0.0;
}

double SensingCurves::busy_prob(PuEvent event, double local_t,
                                SensingMode mode) const {
  if (perfect_) {
    return (event == PuEvent::StaysActive || event == PuEvent::BecomesActive)
               ? 1.0
               : 0.0;
  }
  const int m = mode == SensingMode::FullDuplex ? 0 : 1;
  switch (event) {
    case PuEvent::StaysIdle:
      return busy_idle_whole_[m];
    case PuEvent::StaysActive:
      return busy_active_whole_[m];
    case PuEvent::BecomesActive:
      return tabulated_ ? becomes_active_[m].eval(local_t)
                        : exact_busy_prob(event, local_t, mode);
    case PuEvent::BecomesIdle:
      return tabulated_ ? becomes_idle_[m].eval(local_t)
                        : exact_busy_prob(event, local_t, mode);
  }
  return 0.0;
}

double SensingCurves::bits(PuEvent event, double local_t) const {
  switch (event) {
    case PuEvent::StaysIdle:
      return fragment_time_ * rate_idle_;
    case PuEvent::StaysActive:
      return fragment_time_ * rate_busy_;
    case PuEvent::BecomesActive:
      return local_t * rate_idle_ + (fragment_time_ - local_t) * rate_busy_;
    case PuEvent::BecomesIdle:
      return local_t * rate_busy_ + (fragment_time_ - local_t) * rate_idle_;
  }
  return 0.0;
}

double SensingCurves::expected_phase_bits(const PuEvent* events,
                                          const double* local_times,
                                          int fragments) const {
  double idle_verdict_prob = 1.0;
  double total = 0.0;
  for (int j = 0; j < fragments; ++j) {
    const double u = local_times ? local_times[j] : 0.0;
    const double transmit = j == 0 ? 1.0 : idle_verdict_prob;
    if (j > 0 || count_first_) total += transmit * bits(events[j], u);
    const double pb_fd = busy_prob(events[j], u, SensingMode::FullDuplex);
    const double pb_hd = busy_prob(events[j], u, SensingMode::HalfDuplex);
    idle_verdict_prob =
        transmit * (1.0 - pb_fd) + (1.0 - transmit) * (1.0 - pb_hd);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Explicit verdict-by-verdict term

OutcomeTerm outcome_probability_and_bits(const PuPattern& pattern,
                                         const SensingOutcomeSet& outcome,
                                         const std::vector<double>& local_times,
                                         const SensingCurves& curves) {
  const int fragments = pattern.fragments();
  if (outcome.fragments != fragments) {
    throw std::invalid_argument("pattern and outcome sizes differ");
  }
  if (static_cast<int>(local_times.size()) != pattern.num_changes()) {
    throw std::invalid_argument(
        "one local transition instant is needed per change fragment");
  }

  OutcomeTerm term;
  term.probability = 1.0;
  int change_idx = 0;
  const bool count_first = curves.count_first_fragment();
  for (int j = 1; j <= fragments; ++j) {
    const PuEvent event = pattern.events[j - 1];
    const bool mixed = event == PuEvent::BecomesActive ||
                       event == PuEvent::BecomesIdle;
    const double u = mixed ? local_times[change_idx++] : 0.0;
    const SensingMode mode = (j == 1 || outcome.verdict_idle(j - 1))
                                 ? SensingMode::FullDuplex
                                 : SensingMode::HalfDuplex;
    const double pb = curves.busy_prob(event, u, mode);
    term.probability *= outcome.verdict_idle(j) ? (1.0 - pb) : pb;
    if (outcome.transmits(j, count_first)) term.bits += curves.bits(event, u);
  }
  return term;
}

// ---------------------------------------------------------------------------
// Monte Carlo engine

namespace {

// Expected data-phase bits for one draw of change instants against the
// fragment grid starting at tau. Requires ch[0] > tau.
double eval_window(const SensingCurves& curves, int fragments, double T,
                   double tau, const double* ch, int nch) {
  double idle_verdict_prob = 1.0;
  double total = 0.0;
  bool idle = true;
  int m = 0;
  const bool count_first = curves.count_first_fragment();
  for (int j = 0; j < fragments; ++j) {
    const double frag_start = tau + j * T;
    const double frag_end = tau + (j + 1) * T;
    PuEvent event;
    double u = 0.0;
    if (m < nch && ch[m] <= frag_end) {
      u = ch[m] - frag_start;
      event = idle ? PuEvent::BecomesActive : PuEvent::BecomesIdle;
      idle = !idle;
      ++m;
      assert(m >= nch || ch[m] > frag_end);
    } else {
      event = idle ? PuEvent::StaysIdle : PuEvent::StaysActive;
    }
    const double transmit = j == 0 ? 1.0 : idle_verdict_prob;
    if (j > 0 || count_first) total += transmit * curves.bits(event, u);
    const double pb_fd =
        curves.busy_prob(event, u, SensingMode::FullDuplex);
    const double pb_hd =
        curves.busy_prob(event, u, SensingMode::HalfDuplex);
    idle_verdict_prob =
        transmit * (1.0 - pb_fd) + (1.0 - transmit) * (1.0 - pb_hd);
  }
  return total;
}

}  // namespace

ThroughputEngine::ThroughputEngine(const NetworkConfig& base,
                                   const AnalysisOptions& options,
                                   double max_fragment_time, int max_window)
    : base_(base), options_(options) {
  base_.validate();
  if (options_.samples < 1) {
    throw std::invalid_argument("sample count must be >= 1");
  }
  horizon_ = reservation_overhead(max_window - 1, base_.mac) +
             base_.mac.fragments_per_packet * max_fragment_time + 1e-9;

  const ShiftedExponential idle = base_.pu.idle_distribution();
  const ShiftedExponential active = base_.pu.active_distribution();

  const long n = options_.samples;
  offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  change_times_.reserve(static_cast<std::size_t>(n) * 2);
  for (long s = 0; s < n; ++s) {
    SplitMix64 rng = SplitMix64::for_index(options_.seed, s);
    double t = idle.sample(rng.next_double());
    bool next_active = true;  // duration following the first change
    while (t <= horizon_) {
      change_times_.push_back(t);
      t += (next_active ? active : idle).sample(rng.next_double());
      next_active = !next_active;
    }
    offsets_[s + 1] = static_cast<std::uint32_t>(change_times_.size());
  }
}

ThroughputEngine::Accumulated ThroughputEngine::accumulate(
    const NetworkConfig& cfg, const SensingCurves& curves, int window,
    const std::vector<double>& weights,
    const std::vector<double>& weight_prefix) const {
  const long n = static_cast<long>(offsets_.size()) - 1;
  const int fragments = cfg.mac.fragments_per_packet;
  const double T = curves.fragment_time();
  const double base_overhead = reservation_overhead(0, cfg.mac);
  const double slot = cfg.mac.mini_slot;
  const double span = fragments * T;

  // Value shared by every draw whose first change clears the data phase.
  std::vector<PuEvent> all_idle(fragments, PuEvent::StaysIdle);
  const double quiet_value =
      curves.expected_phase_bits(all_idle.data(), nullptr, fragments);

  struct ChunkResult {
    std::vector<double> acc;
    std::vector<double> quiet_counts;
    double nt = 0.0;
    double nt2 = 0.0;
  };
  std::vector<ChunkResult> chunks(kChunks);

  parallel_chunks(kChunks, options_.workers, [&](int c) {
    ChunkResult& r = chunks[c];
    r.acc.assign(window, 0.0);
    r.quiet_counts.assign(window + 1, 0.0);
    const long lo = n * c / kChunks;
    const long hi = n * (c + 1) / kChunks;
    for (long s = lo; s < hi; ++s) {
      const double* ch = change_times_.data() + offsets_[s];
      const int nch = static_cast<int>(offsets_[s + 1] - offsets_[s]);
      const double first =
          nch > 0 ? ch[0] : std::numeric_limits<double>::infinity();

      // Slots where the window ends before the first change.
      int quiet_end = window;
      if (first - span - base_overhead < (window - 1) * slot) {
        quiet_end = std::clamp(
            static_cast<int>(std::ceil((first - span - base_overhead) / slot)),
            0, window);
      }
      // Slots where the first change precedes the data phase: no pattern
      // covers them, the draw contributes nothing there.
      int dead_start = window;
      if (std::isfinite(first)) {
        dead_start = std::clamp(
            static_cast<int>(std::ceil((first - base_overhead) / slot)), 0,
            window);
      }

      double draw_nt = weight_prefix[quiet_end] * quiet_value;
      r.quiet_counts[quiet_end] += 1.0;
      for (int i0 = quiet_end; i0 < dead_start; ++i0) {
        const double tau = base_overhead + slot * i0;
        const double v = eval_window(curves, fragments, T, tau, ch, nch);
        r.acc[i0] += v;
        draw_nt += weights[i0] * v;
      }
      r.nt += draw_nt;
      r.nt2 += draw_nt * draw_nt;
    }
    double running = 0.0;
    for (int i0 = window - 1; i0 >= 0; --i0) {
      running += r.quiet_counts[i0 + 1];
      r.acc[i0] += quiet_value * running;
    }
  });

  Accumulated out;
  out.per_i0_sum.assign(window, 0.0);
  for (const ChunkResult& r : chunks) {
    for (int i0 = 0; i0 < window; ++i0) out.per_i0_sum[i0] += r.acc[i0];
    out.nt_sum += r.nt;
    out.nt_sq_sum += r.nt2;
  }
  return out;
}

ThroughputReport ThroughputEngine::evaluate(double fragment_time, int window,
                                            double tx_power) const {
  NetworkConfig cfg = base_;
  cfg.mac.fragment_time = fragment_time;
  cfg.mac.contention_window = window;
  cfg.radio.tx_power = tx_power;
  cfg.validate();

  const int fragments = cfg.mac.fragments_per_packet;
  const double span = fragments * fragment_time;
  if (reservation_overhead(window - 1, cfg.mac) + span > horizon_ + 1e-12) {
    throw std::invalid_argument(
        "evaluation window exceeds the cached draw horizon");
  }

  SensingCalibration calib;
  if (options_.perfect_sensing) {
    calib.fragment_time = fragment_time;
    calib.tx_power = tx_power;
    calib.threshold_fd = calib.threshold_hd = 1.0;
    calib.achieved_avg_detection_fd = calib.achieved_avg_detection_hd = 1.0;
  } else {
    calib = calibrate_threshold(cfg.radio, cfg.pu, fragment_time, tx_power,
                                cfg.target_detection_prob,
                                cfg.flags.prob_idle_uses_shift);
  }
  const SensingCurves curves(cfg.radio, calib, cfg.flags,
                             options_.tabulated_curves,
                             options_.perfect_sensing);

  const double p_idle = prob_idle(cfg.pu, cfg.flags.prob_idle_uses_shift);
  std::vector<double> weights(window, 0.0);
  std::vector<double> weight_prefix(window + 1, 0.0);
  for (int i0 = 0; i0 < window; ++i0) {
    const double tau = reservation_overhead(i0, cfg.mac);
    weights[i0] = contention_success_prob(i0, cfg.num_su_pairs, window) *
                  p_idle / (tau + span);
    weight_prefix[i0 + 1] = weight_prefix[i0] + weights[i0];
  }

  const Accumulated acc = accumulate(cfg, curves, window, weights,
                                     weight_prefix);
  const double n = static_cast<double>(options_.samples);

  ThroughputReport report;
  report.calibration = calib;
  report.normalized_throughput = acc.nt_sum / n;
  const double variance =
      std::max(0.0, acc.nt_sq_sum / n - report.normalized_throughput *
                                            report.normalized_throughput);
  report.std_error = std::sqrt(variance / n);
  report.relative_error = report.normalized_throughput > 0.0
                              ? report.std_error / report.normalized_throughput
                              : 0.0;
  report.per_backoff.reserve(window);
  for (int i0 = 0; i0 < window; ++i0) {
    BackoffTerm term;
    term.i0 = i0;
    term.success_prob = contention_success_prob(i0, cfg.num_su_pairs, window);
    term.overhead_time = reservation_overhead(i0, cfg.mac);
    term.conditional_bits = p_idle * acc.per_i0_sum[i0] / n;
    report.per_backoff.push_back(term);
  }
  return report;
}

double ThroughputEngine::pattern_mass(double fragment_time, int window) const {
  const double tau = reservation_overhead(window - 1, base_.mac);
  const long n = static_cast<long>(offsets_.size()) - 1;
  long covered = 0;
  for (long s = 0; s < n; ++s) {
    const int nch = static_cast<int>(offsets_[s + 1] - offsets_[s]);
    if (nch == 0 || change_times_[offsets_[s]] > tau) ++covered;
  }
  (void)fragment_time;
  return static_cast<double>(covered) / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// Conditional throughput, both backends

namespace {

struct PatternQuadrature {
  const PuPattern* pattern;
  const std::vector<SensingOutcomeSet>* outcomes;
  const SensingCurves* curves;
  ShiftedExponential idle;
  ShiftedExponential active;
  double tau;
  double phase_end;
  double tol;
  mutable std::vector<double> locals;
  mutable double error_acc = 0.0;
  mutable bool converged = true;

  double outcome_sum() const {
    double sum = 0.0;
    for (const auto& outcome : *outcomes) {
      const OutcomeTerm term = outcome_probability_and_bits(
          *pattern, outcome, locals, *curves);
      sum += term.probability * term.bits;
    }
    return sum;
  }

  double recurse(int depth, double cumulative) const {
    const int changes = pattern->num_changes();
    if (depth == changes) {
      const double remaining = phase_end - cumulative;
      const bool tail_idle = changes % 2 == 0;
      const double tail =
          (tail_idle ? idle : active).survival(remaining);
      return outcome_sum() * tail;
    }
    const double T = curves->fragment_time();
    const int fragment = pattern->change_fragments[depth];
    const ShiftedExponential& dist = depth % 2 == 0 ? idle : active;
    double lo = tau + (fragment - 1) * T - cumulative;
    const double hi = tau + fragment * T - cumulative;
    lo = std::max(lo, dist.min);
    if (lo >= hi) return 0.0;
    const double level_tol = tol * std::pow(0.1, depth);
    auto result = integrate(
        [&](double t) {
          locals[depth] = cumulative + t - tau - (fragment - 1) * T;
          return dist.pdf(t) * recurse(depth + 1, cumulative + t);
        },
        lo, hi, level_tol);
    if (depth == 0) error_acc += result.abs_error;
    if (!result.converged) converged = false;
    return result.value;
  }
};

ConditionalThroughput conditional_quadrature(int i0, const NetworkConfig& cfg,
                                             const SensingCalibration& calib,
                                             const AnalysisOptions& options) {
  const int fragments = cfg.mac.fragments_per_packet;
  const SensingCurves curves(cfg.radio, calib, cfg.flags,
                             /*tabulated=*/false, options.perfect_sensing);
  const auto patterns = enumerate_patterns(fragments);
  const auto outcomes = enumerate_outcomes(fragments);
  const double tau = reservation_overhead(i0, cfg.mac);
  const double phase_end = tau + fragments * cfg.mac.fragment_time;

  double total = 0.0;
  double error = 0.0;
  for (const auto& pattern : patterns) {
    if (pattern.num_changes() > 3) {
      throw std::invalid_argument(
          "quadrature backend handles at most three state changes per "
          "pattern; use the Monte Carlo backend");
    }
    PatternQuadrature ctx{&pattern,
                          &outcomes,
                          &curves,
                          cfg.pu.idle_distribution(),
                          cfg.pu.active_distribution(),
                          tau,
                          phase_end,
                          options.quadrature_tol,
                          std::vector<double>(pattern.num_changes(), 0.0),
                          0.0};
    total += ctx.recurse(0, 0.0);
    error += ctx.error_acc;
    if (!ctx.converged) {
      std::ostringstream msg;
      msg << "pattern integration missed its tolerance; error estimate "
          << ctx.error_acc;
      throw QuadratureError(msg.str());
    }
  }
  const double p_idle = prob_idle(cfg.pu, cfg.flags.prob_idle_uses_shift);
  ConditionalThroughput out;
  out.value = p_idle * total;
  out.quad_error = p_idle * error;
  return out;
}

}  // namespace

ConditionalThroughput conditional_throughput(int i0, const NetworkConfig& cfg,
                                             const SensingCalibration& calib,
                                             const AnalysisOptions& options) {
  cfg.validate();
  check_slot_index(i0, cfg.mac.contention_window);
  if (options.backend == AnalysisBackend::Quadrature) {
    return conditional_quadrature(i0, cfg, calib, options);
  }

  ThroughputEngine engine(cfg, options, cfg.mac.fragment_time, i0 + 1);
  const SensingCurves curves(cfg.radio, calib, cfg.flags,
                             options.tabulated_curves,
                             options.perfect_sensing);
  const int fragments = cfg.mac.fragments_per_packet;
  const double T = cfg.mac.fragment_time;
  const double tau = reservation_overhead(i0, cfg.mac);
  const double span = fragments * T;

  std::vector<PuEvent> all_idle(fragments, PuEvent::StaysIdle);
  const double quiet_value =
      curves.expected_phase_bits(all_idle.data(), nullptr, fragments);

  const long n = options.samples;
  double sum = 0.0;
  double sq_sum = 0.0;
  for (long s = 0; s < n; ++s) {
    const double* ch = engine.change_times_.data() + engine.offsets_[s];
    const int nch =
        static_cast<int>(engine.offsets_[s + 1] - engine.offsets_[s]);
    double v = 0.0;
    if (nch == 0 || ch[0] > tau + span) {
      v = quiet_value;
    } else if (ch[0] > tau) {
      v = eval_window(curves, fragments, T, tau, ch, nch);
    }
    sum += v;
    sq_sum += v * v;
  }
  const double p_idle = prob_idle(cfg.pu, cfg.flags.prob_idle_uses_shift);
  const double mean = sum / static_cast<double>(n);
  const double variance = std::max(0.0, sq_sum / n - mean * mean);

  ConditionalThroughput out;
  out.value = p_idle * mean;
  out.std_error = p_idle * std::sqrt(variance / n);
  return out;
}

ThroughputReport normalized_throughput(const NetworkConfig& cfg,
                                       const AnalysisOptions& options) {
  cfg.validate();
  if (options.backend == AnalysisBackend::Quadrature) {
    const int window = cfg.mac.contention_window;
    const double span = cfg.mac.packet_time();
    SensingCalibration calib;
    if (options.perfect_sensing) {
      calib.fragment_time = cfg.mac.fragment_time;
      calib.tx_power = cfg.radio.tx_power;
      calib.threshold_fd = calib.threshold_hd = 1.0;
    } else {
      calib = calibrate_threshold(cfg.radio, cfg.pu, cfg.mac.fragment_time,
                                  cfg.radio.tx_power,
                                  cfg.target_detection_prob,
                                  cfg.flags.prob_idle_uses_shift);
    }
    ThroughputReport report;
    report.calibration = calib;
    double quad_error = 0.0;
    for (int i0 = 0; i0 < window; ++i0) {
      const ConditionalThroughput cond =
          conditional_quadrature(i0, cfg, calib, options);
      BackoffTerm term;
      term.i0 = i0;
      term.success_prob =
          contention_success_prob(i0, cfg.num_su_pairs, window);
      term.overhead_time = reservation_overhead(i0, cfg.mac);
      term.conditional_bits = cond.value;
      report.per_backoff.push_back(term);
      report.normalized_throughput +=
          term.success_prob * cond.value / (term.overhead_time + span);
      quad_error +=
          term.success_prob * cond.quad_error / (term.overhead_time + span);
    }
    report.relative_error = report.normalized_throughput > 0.0
                                ? quad_error / report.normalized_throughput
                                : 0.0;
    return report;
  }
  ThroughputEngine engine(cfg, options, cfg.mac.fragment_time,
                          cfg.mac.contention_window);
  return engine.evaluate(cfg.mac.fragment_time, cfg.mac.contention_window,
                         cfg.radio.tx_power);
}

}  // namespace fdmac
