#include "fdmac/sensing.hpp"

#include <cmath>
#include <sstream>

#include "fdmac/quadrature.hpp"

namespace fdmac {

namespace {

void check_window(double T) {
  if (!(T > 0.0)) {
    throw std::invalid_argument("sensing window must be positive");
  }
}

void check_threshold(double threshold) {
  if (!(threshold > 0.0)) {
    throw std::invalid_argument("detection threshold must be positive");
  }
}

void check_instant(double t, double T) {
  if (t < 0.0 || t > T) {
    throw std::invalid_argument("state-change instant must lie in [0, T]");
  }
}

}  // namespace

double sensing_noise_floor(const RadioConfig& radio, double tx_power,
                           SensingMode mode) {
  if (mode == SensingMode::HalfDuplex) return radio.noise_power;
  return radio.noise_power + radio.self_interference(tx_power);
}

double sensing_snr(const RadioConfig& radio, double tx_power,
                   SensingMode mode) {
  return radio.pu_received_power / sensing_noise_floor(radio, tx_power, mode);
}

double false_alarm_00(double threshold, const RadioConfig& radio, double T,
                      SensingMode mode) {
  check_window(T);
  check_threshold(threshold);
  const double floor = sensing_noise_floor(radio, radio.tx_power, mode);
  return gaussian_tail((threshold / floor - 1.0) *
                       std::sqrt(radio.sampling_frequency * T));
}

double detection_11(double threshold, const RadioConfig& radio, double T,
                    SensingMode mode) {
  check_window(T);
  check_threshold(threshold);
  const double floor = sensing_noise_floor(radio, radio.tx_power, mode);
  const double snr = radio.pu_received_power / floor;
  return gaussian_tail((threshold / floor - snr - 1.0) *
                       std::sqrt(radio.sampling_frequency * T) / (snr + 1.0));
}

double false_alarm_10(double threshold, const RadioConfig& radio, double T,
                      double t, SensingMode mode) {
  check_window(T);
  check_threshold(threshold);
  check_instant(t, T);
  const double floor = sensing_noise_floor(radio, radio.tx_power, mode);
  const double snr = radio.pu_received_power / floor;
  const double frac = t / T;  // fraction of the window the channel was active
  const double numer = (threshold / floor - frac * snr - 1.0) *
                       std::sqrt(radio.sampling_frequency * T);
  const double denom =
      std::sqrt(frac * (snr + 1.0) * (snr + 1.0) + 1.0 - frac);
  return gaussian_tail(numer / denom);
}

double detection_01(double threshold, const RadioConfig& radio, double T,
                    double t, SensingMode mode) {
  check_window(T);
  check_threshold(threshold);
  check_instant(t, T);
  const double floor = sensing_noise_floor(radio, radio.tx_power, mode);
  const double snr = radio.pu_received_power / floor;
  const double frac = (T - t) / T;  // fraction of the window spent active
  const double numer = (threshold / floor - frac * snr - 1.0) *
                       std::sqrt(radio.sampling_frequency * T);
  const double denom =
      std::sqrt(frac * (snr + 1.0) * (snr + 1.0) + t / T);
  return gaussian_tail(numer / denom);
}

double avg_detection_01(double threshold, const RadioConfig& radio,
                        const PuActivityModel& pu, double T,
                        SensingMode mode) {
  check_window(T);
  check_threshold(threshold);
  const auto idle = pu.idle_distribution();
  auto result = integrate(
      [&](double t) {
        return detection_01(threshold, radio, T, t, mode) *
               idle.conditional_elapsed_pdf(t, T);
      },
      0.0, T, 1e-9);
  if (!result.converged) {
    std::ostringstream msg;
    msg << "transition-averaged detection integral did not reach tolerance; "
        << "achieved error estimate " << result.abs_error;
    throw QuadratureError(msg.str());
  }
  return result.value;
}

double event_weight_turns_active(const PuActivityModel& pu, double T,
                                 bool prob_idle_uses_shift) {
  return prob_idle(pu, prob_idle_uses_shift) *
         pu.idle_distribution().mass_within(T);
}

double event_weight_active_whole(const PuActivityModel& pu, double T,
                                 bool prob_idle_uses_shift) {
  return prob_busy(pu, prob_idle_uses_shift) *
         std::exp(-T / pu.mean_active);
}

double avg_detection(double threshold, const RadioConfig& radio,
                     const PuActivityModel& pu, double T, SensingMode mode,
                     bool prob_idle_uses_shift) {
  const double w_active =
      event_weight_active_whole(pu, T, prob_idle_uses_shift);
  const double w_turns =
      event_weight_turns_active(pu, T, prob_idle_uses_shift);
  const double p11 = detection_11(threshold, radio, T, mode);
  const double p01 = avg_detection_01(threshold, radio, pu, T, mode);
  return (p11 * w_active + p01 * w_turns) / (w_active + w_turns);
}

double calibrate_threshold_mode(const RadioConfig& radio,
                                const PuActivityModel& pu, double T,
                                double tx_power, double target,
                                SensingMode mode, bool prob_idle_uses_shift,
                                double tolerance) {
  if (!(target > 0.0 && target < 1.0)) {
    throw std::invalid_argument("detection target must lie in (0, 1)");
  }
  check_window(T);

  RadioConfig cfg = radio;
  cfg.tx_power = tx_power;

  const double floor = sensing_noise_floor(cfg, tx_power, mode);
  const double snr = cfg.pu_received_power / floor;
  const double spread = 10.0 / std::sqrt(cfg.sampling_frequency * T);

  auto achieved = [&](double threshold) {
    return avg_detection(threshold, cfg, pu, T, mode, prob_idle_uses_shift);
  };

  // Bracket spanning ten standard deviations around both event means,
  // widened geometrically if the target still escapes it.
  double lo = floor * (1.0 - spread);
  if (lo <= 0.0) lo = 1e-12 * floor;
  double hi = floor * (1.0 + snr) * (1.0 + spread);
  int guard = 0;
  while (achieved(lo) < target) {
    lo *= 0.5;
    if (++guard > 200) {
      throw CalibrationError("no lower threshold bracket for target " +
                             std::to_string(target));
    }
  }
  guard = 0;
  while (achieved(hi) > target) {
    hi *= 2.0;
    if (++guard > 200) {
      throw CalibrationError("no upper threshold bracket for target " +
                             std::to_string(target));
    }
  }

  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 400; ++iter) {
    mid = 0.5 * (lo + hi);
    const double value = achieved(mid);
    if (std::abs(value - target) <= tolerance) return mid;
    if (value > target) {
      lo = mid;  // decreasing curve: need a larger threshold
    } else {
      hi = mid;
    }
    if ((hi - lo) <= 1e-16 * mid) break;
  }
  const double final_gap = std::abs(achieved(mid) - target);
  if (final_gap <= tolerance) return mid;
  std::ostringstream msg;
  msg << "threshold bisection stalled " << final_gap
      << " away from target " << target << " (infeasible window/power?)";
  throw CalibrationError(msg.str());
}

SensingCalibration calibrate_threshold(const RadioConfig& radio,
                                       const PuActivityModel& pu, double T,
                                       double tx_power, double target,
                                       bool prob_idle_uses_shift,
                                       double tolerance) {
  SensingCalibration calib;
  calib.fragment_time = T;
  calib.tx_power = tx_power;
  calib.threshold_fd = calibrate_threshold_mode(
      radio, pu, T, tx_power, target, SensingMode::FullDuplex,
      prob_idle_uses_shift, tolerance);
  calib.threshold_hd = calibrate_threshold_mode(
      radio, pu, T, tx_power, target, SensingMode::HalfDuplex,
      prob_idle_uses_shift, tolerance);

  RadioConfig cfg = radio;
  cfg.tx_power = tx_power;
  calib.achieved_avg_detection_fd =
      avg_detection(calib.threshold_fd, cfg, pu, T, SensingMode::FullDuplex,
                    prob_idle_uses_shift);
  calib.achieved_avg_detection_hd =
      avg_detection(calib.threshold_hd, cfg, pu, T, SensingMode::HalfDuplex,
                    prob_idle_uses_shift);
  return calib;
}

}  // namespace fdmac
