#pragma once

#include <stdexcept>
#include <string>

#include "fdmac/config.hpp"

namespace fdmac {

// Sensing runs either while transmitting (residual self-interference
// raises the energy floor to N0 + I) or silently (floor is N0 alone).
enum class SensingMode { FullDuplex, HalfDuplex };

class CalibrationError : public std::runtime_error {
 public:
  explicit CalibrationError(const std::string& what)
      : std::runtime_error(what) {}
};

class QuadratureError : public std::runtime_error {
 public:
  explicit QuadratureError(const std::string& what)
      : std::runtime_error(what) {}
};

// Energy floor seen by the detector: N0 + I under full-duplex sensing at
// the given transmit power, N0 under half-duplex sensing.
double sensing_noise_floor(const RadioConfig& radio, double tx_power,
                           SensingMode mode);

// Detector-side SNR of the licensed signal against that floor.
double sensing_snr(const RadioConfig& radio, double tx_power,
                   SensingMode mode);

// Probability of a "busy" verdict over a sensing window of length T when
// the channel is idle throughout.
double false_alarm_00(double threshold, const RadioConfig& radio, double T,
                      SensingMode mode);

// Probability of a "busy" verdict when the channel is active throughout.
double detection_11(double threshold, const RadioConfig& radio, double T,
                    SensingMode mode);

// Channel active for [0,t) then idle: busy verdict is a false alarm with
// respect to the end-of-window state.
double false_alarm_10(double threshold, const RadioConfig& radio, double T,
                      double t, SensingMode mode);

// Channel idle for [0,t) then active.
double detection_01(double threshold, const RadioConfig& radio, double T,
                    double t, SensingMode mode);

// detection_01 averaged over the transition instant, weighted by the idle
// duration's tail density truncated to one window.
double avg_detection_01(double threshold, const RadioConfig& radio,
                        const PuActivityModel& pu, double T, SensingMode mode);

// Average detection level across the two ways the channel can be active
// during a window (active throughout, or turning active mid-window). The
// mixture weights use the stationary idle share, so they honor the same
// shift reading as the throughput prefactor.
double avg_detection(double threshold, const RadioConfig& radio,
                     const PuActivityModel& pu, double T, SensingMode mode,
                     bool prob_idle_uses_shift = true);

// Mixture weights used by avg_detection: probability the window is fully
// active, and probability the channel turns active inside the window.
double event_weight_active_whole(const PuActivityModel& pu, double T,
                                 bool prob_idle_uses_shift = true);
double event_weight_turns_active(const PuActivityModel& pu, double T,
                                 bool prob_idle_uses_shift = true);

// Detection threshold plus the achieved average detection level for each
// sensing mode at one (window, transmit power) operating point.
struct SensingCalibration {
  double threshold_fd = 0.0;
  double threshold_hd = 0.0;
  double fragment_time = 0.0;
  double tx_power = 0.0;
  double achieved_avg_detection_fd = 0.0;
  double achieved_avg_detection_hd = 0.0;
};

// Solve avg_detection(threshold) = target by bisection; the curve is
// strictly decreasing in the threshold. Throws CalibrationError when no
// bracket can be established.
double calibrate_threshold_mode(const RadioConfig& radio,
                                const PuActivityModel& pu, double T,
                                double tx_power, double target,
                                SensingMode mode,
                                bool prob_idle_uses_shift = true,
                                double tolerance = 1e-8);

SensingCalibration calibrate_threshold(const RadioConfig& radio,
                                       const PuActivityModel& pu, double T,
                                       double tx_power, double target,
                                       bool prob_idle_uses_shift = true,
                                       double tolerance = 1e-8);

}  // namespace fdmac
