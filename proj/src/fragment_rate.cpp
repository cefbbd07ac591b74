#include "fdmac/fragment_rate.hpp"

#include <cmath>
#include <stdexcept>

namespace fdmac {

const char* to_string(PuEvent event) {
  switch (event) {
    case PuEvent::StaysIdle: return "stays_idle";
    case PuEvent::BecomesIdle: return "becomes_idle";
    case PuEvent::BecomesActive: return "becomes_active";
    case PuEvent::StaysActive: return "stays_active";
  }
  return "?";
}

FragmentRates FragmentRates::from_radio(const RadioConfig& radio,
                                        bool receiver_self_interference) {
  return from_radio(radio, radio.tx_power, receiver_self_interference);
}

FragmentRates FragmentRates::from_radio(const RadioConfig& radio,
                                        double tx_power,
                                        bool receiver_self_interference) {
  const double si =
      receiver_self_interference ? radio.self_interference(tx_power) : 0.0;
  FragmentRates rates;
  rates.snr_idle = tx_power / (radio.noise_power + si);
  rates.snr_busy =
      tx_power / (radio.noise_power + si + radio.pu_received_power);
  return rates;
}

double FragmentRates::rate_idle() const { return std::log2(1.0 + snr_idle); }

double FragmentRates::rate_busy() const { return std::log2(1.0 + snr_busy); }

double fragment_bits(PuEvent event, double t, double T,
                     const FragmentRates& rates) {
  switch (event) {
    case PuEvent::StaysIdle:
      return T * rates.rate_idle();
    case PuEvent::StaysActive:
      return T * rates.rate_busy();
    default:
      break;
  }
  if (t < 0.0 || t > T) {
    throw std::invalid_argument("transition instant must lie in [0, T]");
  }
  if (event == PuEvent::BecomesIdle) {
    return t * rates.rate_busy() + (T - t) * rates.rate_idle();
  }
  // BecomesActive
  return t * rates.rate_idle() + (T - t) * rates.rate_busy();
}

}  // namespace fdmac
