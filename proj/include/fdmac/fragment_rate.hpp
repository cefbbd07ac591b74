#pragma once

#include "fdmac/config.hpp"

namespace fdmac {

// The four ways the channel can behave inside one fragment. Holding times
// exceed the fragment length, so at most one transition fits.
enum class PuEvent { StaysIdle, BecomesIdle, BecomesActive, StaysActive };

const char* to_string(PuEvent event);

// Link SNRs at the data receiver while the channel is idle or active.
struct FragmentRates {
  double snr_idle = 0.0;  // transmit power over (noise + residual SI)
  double snr_busy = 0.0;  // same with the licensed signal added

  static FragmentRates from_radio(const RadioConfig& radio,
                                  bool receiver_self_interference = true);
  static FragmentRates from_radio(const RadioConfig& radio, double tx_power,
                                  bool receiver_self_interference);

  double rate_idle() const;  // bits/s/Hz while the channel is idle
  double rate_busy() const;
};

// Bits per Hz accumulated over one fragment of length T under the given
// event; t is the in-fragment transition instant for the two mixed events
// and is ignored for the two steady ones.
double fragment_bits(PuEvent event, double t, double T,
                     const FragmentRates& rates);

}  // namespace fdmac
