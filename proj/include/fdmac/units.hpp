#pragma once

#include <string>

namespace fdmac::units {

double db_to_linear(double db);
double linear_to_db(double lin);

// Parse a duration like "18 ms", "20us" or "1.5 s" into seconds.
double parse_duration(const std::string& text);

// Parse a power like "11 dB", "-20dB" or "0.5 lin" into linear units
// (noise power is normalized to one, so linear power == SNR).
double parse_power(const std::string& text);

// Parse a frequency like "6 MHz", "250 kHz" or "1000 Hz" into Hz.
double parse_frequency(const std::string& text);

}  // namespace fdmac::units
