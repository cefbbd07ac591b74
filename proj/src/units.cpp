#include "fdmac/units.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace fdmac::units {

namespace {

// Splits "18 ms" / "18ms" into the numeric part and the unit token.
std::pair<double, std::string> split_number_unit(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  double value = std::strtod(begin, &end);
  if (end == begin) {
    throw std::invalid_argument("expected a number in '" + text + "'");
  }
  std::string unit(end);
  // trim surrounding whitespace
  auto first = unit.find_first_not_of(" \t");
  if (first == std::string::npos) {
    unit.clear();
  } else {
    auto last = unit.find_last_not_of(" \t");
    unit = unit.substr(first, last - first + 1);
  }
  return {value, unit};
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double lin) {
  if (lin <= 0.0) {
    throw std::invalid_argument("cannot express non-positive power in dB");
  }
  return 10.0 * std::log10(lin);
}

double parse_duration(const std::string& text) {
  auto [value, unit] = split_number_unit(text);
  if (unit == "s") return value;
  if (unit == "ms") return value * 1e-3;
  if (unit == "us") return value * 1e-6;
  throw std::invalid_argument("duration '" + text +
                              "' needs a unit suffix: s, ms or us");
}

double parse_power(const std::string& text) {
  auto [value, unit] = split_number_unit(text);
  if (unit == "dB" || unit == "db") return db_to_linear(value);
  if (unit == "lin") return value;
  throw std::invalid_argument("power '" + text +
                              "' needs a unit suffix: dB or lin");
}

double parse_frequency(const std::string& text) {
  auto [value, unit] = split_number_unit(text);
  if (unit == "Hz") return value;
  if (unit == "kHz") return value * 1e3;
  if (unit == "MHz") return value * 1e6;
  throw std::invalid_argument("frequency '" + text +
                              "' needs a unit suffix: Hz, kHz or MHz");
}

}  // namespace fdmac::units
