#include "fdmac/math.hpp"

#include <cmath>
#include <stdexcept>

namespace fdmac {

double gaussian_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

ShiftedExponential::ShiftedExponential(double mean_, double min_)
    : mean(mean_), min(min_) {
  if (!(mean > 0.0)) {
    throw std::invalid_argument("shifted exponential needs a positive mean");
  }
  if (min < 0.0) {
    throw std::invalid_argument("shifted exponential needs min >= 0");
  }
}

double ShiftedExponential::pdf(double t) const {
  if (t < min) return 0.0;
  return std::exp(-(t - min) / mean) / mean;
}

double ShiftedExponential::cdf(double t) const {
  if (t <= min) return 0.0;
  return -std::expm1(-(t - min) / mean);
}

double ShiftedExponential::survival(double t) const {
  if (t <= min) return 1.0;
  return std::exp(-(t - min) / mean);
}

double ShiftedExponential::mass_within(double window) const {
  if (window <= 0.0) return 0.0;
  return -std::expm1(-window / mean);
}

double ShiftedExponential::conditional_elapsed_pdf(double elapsed,
                                                   double window) const {
  if (elapsed < 0.0 || elapsed > window) return 0.0;
  return std::exp(-elapsed / mean) / (mean * mass_within(window));
}

double ShiftedExponential::sample(double u01) const {
  // -log(1-u) is finite for u in [0,1)
  return min - mean * std::log1p(-u01);
}

namespace {

std::uint64_t scramble(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

SplitMix64 SplitMix64::for_index(std::uint64_t seed, std::uint64_t index) {
  // Scrambling the start state places the streams at pseudo-random cycle
  // positions; consecutive indices advanced in lockstep would otherwise
  // replay each other's draws shifted by one.
  return SplitMix64(scramble(seed + 0x9E3779B97F4A7C15ULL * (index + 1)));
}

std::uint64_t SplitMix64::next() {
  state += 0x9E3779B97F4A7C15ULL;
  return scramble(state);
}

double SplitMix64::next_double() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

}  // namespace fdmac
