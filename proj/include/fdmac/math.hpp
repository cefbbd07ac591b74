#pragma once

#include <cstdint>

namespace fdmac {

// Standard Gaussian tail Pr{Z > x} for Z ~ N(0,1).
double gaussian_tail(double x);

// Duration distribution with a hard minimum plus an exponential tail:
// pdf(t) = exp(-(t - min)/mean)/mean for t >= min, 0 otherwise.
struct ShiftedExponential {
  double mean;  // mean of the exponential part, > 0
  double min;   // hard lower bound of the support, >= 0

  ShiftedExponential(double mean_, double min_);

  double pdf(double t) const;
  double cdf(double t) const;
  double survival(double t) const;  // Pr{X > t}

  // Probability mass of [min, min + window].
  double mass_within(double window) const;

  // Density of the elapsed time beyond `min`, conditioned on the total
  // duration falling inside [min, min + window]; integrates to 1 on
  // [0, window].
  double conditional_elapsed_pdf(double elapsed, double window) const;

  // Inverse-CDF draw from a uniform u in [0,1).
  double sample(double u01) const;

  double total_mean() const { return min + mean; }
};

// Counter-based generator: sample index -> independent stream, so a fixed
// seed yields the same draws no matter how samples are partitioned across
// workers.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  static SplitMix64 for_index(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next();

  // Uniform in [0, 1) with 53 random bits.
  double next_double();
};

}  // namespace fdmac
