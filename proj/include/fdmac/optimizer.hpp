#pragma once

#include <cstdint>
#include <vector>

#include "fdmac/analysis.hpp"

namespace fdmac {

struct OptimizerOptions {
  // Shared-draw surface used for every evaluation, so the search compares
  // points on one deterministic sample average.
  long samples = 50000;
  std::uint64_t seed = 1;
  int workers = 0;
  int t_grid_points = 21;       // coarse grid over (0, T_eva]
  double t_refine_tol = 2.5e-4; // golden-section stop width for T, seconds
  double power_tol_db = 0.05;   // golden-section stop width for power
  double power_span_db = 40.0;  // searched span below the power cap
  bool tabulated_curves = true;
  bool perfect_sensing = false;
};

struct TracePoint {
  int window = 0;
  double fragment_time = 0.0;
  double tx_power = 0.0;  // linear
  double throughput = 0.0;
};

struct PowerOptimum {
  double tx_power = 0.0;  // linear
  double throughput = 0.0;
};

struct OptimizationResult {
  int best_window = 0;
  double best_fragment_time = 0.0;
  double best_tx_power = 0.0;  // linear
  double best_throughput = 0.0;
  std::vector<TracePoint> trace;
};

// Golden-section maximization of a unimodal scalar function, refined by a
// final local grid; returns the best abscissa probed.
template <class F>
std::pair<double, double> golden_section_max(F&& f, double a, double b,
                                             double tol, int max_iters = 200);

// Default contention-window candidates: powers of two up to w_max, or the
// full range when exhaustive is set.
std::vector<int> window_candidates(int w_max, bool exhaustive = false);

// Best transmit power in (0, P_max] for a fixed fragment time and window;
// every probe recalibrates the detection threshold, since the threshold
// couples to the power through the residual self-interference.
PowerOptimum optimize_power(const ThroughputEngine& engine,
                            double fragment_time, int window,
                            const OptimizerOptions& options,
                            std::vector<TracePoint>* trace = nullptr);

// Nested search over (W, T, P): exhaustive over the window candidates, a
// coarse fragment-time grid refined by golden section around the
// incumbent, and a power line search per grid point. t_resolution <= 0
// keeps the configured fragment time fixed.
OptimizationResult optimize(const NetworkConfig& cfg,
                            const std::vector<int>& w_candidates,
                            double t_resolution,
                            const OptimizerOptions& options);

// ---------------------------------------------------------------------------

template <class F>
std::pair<double, double> golden_section_max(F&& f, double a, double b,
                                             double tol, int max_iters) {
  constexpr double kInvPhi = 0.6180339887498949;
  if (a > b) std::swap(a, b);
  double c = b - (b - a) * kInvPhi;
  double d = a + (b - a) * kInvPhi;
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iters && (d - c) > tol; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - (b - a) * kInvPhi;
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + (b - a) * kInvPhi;
      fd = f(d);
    }
  }
  return fc > fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

}  // namespace fdmac
