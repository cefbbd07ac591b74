#include "fdmac/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fdmac/units.hpp"

namespace fdmac {

std::vector<int> window_candidates(int w_max, bool exhaustive) {
  std::vector<int> out;
  if (exhaustive) {
    for (int w = 1; w <= w_max; ++w) out.push_back(w);
    return out;
  }
  for (int w = 1; w <= w_max; w *= 2) out.push_back(w);
  if (out.back() != w_max) out.push_back(w_max);
  return out;
}

PowerOptimum optimize_power(const ThroughputEngine& engine,
                            double fragment_time, int window,
                            const OptimizerOptions& options,
                            std::vector<TracePoint>* trace) {
  const double p_max = engine.base_config().radio.max_tx_power;
  const double hi_db = units::linear_to_db(p_max);
  const double lo_db = hi_db - options.power_span_db;

  auto objective_db = [&](double db) {
    const double power = std::min(units::db_to_linear(db), p_max);
    const double nt =
        engine.evaluate(fragment_time, window, power).normalized_throughput;
    if (trace) trace->push_back({window, fragment_time, power, nt});
    return nt;
  };

  auto [best_db, best_nt] =
      golden_section_max(objective_db, lo_db, hi_db, options.power_tol_db);

  // Final local grid around the section optimum; the cap itself is always
  // probed so a monotone objective lands exactly on P_max.
  std::vector<double> grid_db;
  for (int k = -4; k <= 4; ++k) {
    grid_db.push_back(best_db + k * options.power_tol_db);
  }
  grid_db.push_back(hi_db);
  for (double db : grid_db) {
    if (db < lo_db || db > hi_db) continue;
    const double nt = objective_db(db);
    if (nt > best_nt) {
      best_nt = nt;
      best_db = db;
    }
  }

  PowerOptimum out;
  out.tx_power = std::min(units::db_to_linear(best_db), p_max);
  out.throughput = best_nt;
  return out;
}

OptimizationResult optimize(const NetworkConfig& cfg,
                            const std::vector<int>& w_candidates,
                            double t_resolution,
                            const OptimizerOptions& options) {
  cfg.validate();
  if (w_candidates.empty()) {
    throw std::invalid_argument("no contention-window candidates to search");
  }
  int max_window = 0;
  for (int w : w_candidates) {
    if (w < 1 || w > cfg.mac.max_contention_window) {
      throw std::invalid_argument(
          "window candidate " + std::to_string(w) +
          " outside [1, max_contention_window]");
    }
    max_window = std::max(max_window, w);
  }

  const double t_eva = cfg.pu.evacuation_time;
  std::vector<double> t_grid;
  if (t_resolution <= 0.0) {
    t_grid.push_back(cfg.mac.fragment_time);
  } else {
    for (double t = t_resolution; t < t_eva - 1e-12; t += t_resolution) {
      t_grid.push_back(t);
    }
    t_grid.push_back(t_eva);
  }
  if (t_grid.empty()) {
    throw std::invalid_argument("fragment-time grid is empty");
  }
  const double max_t = *std::max_element(t_grid.begin(), t_grid.end());

  AnalysisOptions analysis;
  analysis.samples = options.samples;
  analysis.seed = options.seed;
  analysis.workers = options.workers;
  analysis.tabulated_curves = options.tabulated_curves;
  analysis.perfect_sensing = options.perfect_sensing;
  const ThroughputEngine engine(cfg, analysis, max_t, max_window);

  OptimizationResult result;
  result.best_throughput = -1.0;
  auto consider = [&](int window, double t, const PowerOptimum& p) {
    if (p.throughput > result.best_throughput) {
      result.best_throughput = p.throughput;
      result.best_window = window;
      result.best_fragment_time = t;
      result.best_tx_power = p.tx_power;
    }
  };

  for (int window : w_candidates) {
    double incumbent_t = t_grid.front();
    double incumbent_nt = -1.0;
    for (double t : t_grid) {
      const PowerOptimum p =
          optimize_power(engine, t, window, options, &result.trace);
      consider(window, t, p);
      if (p.throughput > incumbent_nt) {
        incumbent_nt = p.throughput;
        incumbent_t = t;
      }
    }
    if (t_grid.size() > 1) {
      // Golden-section refinement of T around the per-window incumbent.
      const double step =
          t_grid.size() > 1 ? t_grid[1] - t_grid[0] : t_resolution;
      const double lo = std::max(incumbent_t - step, 0.25 * step);
      const double hi = std::min(incumbent_t + step, t_eva);
      if (hi - lo > options.t_refine_tol) {
        golden_section_max(
            [&](double t) {
              const PowerOptimum p =
                  optimize_power(engine, t, window, options, &result.trace);
              consider(window, t, p);
              return p.throughput;
            },
            lo, hi, options.t_refine_tol);
      }
    }
  }

  if (result.best_throughput < 0.0) {
    throw std::runtime_error("optimization produced no feasible point");
  }
  return result;
}

}  // namespace fdmac
