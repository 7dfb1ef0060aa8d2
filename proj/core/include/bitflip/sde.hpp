#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bitflip/cell.hpp"
#include "bitflip/drift.hpp"
#include "bitflip/rng.hpp"

namespace bitflip {

// Everything the reduced SDE dvv/dt = h(vv) + sigma_w w(t) needs. Expects an
// extended drift table so the walker has room below the stable point.
struct SdeModel1D {
  DriftTable drift;
  double sigma_w = 0.0;  // V/sqrt(s)
  double delta_vv = 0.0;
};

struct PathResult {
  double ttf = 0.0;  // reported time; x2-corrected in 1D mode
  double raw = 0.0;  // first-passage time before correction
  bool censored = false;
};

struct PathRecord {
  uint64_t index = 0;
  double ttf = 0.0;  // t_max when censored
  double raw = 0.0;
  bool censored = false;
};

struct TtfEnsemble {
  std::vector<PathRecord> paths;    // ordered by path index
  std::vector<double> samples;      // uncensored corrected TTFs, sorted
  std::vector<double> raw_samples;  // matching raw times, sorted
  int64_t n_censored = 0;
  double dt = 0.0;
  double t_max = 0.0;
  uint64_t seed = 0;
  std::string mode;  // reduced-1d | full-2d
};

struct MttfEstimate {
  double mean = 0.0;
  double lo = 0.0, hi = 0.0;  // 95% CI, mean +- 1.96 sd/sqrt(n)
  int64_t n = 0;
  int64_t n_censored = 0;
  std::string method;             // mc-1d | mc-2d
  bool censored_warning = false;  // some paths censored, mean is a lower bound
  bool lower_bound = false;       // every path censored, mean = t_max
};

// Euler-Maruyama with an absorbing boundary at delta_vv. A crossing inside a
// step is detected with the Brownian-bridge probability
//   p = exp(-2 (delta - v_k)(delta - v_{k+1}) / (sigma_w^2 dt)),
// which removes the O(sqrt(dt)) boundary bias of grid-time detection. The
// returned ttf is 2x the raw first-passage time (hill-top correction).
PathResult simulate_path_1d(const SdeModel1D& m, double dt, double t_max,
                            RngStream& rng);

// Full 2D Langevin cell from stable0; TTF is the first time v1 <= v2, no x2.
// Draw order per step: v2 noise first, then v1.
PathResult simulate_path_2d(const CellParams& p, const Equilibria& eq,
                            double dt, double t_max, RngStream& rng);

struct EnsembleOptions {
  int64_t n = 1;
  uint64_t base_seed = 0;
  uint64_t start_index = 0;  // first path index; disjoint ranges merge cleanly
  int threads = 1;
  double dt = 0.0;
  double t_max = 0.0;
  std::string mode;  // reduced-1d | full-2d
};

// Runs n paths; path i gets RngStream(base_seed, i). Identical results for
// any thread count. Per-path errors are aggregated (with indices) into one
// DomainError after all paths finish.
TtfEnsemble run_ensemble(const std::function<PathResult(RngStream&)>& sim,
                         const EnsembleOptions& opt);

// Mean over uncensored samples. Throws EmptyEnsembleError when no paths ran;
// when every path censored, returns mean = t_max with lower_bound set.
MttfEstimate mttf_stats(const TtfEnsemble& e);

// CSV dump: '#' JSON metadata line, then path_index,ttf_s,censored rows.
void write_ensemble_csv(const std::string& path, const TtfEnsemble& e,
                        const std::string& params_hash);

// Kolmogorov-Smirnov helpers (used by the memorylessness property).
double ks_statistic_exponential(const std::vector<double>& sorted_samples,
                                double mean);
double ks_pvalue(double d, int64_t n);
// KS p-value of the excess TTF (samples beyond the given percentile, shifted)
// against an exponential with the tail's own mean.
double tail_exponential_ks_pvalue(const std::vector<double>& sorted_samples,
                                  double percentile);

}  // namespace bitflip
