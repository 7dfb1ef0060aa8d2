#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bitflip/config.hpp"
#include "bitflip/drift.hpp"
#include "bitflip/estimators.hpp"
#include "bitflip/sde.hpp"

namespace bitflip {

struct SweepRow {
  double dv = 0.0;            // V, applied as dv1 = +dv, dv2 = -dv
  std::string status = "ok";  // ok | monostable | error: <what>
  double delta_vv = 0.0;
  double tau = 0.0;
  double sigma_vv = 0.0;      // sigma_w sqrt(tau/2)
  double sigma_w = 0.0;
  double barrier = 0.0;            // U(delta_vv)
  double parabolic_barrier = 0.0;  // delta_vv^2 / (2 tau)

  std::optional<double> mttf_mc2d, ci2d_lo, ci2d_hi;
  std::optional<double> mttf_mc1d, ci1d_lo, ci1d_hi;
  std::optional<double> mttf_kish, mttf_nobile, mttf_siegert;
  int64_t censored_2d = 0, censored_1d = 0;

  // persisted artifacts (empty for failed rows)
  DriftTable drift;  // extended
  PotentialTable potential;
};

struct SweepReport {
  RunConfig cfg;
  std::vector<SweepRow> rows;
  bool any_fatal = false;   // some row failed with a non-monostable error
  std::string params_hash;  // hash of the config echo
};

// Per point: find_equilibria, make_axis, relax/extract/extend, potential,
// then every requested estimator. Monostable points become flagged rows; any
// other per-point error lands in the row status and sets any_fatal.
// Deterministic for a fixed config: the 1D/2D ensembles of point k draw from
// disjoint stream ranges of the single base seed.
SweepReport run_sweep(const RunConfig& cfg);

// Full report: '#' provenance line, then one row per point, empty cells for
// estimators that did not run.
void write_report_csv(const SweepReport& rep, const std::string& path);
SweepReport read_report_csv(const std::string& path);

// Human-readable aligned table.
std::string compare_table(const SweepReport& rep);

// Plot data: dv_mV,mttf_mc2d_s,mttf_mc1d_s,mttf_kish_s,mttf_nobile_s,
// mttf_siegert_s,ci_lo_s,ci_hi_s. The CI pair is MC-2D's when present, else
// MC-1D's.
void write_plot_csv(const SweepReport& rep, const std::string& path);

// report.csv + mttf_vs_dv.csv + table.txt + one drift table CSV per ok row.
void persist_sweep(const SweepReport& rep, const std::string& dir);

}  // namespace bitflip
