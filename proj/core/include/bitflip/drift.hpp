#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bitflip/cell.hpp"
#include "bitflip/projection.hpp"

namespace bitflip {

// Noiseless relaxation record. converged = false means t_max was reached
// before the stop radius; the trajectory is still usable for inspection but
// not for extraction.
struct Trajectory {
  std::vector<double> times;        // s, strictly increasing
  std::vector<StatePoint> states;
  double epsilon = 0.0;             // initial displacement from the saddle (V)
  double dt = 0.0;
  bool converged = true;
};

// Tabulated drift h(vv) with piecewise-linear interpolation between samples.
struct DriftTable {
  std::vector<double> vv;  // V, strictly ascending; spans [vv.front(), delta_vv]
  std::vector<double> h;   // V/s
  double tau = 0.0;        // linearized relaxation time at vv = 0 (s)
  double delta_vv = 0.0;
  std::string extension = "none";  // none | trajectory | harmonic

  double vv_min() const { return vv.front(); }
  // Piecewise-linear value; DomainError outside [vv.front(), vv.back()].
  double h_at(double x) const;
};

struct PotentialTable {
  std::vector<double> vv;  // V, same grid as the drift table
  std::vector<double> u;   // V^2/s; u = 0 at vv = 0
  double barrier = 0.0;    // u at delta_vv
  double delta_vv = 0.0;

  double u_at(double x) const;  // piecewise-linear, clamped query errors out
};

// RK4 integration of the noiseless field from embed(delta_vv - epsilon),
// stopping when |state - stable0| < 1e-6 delta_vv or at t_max.
Trajectory relax_trajectory(const CellParams& p, const Equilibria& eq,
                            double epsilon, double dt, double t_max);

// Central-difference dvv/dt against vv(t); endpoints pinned to h = 0 at
// vv = 0 and vv = delta_vv; tau from a least-squares fit of ln vv over the
// tail vv < 0.1 delta_vv. Throws NonMonotoneError when vv(t) is not strictly
// decreasing.
DriftTable extract_drift(const Trajectory& traj, const ProjectionAxis& axis);

// Cumulative trapezoid of -h anchored at vv = 0 (integrates outward on both
// sides when the table is extended).
PotentialTable quasi_potential(const DriftTable& d);

// Appends samples on [-10 sigma_vv, 0): preferred from a second noiseless
// relaxation started at embed(-10 sigma_vv), falling back to the harmonic
// extension h = -vv/tau; the method used lands in DriftTable::extension.
DriftTable extend_negative(const DriftTable& d, const CellParams& p,
                           const Equilibria& eq);

// CSV export: one '#' provenance line (params hash, epsilon, dt, extension),
// then vv_mV,h_mV_per_us,U_V2_per_s rows.
void write_drift_csv(const std::string& path, const DriftTable& d,
                     const PotentialTable& u, const std::string& provenance);

}  // namespace bitflip
