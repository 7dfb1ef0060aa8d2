#pragma once

#include "bitflip/constants.hpp"

namespace bitflip {

// Surrogate cross-coupled inverter cell. The offsets dv1, dv2 act as series
// voltage sources in the inverter inputs; noise_scale multiplies the thermal
// noise intensity only, never the deterministic field.
struct CellParams {
  double vdd = 0.0;   // supply (V)
  double vm = 0.0;    // VTC midpoint (V)
  double vs = 0.0;    // VTC slope voltage (V)
  double r = 0.0;     // node resistance (Ohm)
  double c = 0.0;     // node capacitance (F)
  double temp = 0.0;  // temperature (K)
  double dv1 = 0.0;   // series offset, inverter driving v1 (V)
  double dv2 = 0.0;   // series offset, inverter driving v2 (V)
  double noise_scale = 1.0;

  double rc() const { return r * c; }
  void validate() const;  // throws ValidationError
};

// 200 mV tanh cell: vm = 100 mV, vs = 30 mV, 10 MOhm, 50 aF, 300 K.
CellParams default_cell();

struct StatePoint {
  double v2 = 0.0;  // vOUT2 (V)
  double v1 = 0.0;  // vOUT1 (V)
};

struct RateVector {
  double d_v2 = 0.0;  // dv2/dt (V/s)
  double d_v1 = 0.0;  // dv1/dt (V/s)
};

// The three fixed points plus the axis data derived from them. stable0 is the
// high-v1 state (smallest v2 root), the state threatened when dv1 = -dv2 > 0.
struct Equilibria {
  StatePoint stable0;  // (X0, Y0)
  StatePoint saddle;   // (XM, YM)
  StatePoint stable1;  // (X1, Y1)
  double a = 0.0;      // (XM - X0) / delta_vv
  double b = 0.0;      // (YM - Y0) / delta_vv, negative by convention
  double delta_vv = 0.0;  // distance stable0 -> saddle (V)
};

// vout = (vdd/2) (1 - tanh((vin + dv - vm)/vs)); total, strictly decreasing.
double inverter_vtc(double vin, const CellParams& p, double dv);

// Scalar map x -> vtc(vtc(x, dv1), dv2) whose fixed points are the
// equilibrium v2 values.
double composed_map(double x, const CellParams& p);

RateVector drift_field(const StatePoint& s, const CellParams& p);

// Bracket-scan + bisection on composed_map(x) - x, Newton polish.
// Throws MonostableError when fewer than three fixed points exist.
Equilibria find_equilibria(const CellParams& p);

// Johnson-Nyquist white-noise intensity per node:
// noise_scale * sqrt(2 kB T / (r c^2)), in V/sqrt(s).
double node_noise_sigma(const CellParams& p);

}  // namespace bitflip
