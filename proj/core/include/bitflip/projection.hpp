#pragma once

#include "bitflip/cell.hpp"

namespace bitflip {

// Straight reaction coordinate through stable0 toward the saddle.
// vv = a (v2 - X0) + b (v1 - Y0), so vv(stable0) = 0 and vv(saddle) = delta_vv.
struct ProjectionAxis {
  StatePoint origin;   // stable0
  double a = 0.0;
  double b = 0.0;      // negative under the dv1 = -dv2 > 0 convention
  double delta_vv = 0.0;
};

// Throws DegenerateAxisError when stable0 has merged with the saddle.
ProjectionAxis make_axis(const Equilibria& eq);

double project(const StatePoint& s, const ProjectionAxis& axis);

// origin + vv (a, b); left inverse of project on the axis.
StatePoint embed(double vv, const ProjectionAxis& axis);

}  // namespace bitflip
