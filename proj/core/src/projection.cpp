#include "bitflip/projection.hpp"

#include <cmath>
#include <string>

#include "bitflip/errors.hpp"

namespace bitflip {

ProjectionAxis make_axis(const Equilibria& eq) {
  // scale reference: the stable-to-stable distance stays O(vdd) everywhere in
  // the bistable range, including at the fold where stable0 meets the saddle
  const double span = std::hypot(eq.stable1.v2 - eq.stable0.v2,
                                 eq.stable1.v1 - eq.stable0.v1);
  const double delta_vv = std::hypot(eq.saddle.v2 - eq.stable0.v2,
                                     eq.saddle.v1 - eq.stable0.v1);
  if (!(delta_vv > 1e-9 * span))
    throw DegenerateAxisError("stable point merged with the saddle: delta_vv = " +
                              std::to_string(delta_vv) + " V");
  ProjectionAxis axis;
  axis.origin = eq.stable0;
  axis.delta_vv = delta_vv;
  axis.a = (eq.saddle.v2 - eq.stable0.v2) / delta_vv;
  axis.b = (eq.saddle.v1 - eq.stable0.v1) / delta_vv;
  return axis;
}

double project(const StatePoint& s, const ProjectionAxis& axis) {
  return axis.a * (s.v2 - axis.origin.v2) + axis.b * (s.v1 - axis.origin.v1);
}

StatePoint embed(double vv, const ProjectionAxis& axis) {
  return {axis.origin.v2 + vv * axis.a, axis.origin.v1 + vv * axis.b};
}

}  // namespace bitflip
