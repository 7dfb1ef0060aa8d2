#include "bitflip/cell.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "bitflip/errors.hpp"

namespace bitflip {

void CellParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ValidationError(std::string("cell.") + name + " must be > 0");
  };
  positive(vdd, "vdd");
  positive(vs, "vs");
  positive(r, "r");
  positive(c, "c");
  positive(temp, "temp");
  if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale))
    throw ValidationError("cell.noise_scale must be >= 0");
  if (!std::isfinite(vm) || !std::isfinite(dv1) || !std::isfinite(dv2))
    throw ValidationError("cell.vm/dv1/dv2 must be finite");
  if (!(vdd / (2.0 * vs) > 1.0))
    throw ValidationError(
        "cell.vs: midpoint gain vdd/(2 vs) must exceed 1 for bistability");
}

CellParams default_cell() {
  CellParams p;
  p.vdd = 0.2;
  p.vm = 0.1;
  p.vs = 0.03;
  p.r = 10e6;
  p.c = 50e-18;
  p.temp = 300.0;
  return p;
}

double inverter_vtc(double vin, const CellParams& p, double dv) {
  return 0.5 * p.vdd * (1.0 - std::tanh((vin + dv - p.vm) / p.vs));
}

double composed_map(double x, const CellParams& p) {
  return inverter_vtc(inverter_vtc(x, p, p.dv1), p, p.dv2);
}

RateVector drift_field(const StatePoint& s, const CellParams& p) {
  const double rc = p.rc();
  RateVector f;
  f.d_v1 = (inverter_vtc(s.v2, p, p.dv1) - s.v1) / rc;
  f.d_v2 = (inverter_vtc(s.v1, p, p.dv2) - s.v2) / rc;
  return f;
}

double node_noise_sigma(const CellParams& p) {
  return p.noise_scale * std::sqrt(2.0 * kB * p.temp / (p.r * p.c * p.c));
}

namespace {

double composed_residual(double x, const CellParams& p) {
  return composed_map(x, p) - x;
}

// d/dx of the composed map, for the Newton polish.
double composed_derivative(double x, const CellParams& p) {
  const double g = 0.5 * p.vdd / p.vs;  // magnitude of d vtc/d vin at midpoint
  const double t1 = std::tanh((x + p.dv1 - p.vm) / p.vs);
  const double y = 0.5 * p.vdd * (1.0 - t1);
  const double t2 = std::tanh((y + p.dv2 - p.vm) / p.vs);
  return g * (1.0 - t1 * t1) * g * (1.0 - t2 * t2);
}

double bisect_root(double lo, double hi, double flo, const CellParams& p,
                   double xtol) {
  // flo and f(hi) have opposite signs on entry
  for (int i = 0; i < 200 && hi - lo > xtol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = composed_residual(mid, p);
    if (fm == 0.0) return mid;
    if ((flo < 0.0) == (fm < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  // Newton polish to machine precision; the bracket already isolates the root
  for (int i = 0; i < 4; ++i) {
    const double d = composed_derivative(x, p) - 1.0;
    if (d == 0.0) break;
    const double step = composed_residual(x, p) / d;
    if (!std::isfinite(step)) break;
    const double xn = x - step;
    if (xn < lo || xn > hi) break;
    if (xn == x) break;
    x = xn;
  }
  return x;
}

}  // namespace

Equilibria find_equilibria(const CellParams& p) {
  p.validate();
  const int n_scan = 2000;
  const double lo = -0.5 * p.vdd;
  const double hi = 1.5 * p.vdd;
  const double xtol = 1e-14 * p.vdd;

  std::vector<double> roots;
  double x_prev = lo;
  double f_prev = composed_residual(x_prev, p);
  for (int i = 1; i <= n_scan; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / n_scan;
    const double f = composed_residual(x, p);
    if (f_prev == 0.0) {
      roots.push_back(x_prev);
    } else if ((f_prev < 0.0) != (f < 0.0)) {
      roots.push_back(bisect_root(x_prev, x, f_prev, p, xtol));
    }
    x_prev = x;
    f_prev = f;
  }
  if (f_prev == 0.0) roots.push_back(x_prev);

  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [&](double u, double v) { return v - u < 2.0 * xtol; }),
              roots.end());

  if (roots.size() < 3)
    throw MonostableError(
        "cell has " + std::to_string(roots.size()) +
        " fixed point(s); offset beyond the static flipping point");
  if (roots.size() > 3)
    throw ConvergenceError("composed map produced " +
                           std::to_string(roots.size()) +
                           " roots; bracketing failed");

  const double eps_eq = 1e-12 * p.vdd;
  for (double x : roots) {
    if (std::abs(composed_residual(x, p)) > eps_eq)
      throw ConvergenceError("equilibrium residual above tolerance at v2 = " +
                             std::to_string(x));
  }

  Equilibria eq;
  eq.stable0 = {roots[0], inverter_vtc(roots[0], p, p.dv1)};
  eq.saddle = {roots[1], inverter_vtc(roots[1], p, p.dv1)};
  eq.stable1 = {roots[2], inverter_vtc(roots[2], p, p.dv1)};
  const double dx = eq.saddle.v2 - eq.stable0.v2;
  const double dy = eq.saddle.v1 - eq.stable0.v1;
  eq.delta_vv = std::hypot(dx, dy);
  if (eq.delta_vv > 0.0) {
    eq.a = dx / eq.delta_vv;
    eq.b = dy / eq.delta_vv;
  }
  return eq;
}

}  // namespace bitflip
