#include "bitflip/drift.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bitflip/errors.hpp"
#include "bitflip/io.hpp"

namespace bitflip {

namespace {

double lerp_table(const std::vector<double>& xs, const std::vector<double>& ys,
                  double x, const char* what) {
  if (xs.empty() || x < xs.front() || x > xs.back())
    throw DomainError(std::string(what) + " query outside table range: vv = " +
                      fmt_g17(x) + " V");
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return ys.front();
  if (it == xs.end()) return ys.back();
  const size_t i = static_cast<size_t>(it - xs.begin()) - 1;
  const double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
  return ys[i] + w * (ys[i + 1] - ys[i]);
}

StatePoint rk4_step(const StatePoint& s, const CellParams& p, double dt) {
  const RateVector k1 = drift_field(s, p);
  const RateVector k2 =
      drift_field({s.v2 + 0.5 * dt * k1.d_v2, s.v1 + 0.5 * dt * k1.d_v1}, p);
  const RateVector k3 =
      drift_field({s.v2 + 0.5 * dt * k2.d_v2, s.v1 + 0.5 * dt * k2.d_v1}, p);
  const RateVector k4 =
      drift_field({s.v2 + dt * k3.d_v2, s.v1 + dt * k3.d_v1}, p);
  return {s.v2 + dt / 6.0 * (k1.d_v2 + 2.0 * k2.d_v2 + 2.0 * k3.d_v2 + k4.d_v2),
          s.v1 + dt / 6.0 * (k1.d_v1 + 2.0 * k2.d_v1 + 2.0 * k3.d_v1 + k4.d_v1)};
}

Trajectory relax_from(const CellParams& p, const Equilibria& eq,
                      StatePoint start, double dt, double t_max) {
  const double eps_stop = 1e-6 * eq.delta_vv;
  Trajectory traj;
  traj.dt = dt;
  traj.converged = false;
  traj.times.push_back(0.0);
  traj.states.push_back(start);

  StatePoint s = start;
  const int64_t max_steps = static_cast<int64_t>(std::ceil(t_max / dt));
  for (int64_t k = 1; k <= max_steps; ++k) {
    s = rk4_step(s, p, dt);
    traj.times.push_back(static_cast<double>(k) * dt);
    traj.states.push_back(s);
    const double dist = std::hypot(s.v2 - eq.stable0.v2, s.v1 - eq.stable0.v1);
    if (dist < eps_stop) {
      traj.converged = true;
      break;
    }
  }
  return traj;
}

// central-difference samples (vv_i, dvv/dt_i) at interior indices
void central_differences(const std::vector<double>& t,
                         const std::vector<double>& vv,
                         std::vector<double>& out_vv,
                         std::vector<double>& out_h) {
  out_vv.clear();
  out_h.clear();
  for (size_t i = 1; i + 1 < vv.size(); ++i) {
    out_vv.push_back(vv[i]);
    out_h.push_back((vv[i + 1] - vv[i - 1]) / (t[i + 1] - t[i - 1]));
  }
}

}  // namespace

double DriftTable::h_at(double x) const {
  return lerp_table(vv, h, x, "drift");
}

double PotentialTable::u_at(double x) const {
  return lerp_table(vv, u, x, "potential");
}

Trajectory relax_trajectory(const CellParams& p, const Equilibria& eq,
                            double epsilon, double dt, double t_max) {
  p.validate();
  if (!(epsilon >= 0.0) || !(epsilon < eq.delta_vv))
    throw ValidationError("relax epsilon must lie in [0, delta_vv)");
  if (!(dt > 0.0) || !(dt <= p.rc()))
    throw ValidationError("relax dt must lie in (0, r*c]");
  if (!(t_max > 0.0)) throw ValidationError("relax t_max must be > 0");

  const StatePoint start{
      eq.stable0.v2 + (eq.delta_vv - epsilon) * eq.a,
      eq.stable0.v1 + (eq.delta_vv - epsilon) * eq.b};
  Trajectory traj = relax_from(p, eq, start, dt, t_max);
  traj.epsilon = epsilon;
  return traj;
}

DriftTable extract_drift(const Trajectory& traj, const ProjectionAxis& axis) {
  if (!traj.converged)
    throw ValidationError("trajectory did not converge; extraction needs a "
                          "completed relaxation");
  const size_t n = traj.states.size();
  if (n < 50)
    throw ValidationError("trajectory too short for extraction (" +
                          std::to_string(n) + " samples, need 50)");

  std::vector<double> vv(n);
  for (size_t i = 0; i < n; ++i) vv[i] = project(traj.states[i], axis);
  for (size_t i = 0; i + 1 < n; ++i) {
    if (!(vv[i + 1] < vv[i]))
      throw NonMonotoneError("vv(t) not strictly decreasing at sample " +
                             std::to_string(i + 1) +
                             "; h(vv) is not single-valued");
  }

  std::vector<double> cvv, ch;
  central_differences(traj.times, vv, cvv, ch);

  DriftTable d;
  d.delta_vv = axis.delta_vv;
  d.vv.push_back(0.0);
  d.h.push_back(0.0);
  for (size_t k = cvv.size(); k-- > 0;) {  // reversed interior is ascending
    if (cvv[k] <= 0.0 || cvv[k] >= axis.delta_vv) continue;
    d.vv.push_back(cvv[k]);
    d.h.push_back(ch[k]);
  }
  d.vv.push_back(axis.delta_vv);
  d.h.push_back(0.0);

  // tau from the exponential tail: ln vv is linear in t once vv < 0.1 delta_vv
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  int64_t m = 0;
  for (size_t i = 0; i < n; ++i) {
    if (vv[i] > 0.0 && vv[i] < 0.1 * axis.delta_vv) {
      const double y = std::log(vv[i]);
      st += traj.times[i];
      sy += y;
      stt += traj.times[i] * traj.times[i];
      sty += traj.times[i] * y;
      ++m;
    }
  }
  if (m < 3)
    throw ConvergenceError("too few tail samples for the tau fit");
  const double denom = static_cast<double>(m) * stt - st * st;
  const double slope = (static_cast<double>(m) * sty - st * sy) / denom;
  if (!(slope < 0.0) || !std::isfinite(slope))
    throw ConvergenceError("tau fit produced a non-negative slope");
  d.tau = -1.0 / slope;
  return d;
}

PotentialTable quasi_potential(const DriftTable& d) {
  auto it = std::lower_bound(d.vv.begin(), d.vv.end(), 0.0);
  if (it == d.vv.end() || *it != 0.0)
    throw ValidationError("drift table lacks the vv = 0 node");
  const size_t iz = static_cast<size_t>(it - d.vv.begin());

  PotentialTable u;
  u.vv = d.vv;
  u.delta_vv = d.delta_vv;
  u.u.assign(d.vv.size(), 0.0);
  for (size_t i = iz + 1; i < d.vv.size(); ++i)
    u.u[i] = u.u[i - 1] -
             0.5 * (d.h[i] + d.h[i - 1]) * (d.vv[i] - d.vv[i - 1]);
  for (size_t i = iz; i-- > 0;)
    u.u[i] = u.u[i + 1] +
             0.5 * (d.h[i] + d.h[i + 1]) * (d.vv[i + 1] - d.vv[i]);
  u.barrier = u.u.back();
  return u;
}

DriftTable extend_negative(const DriftTable& d, const CellParams& p,
                           const Equilibria& eq) {
  if (d.vv.front() < 0.0) return d;  // already extended

  const double sigma_vv = node_noise_sigma(p) * std::sqrt(d.tau / 2.0);
  const double depth = sigma_vv > 0.0 ? 10.0 * sigma_vv : 0.5 * d.delta_vv;

  ProjectionAxis axis;
  axis.origin = eq.stable0;
  axis.a = eq.a;
  axis.b = eq.b;
  axis.delta_vv = eq.delta_vv;

  std::vector<double> neg_vv, neg_h;
  std::string method = "trajectory";

  const StatePoint start = embed(-depth, axis);
  Trajectory traj = relax_from(p, eq, start, p.rc() / 200.0, 4000.0 * p.rc());
  if (traj.converged && traj.states.size() >= 10) {
    std::vector<double> vv(traj.states.size());
    for (size_t i = 0; i < vv.size(); ++i) vv[i] = project(traj.states[i], axis);
    std::vector<double> cvv, ch;
    central_differences(traj.times, vv, cvv, ch);
    for (size_t i = 0; i < cvv.size(); ++i) {
      if (cvv[i] >= -1e-5 * d.delta_vv) break;  // leave a clean gap at 0
      neg_vv.push_back(cvv[i]);
      neg_h.push_back(ch[i]);
    }
    for (size_t i = 0; i + 1 < neg_vv.size(); ++i) {
      if (!(neg_vv[i + 1] > neg_vv[i])) {  // not usable as a function of vv
        neg_vv.clear();
        neg_h.clear();
        break;
      }
    }
  }
  if (neg_vv.size() < 10) {  // harmonic fallback
    method = "harmonic";
    neg_vv.clear();
    neg_h.clear();
    const int n_grid = 200;
    for (int k = 0; k < n_grid; ++k) {
      const double x = -depth + depth * static_cast<double>(k) / n_grid;
      neg_vv.push_back(x);
      neg_h.push_back(-x / d.tau);
    }
  }

  DriftTable out;
  out.tau = d.tau;
  out.delta_vv = d.delta_vv;
  out.extension = method;
  out.vv = std::move(neg_vv);
  out.h = std::move(neg_h);
  out.vv.insert(out.vv.end(), d.vv.begin(), d.vv.end());
  out.h.insert(out.h.end(), d.h.begin(), d.h.end());
  return out;
}

void write_drift_csv(const std::string& path, const DriftTable& d,
                     const PotentialTable& u, const std::string& provenance) {
  std::string out = "# " + provenance + "\n";
  out += "vv_mV,h_mV_per_us,U_V2_per_s\n";
  for (size_t i = 0; i < d.vv.size(); ++i) {
    out += fmt_g17(d.vv[i] * 1e3);
    out += ',';
    out += fmt_g17(d.h[i] * 1e-3);  // V/s -> mV/us
    out += ',';
    out += fmt_g17(i < u.u.size() ? u.u[i] : 0.0);
    out += '\n';
  }
  write_text_file(path, out);
}

}  // namespace bitflip
