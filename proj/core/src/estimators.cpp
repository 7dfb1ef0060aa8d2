#include "bitflip/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "bitflip/errors.hpp"

namespace bitflip {

namespace {

constexpr double kPi = 3.14159265358979323846;

double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                            double fa, double b, double fb, double m,
                            double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol,
                              depth - 1) +
         adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol,
                              depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double tol = rel_tol * std::max(std::abs(whole), 1e-300);
  return adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ValidationError(std::string(name) + " must be > 0");
}

}  // namespace

EstimatorResult kish_mttf(double delta_vv, double sigma_vv, double tau) {
  if (!(delta_vv >= 0.0)) throw ValidationError("delta_vv must be >= 0");
  require_positive(sigma_vv, "sigma_vv");
  require_positive(tau, "tau");

  EstimatorResult res;
  res.method = "kish";
  res.delta_vv = delta_vv;
  res.sigma_vv = sigma_vv;
  res.tau = tau;
  res.sigma_w = std::sqrt(2.0 * sigma_vv * sigma_vv / tau);
  res.primary = "sigma_vv,tau";

  const double x = delta_vv * delta_vv / (2.0 * sigma_vv * sigma_vv);
  const double ln_mttf = std::log(std::sqrt(3.0) * kPi * tau) + x;
  const double val = std::exp(ln_mttf);
  if (!std::isfinite(val)) {
    res.mttf = INFINITY;
    res.overflow_to_infinity = true;
  } else {
    res.mttf = val;
  }
  return res;
}

EstimatorResult nobile_mttf(double delta_vv, double sigma_vv, double tau) {
  if (!(delta_vv >= 0.0)) throw ValidationError("delta_vv must be >= 0");
  require_positive(sigma_vv, "sigma_vv");
  require_positive(tau, "tau");

  EstimatorResult res;
  res.method = "nobile";
  res.delta_vv = delta_vv;
  res.sigma_vv = sigma_vv;
  res.tau = tau;
  res.sigma_w = std::sqrt(2.0 * sigma_vv * sigma_vv / tau);
  res.primary = "sigma_vv,tau";

  const double b = delta_vv / (sigma_vv * std::sqrt(2.0));
  const double integral = adaptive_simpson(
      [](double u) { return std::exp(u * u) * (1.0 + std::erf(u)); }, 0.0, b,
      1e-10);
  const double val = 2.0 * tau * std::sqrt(kPi) * integral;
  if (!std::isfinite(val)) {
    res.mttf = INFINITY;
    res.overflow_to_infinity = true;
  } else {
    res.mttf = val;
  }
  return res;
}

EstimatorResult siegert_mttf(const PotentialTable& u, double sigma_w,
                             double delta_vv) {
  require_positive(sigma_w, "sigma_w");
  require_positive(delta_vv, "delta_vv");
  if (u.vv.size() < 3 || !(u.vv.front() < 0.0))
    throw ValidationError(
        "potential table must extend below 0 (see extend_negative)");
  if (u.vv.back() < delta_vv * (1.0 - 1e-12))
    throw ValidationError("potential table does not reach delta_vv");

  const double sw2 = sigma_w * sigma_w;
  const double cap = delta_vv / 1000.0;

  // refined grid over [y_lo, delta_vv] with exact nodes at 0 and delta_vv
  std::vector<double> z, uu;
  size_t top = u.vv.size() - 1;
  while (top > 0 && u.vv[top] > delta_vv * (1.0 + 1e-12)) --top;
  z.push_back(u.vv[0]);
  uu.push_back(u.u[0]);
  for (size_t i = 0; i < top; ++i) {
    const double v0 = u.vv[i], v1 = u.vv[i + 1];
    const double u0 = u.u[i], u1 = u.u[i + 1];
    const int m = std::max(1, static_cast<int>(std::ceil((v1 - v0) / cap)));
    for (int j = 1; j < m; ++j) {
      const double w = static_cast<double>(j) / m;
      z.push_back(v0 + (v1 - v0) * w);
      uu.push_back(u0 + (u1 - u0) * w);
    }
    z.push_back(v1);
    uu.push_back(u1);
  }

  size_t iz = 0;
  while (iz < z.size() && z[iz] != 0.0) ++iz;
  if (iz == z.size())
    throw ValidationError("potential table lacks the vv = 0 node");

  // inner integrand and its running integral from y_lo
  std::vector<double> g(z.size()), inner(z.size());
  double gmax = 0.0;
  for (size_t i = 0; i < z.size(); ++i) {
    g[i] = std::exp(-2.0 * uu[i] / sw2);
    gmax = std::max(gmax, g[i]);
  }
  inner[0] = 0.0;
  for (size_t i = 1; i < z.size(); ++i)
    inner[i] = inner[i - 1] + 0.5 * (g[i] + g[i - 1]) * (z[i] - z[i - 1]);

  double outer = 0.0;
  double f_prev = std::exp(2.0 * uu[iz] / sw2) * inner[iz];
  for (size_t i = iz + 1; i < z.size(); ++i) {
    const double f = std::exp(2.0 * uu[i] / sw2) * inner[i];
    outer += 0.5 * (f + f_prev) * (z[i] - z[i - 1]);
    f_prev = f;
  }

  EstimatorResult res;
  res.method = "siegert";
  res.delta_vv = delta_vv;
  res.sigma_w = sigma_w;
  res.primary = "delta_vv,sigma_w";
  res.truncation_warning = g[0] > 1e-8 * gmax;
  const double val = 2.0 * (2.0 / sw2) * outer;
  if (!std::isfinite(val)) {
    res.mttf = INFINITY;
    res.overflow_to_infinity = true;
  } else {
    res.mttf = val;
  }
  return res;
}

}  // namespace bitflip
