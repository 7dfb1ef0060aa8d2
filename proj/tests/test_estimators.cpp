// Closed-form and quadrature MTTF estimators.

#include <cmath>
#include <vector>

#include "bitflip/errors.hpp"
#include "bitflip/estimators.hpp"
#include "bitflip/rng.hpp"
#include "bitflip/sde.hpp"
#include "doctest.h"

using namespace bitflip;

namespace {

// U(v) = v^2 / (2 tau) tabulated from -10 sigma to delta with an exact 0.0
// node; the OU quasi-potential.
PotentialTable parabolic_table(double sigma_vv, double tau, double delta) {
  PotentialTable t;
  const double step = sigma_vv / 50.0;
  const int n_lo = 500;
  const int n_hi = static_cast<int>(std::lround(delta / step));
  for (int i = -n_lo; i <= n_hi; ++i) {
    const double v = static_cast<double>(i) * step;
    t.vv.push_back(v);
    t.u.push_back(v * v / (2.0 * tau));
  }
  t.delta_vv = delta;
  t.barrier = t.u.back();
  return t;
}

PotentialTable flat_table(double ylo, double delta, int n) {
  PotentialTable t;
  const double step = delta / n;
  const int n_lo = static_cast<int>(std::lround(-ylo / step));
  for (int i = -n_lo; i <= n; ++i) {
    t.vv.push_back(static_cast<double>(i) * step);
    t.u.push_back(0.0);
  }
  t.delta_vv = delta;
  t.barrier = 0.0;
  return t;
}

}  // namespace

TEST_CASE("kish prefactor at zero barrier") {
  const EstimatorResult r = kish_mttf(0.0, 0.01, 1.0);
  CHECK(r.mttf == doctest::Approx(5.4413980927026536).epsilon(1e-14));
  CHECK(r.method == "kish");
  CHECK(r.primary == "sigma_vv,tau");
  CHECK(r.delta_vv == 0.0);
  CHECK(r.sigma_vv == 0.01);
  CHECK(r.tau == 1.0);
  CHECK_FALSE(r.overflow_to_infinity);
}

TEST_CASE("kish at four sigma") {
  const EstimatorResult r = kish_mttf(0.04, 0.01, 1e-6);
  CHECK(r.mttf == doctest::Approx(0.016220579105115602).epsilon(1e-12));
}

TEST_CASE("kish scales linearly in tau") {
  const EstimatorResult a = kish_mttf(0.03, 0.01, 1e-6);
  const EstimatorResult b = kish_mttf(0.03, 0.01, 1e-5);
  CHECK(b.mttf == doctest::Approx(10.0 * a.mttf).epsilon(1e-14));
}

TEST_CASE("kish log-mttf slope against the barrier exponent is one") {
  const double sigma = 0.01, tau = 1e-6;
  const double d1 = 0.02, d2 = 0.03;
  const EstimatorResult r1 = kish_mttf(d1, sigma, tau);
  const EstimatorResult r2 = kish_mttf(d2, sigma, tau);
  const double dlog = std::log(r2.mttf) - std::log(r1.mttf);
  const double dx = (d2 * d2 - d1 * d1) / (2.0 * sigma * sigma);
  CHECK(dlog == doctest::Approx(dx).epsilon(1e-12));
}

TEST_CASE("kish overflow reports infinity with a flag") {
  const EstimatorResult r = kish_mttf(0.4, 0.01, 1e-6);  // 40 sigma
  CHECK(std::isinf(r.mttf));
  CHECK(r.overflow_to_infinity);
}

TEST_CASE("estimator input validation") {
  CHECK_THROWS_AS(kish_mttf(0.01, 0.0, 1e-6), ValidationError);
  CHECK_THROWS_AS(kish_mttf(0.01, 0.01, 0.0), ValidationError);
  CHECK_THROWS_AS(kish_mttf(-0.01, 0.01, 1e-6), ValidationError);
  CHECK_THROWS_AS(nobile_mttf(0.01, -1.0, 1e-6), ValidationError);
  CHECK_THROWS_AS(nobile_mttf(0.01, 0.01, -1e-6), ValidationError);
}

TEST_CASE("nobile vanishes with the barrier") {
  const EstimatorResult r = nobile_mttf(0.0, 0.01, 1e-6);
  CHECK(r.mttf == 0.0);
  CHECK(r.method == "nobile");
}

TEST_CASE("nobile matches the ou first-passage oracle") {
  // Raw OU mean first-passage times in units of tau at delta/sigma = 1, 2, 3
  // are 2.0934066496783218, 10.428409397995949, 86.931619898888341; the
  // estimator doubles them.
  const double tau = 1e-6, sigma = 0.01;
  const double oracle[3] = {2.0934066496783218, 10.428409397995949,
                            86.931619898888341};
  for (int k = 1; k <= 3; ++k) {
    const EstimatorResult r = nobile_mttf(k * sigma, sigma, tau);
    CHECK(r.mttf ==
          doctest::Approx(2.0 * oracle[k - 1] * tau).epsilon(1e-9));
  }
}

TEST_CASE("kish sits above nobile and the gap widens with the barrier") {
  // Same exponential, prefactor ratio grows like delta/sigma: 1.93, 2.82,
  // 4.02, 5.19 at delta/sigma = 2..5. Within a factor 3 only up to about
  // 3 sigma; at 5 sigma the two differ by a factor 5.19.
  const double sigma = 0.01, tau = 1e-6;
  double prev = 1.0;
  for (int k = 2; k <= 5; ++k) {
    const double ratio = kish_mttf(k * sigma, sigma, tau).mttf /
                         nobile_mttf(k * sigma, sigma, tau).mttf;
    CHECK(ratio > prev);
    prev = ratio;
  }
  const double r3 = kish_mttf(3 * sigma, sigma, tau).mttf /
                    nobile_mttf(3 * sigma, sigma, tau).mttf;
  CHECK(r3 < 3.0);
  const double r5 = kish_mttf(5 * sigma, sigma, tau).mttf /
                    nobile_mttf(5 * sigma, sigma, tau).mttf;
  CHECK(r5 == doctest::Approx(5.187294371090662).epsilon(1e-6));
  CHECK(r5 < 10.0);
}

TEST_CASE("siegert on a flat potential matches the truncated free integral") {
  // U = 0 collapses the double integral to
  //   (4/sigma_w^2) (delta^2/2 - y_lo delta),
  // and the flat inner integrand must trip the truncation warning.
  const double delta = 1e-3, ylo = -5e-4, sigma_w = 2.0;
  const PotentialTable t = flat_table(ylo, delta, 20);
  const EstimatorResult r = siegert_mttf(t, sigma_w, delta);
  const double want =
      4.0 / (sigma_w * sigma_w) * (delta * delta / 2.0 - ylo * delta);
  CHECK(r.mttf == doctest::Approx(want).epsilon(1e-12));
  CHECK(r.truncation_warning);
  CHECK(r.method == "siegert");
  CHECK(r.primary == "delta_vv,sigma_w");
}

TEST_CASE("siegert on a parabolic potential reproduces nobile") {
  const double sigma = 0.01, tau = 1e-6;
  const double delta = 2.0 * sigma;
  const double sigma_w = std::sqrt(2.0 * sigma * sigma / tau);
  const PotentialTable t = parabolic_table(sigma, tau, delta);
  const EstimatorResult s = siegert_mttf(t, sigma_w, delta);
  const EstimatorResult n = nobile_mttf(delta, sigma, tau);
  CHECK(s.mttf == doctest::Approx(n.mttf).epsilon(5e-3));
  CHECK_FALSE(s.truncation_warning);  // e^{-50} tail, cutoff is adequate
}

TEST_CASE("siegert agrees with a direct simulation of the same table") {
  const double sigma = 0.01, tau = 1e-6;
  const double delta = 2.0 * sigma;
  const double sigma_w = std::sqrt(2.0 * sigma * sigma / tau);
  const PotentialTable t = parabolic_table(sigma, tau, delta);
  const EstimatorResult s = siegert_mttf(t, sigma_w, delta);

  SdeModel1D m;
  const double step = sigma / 50.0;
  for (int i = -500; i <= 100; ++i) {
    const double v = static_cast<double>(i) * step;
    m.drift.vv.push_back(v);
    m.drift.h.push_back(-v / tau);
  }
  m.drift.tau = tau;
  m.drift.delta_vv = delta;
  m.sigma_w = sigma_w;
  m.delta_vv = delta;

  EnsembleOptions opt;
  opt.n = 2000;
  opt.base_seed = 99;
  opt.dt = tau / 200.0;
  opt.t_max = 1e-2;
  opt.mode = "reduced-1d";
  const MttfEstimate mc = mttf_stats(run_ensemble(
      [&](RngStream& rng) { return simulate_path_1d(m, opt.dt, opt.t_max, rng); },
      opt));
  const double se = (mc.hi - mc.mean) / 1.96;
  CHECK(std::abs(mc.mean - s.mttf) < 3.0 * se);
}

TEST_CASE("siegert preconditions") {
  const double sigma = 0.01, tau = 1e-6, delta = 0.02;
  const PotentialTable good = parabolic_table(sigma, tau, delta);
  const double sigma_w = std::sqrt(2.0 * sigma * sigma / tau);

  CHECK_THROWS_AS(siegert_mttf(good, 0.0, delta), ValidationError);
  CHECK_THROWS_AS(siegert_mttf(good, sigma_w, 0.0), ValidationError);

  PotentialTable unextended;
  for (int i = 0; i <= 100; ++i) {
    const double v = delta * i / 100.0;
    unextended.vv.push_back(v);
    unextended.u.push_back(v * v / (2.0 * tau));
  }
  unextended.delta_vv = delta;
  CHECK_THROWS_WITH_AS(siegert_mttf(unextended, sigma_w, delta),
                       doctest::Contains("extend"), ValidationError);

  CHECK_THROWS_AS(siegert_mttf(good, sigma_w, 2.0 * delta), ValidationError);

  // no exact 0.0 node, and the offset is chosen so grid refinement cannot
  // land on 0 either
  PotentialTable shifted;
  const double step = sigma / 50.0;
  for (int i = -500; i <= 100; ++i) {
    const double v = (static_cast<double>(i) + 0.37) * step;
    shifted.vv.push_back(v);
    shifted.u.push_back(v * v / (2.0 * tau));
  }
  shifted.delta_vv = shifted.vv.back();
  CHECK_THROWS_WITH_AS(siegert_mttf(shifted, sigma_w, shifted.vv.back()),
                       doctest::Contains("vv = 0"), ValidationError);
}

TEST_CASE("estimators echo their inputs") {
  const EstimatorResult n = nobile_mttf(0.03, 0.01, 2e-6);
  CHECK(n.delta_vv == 0.03);
  CHECK(n.sigma_vv == 0.01);
  CHECK(n.tau == 2e-6);
  CHECK(n.sigma_w == doctest::Approx(std::sqrt(2.0 * 1e-4 / 2e-6)).epsilon(1e-15));
  CHECK(n.primary == "sigma_vv,tau");
}
