#include "bitflip/sde.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "bitflip/errors.hpp"
#include "bitflip/io.hpp"

namespace bitflip {

PathResult simulate_path_1d(const SdeModel1D& m, double dt, double t_max,
                            RngStream& rng) {
  if (!(dt > 0.0) || !(dt <= m.drift.tau / 100.0))
    throw ValidationError("1d dt must lie in (0, tau/100]");
  if (!(t_max > 0.0)) throw ValidationError("1d t_max must be > 0");

  const double delta = m.delta_vv;
  const double sq = m.sigma_w * std::sqrt(dt);
  const double s2dt = m.sigma_w * m.sigma_w * dt;
  const int64_t n_steps = static_cast<int64_t>(t_max / dt);

  double v = 0.0;
  for (int64_t k = 1; k <= n_steps; ++k) {
    const double h = m.drift.h_at(v);
    const double vn = v + h * dt + sq * rng.normal();
    bool crossed = vn >= delta;
    if (!crossed && s2dt > 0.0) {
      // Brownian-bridge probability of an excursion past delta inside the
      // step; skipped when it cannot round above zero
      const double arg = -2.0 * (delta - v) * (delta - vn) / s2dt;
      if (arg > -60.0) crossed = rng.uniform01() < std::exp(arg);
    }
    if (crossed) {
      const double raw = static_cast<double>(k) * dt;
      return {2.0 * raw, raw, false};
    }
    v = vn;
  }
  return {t_max, t_max, true};
}

PathResult simulate_path_2d(const CellParams& p, const Equilibria& eq,
                            double dt, double t_max, RngStream& rng) {
  if (!(dt > 0.0) || !(dt <= p.rc() / 20.0))
    throw ValidationError("2d dt must lie in (0, r*c/20]");
  if (!(t_max > 0.0)) throw ValidationError("2d t_max must be > 0");

  const double sq = node_noise_sigma(p) * std::sqrt(dt);
  const int64_t n_steps = static_cast<int64_t>(t_max / dt);

  StatePoint s = eq.stable0;
  for (int64_t k = 1; k <= n_steps; ++k) {
    const RateVector f = drift_field(s, p);
    s.v2 += f.d_v2 * dt + sq * rng.normal();
    s.v1 += f.d_v1 * dt + sq * rng.normal();
    if (s.v1 <= s.v2) {
      const double raw = static_cast<double>(k) * dt;
      return {raw, raw, false};  // the crossing itself is the flip, no x2
    }
  }
  return {t_max, t_max, true};
}

TtfEnsemble run_ensemble(const std::function<PathResult(RngStream&)>& sim,
                         const EnsembleOptions& opt) {
  if (opt.n < 1) throw ValidationError("ensemble needs n >= 1");
  const int threads =
      std::max(1, std::min<int>(opt.threads, static_cast<int>(opt.n)));

  TtfEnsemble e;
  e.paths.resize(static_cast<size_t>(opt.n));
  e.dt = opt.dt;
  e.t_max = opt.t_max;
  e.seed = opt.base_seed;
  e.mode = opt.mode;

  std::vector<std::vector<std::string>> errors(threads);
  auto worker = [&](int t) {
    const int64_t chunk = (opt.n + threads - 1) / threads;
    const int64_t lo = t * chunk;
    const int64_t hi = std::min<int64_t>(opt.n, lo + chunk);
    for (int64_t i = lo; i < hi; ++i) {
      const uint64_t index = opt.start_index + static_cast<uint64_t>(i);
      RngStream rng(opt.base_seed, index);
      PathRecord& rec = e.paths[static_cast<size_t>(i)];
      rec.index = index;
      try {
        const PathResult r = sim(rng);
        rec.ttf = r.ttf;
        rec.raw = r.raw;
        rec.censored = r.censored;
      } catch (const std::exception& ex) {
        errors[t].push_back("path " + std::to_string(index) + ": " + ex.what());
      }
    }
  };

  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }

  std::string aggregated;
  int64_t n_failed = 0;
  for (const auto& list : errors)
    for (const auto& msg : list) {
      ++n_failed;
      if (aggregated.size() < 512) aggregated += msg + "; ";
    }
  if (n_failed > 0)
    throw DomainError(std::to_string(n_failed) + " path(s) failed: " +
                      aggregated);

  for (const PathRecord& rec : e.paths) {
    if (rec.censored) {
      ++e.n_censored;
    } else {
      e.samples.push_back(rec.ttf);
      e.raw_samples.push_back(rec.raw);
    }
  }
  std::sort(e.samples.begin(), e.samples.end());
  std::sort(e.raw_samples.begin(), e.raw_samples.end());
  return e;
}

MttfEstimate mttf_stats(const TtfEnsemble& e) {
  if (e.paths.empty()) throw EmptyEnsembleError("ensemble has no paths");

  MttfEstimate est;
  est.method = e.mode == "full-2d" ? "mc-2d" : "mc-1d";
  est.n_censored = e.n_censored;

  if (e.samples.empty()) {  // every path censored: the mean is a lower bound
    est.mean = est.lo = est.hi = e.t_max;
    est.n = static_cast<int64_t>(e.paths.size());
    est.censored_warning = true;
    est.lower_bound = true;
    return est;
  }

  const int64_t n = static_cast<int64_t>(e.samples.size());
  double sum = 0.0;
  for (double x : e.samples) sum += x;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double x : e.samples) ss += (x - mean) * (x - mean);
  const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  const double half = 1.96 * sd / std::sqrt(static_cast<double>(n));

  est.mean = mean;
  est.lo = mean - half;
  est.hi = mean + half;
  est.n = n;
  est.censored_warning = e.n_censored > 0;
  return est;
}

void write_ensemble_csv(const std::string& path, const TtfEnsemble& e,
                        const std::string& params_hash) {
  std::string out = "# {\"seed\":" + std::to_string(e.seed) +
                    ",\"dt\":" + fmt_g17(e.dt) + ",\"mode\":\"" + e.mode +
                    "\",\"t_max\":" + fmt_g17(e.t_max) + ",\"params\":\"" +
                    params_hash + "\"}\n";
  out += "path_index,ttf_s,censored\n";
  for (const PathRecord& rec : e.paths) {
    out += std::to_string(rec.index);
    out += ',';
    out += fmt_g17(rec.ttf);
    out += ',';
    out += rec.censored ? '1' : '0';
    out += '\n';
  }
  write_text_file(path, out);
}

double ks_statistic_exponential(const std::vector<double>& sorted_samples,
                                double mean) {
  const size_t n = sorted_samples.size();
  double d = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double f = 1.0 - std::exp(-sorted_samples[i] / mean);
    const double up = static_cast<double>(i + 1) / n - f;
    const double lo = f - static_cast<double>(i) / n;
    d = std::max({d, up, lo});
  }
  return d;
}

double ks_pvalue(double d, int64_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  double q = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * lambda * lambda * k * k);
    q += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::min(1.0, std::max(0.0, q));
}

double tail_exponential_ks_pvalue(const std::vector<double>& sorted_samples,
                                  double percentile) {
  const size_t n = sorted_samples.size();
  if (n < 20) throw ValidationError("tail KS needs at least 20 samples");
  const size_t cut = static_cast<size_t>(percentile * static_cast<double>(n));
  const double q = sorted_samples[cut];
  std::vector<double> tail;
  for (size_t i = cut; i < n; ++i)
    if (sorted_samples[i] > q) tail.push_back(sorted_samples[i] - q);
  if (tail.size() < 10) throw ValidationError("tail KS tail too small");
  double mean = 0.0;
  for (double x : tail) mean += x;
  mean /= static_cast<double>(tail.size());
  const double d = ks_statistic_exponential(tail, mean);
  return ks_pvalue(d, static_cast<int64_t>(tail.size()));
}

}  // namespace bitflip
