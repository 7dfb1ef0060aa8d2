// bitflip: noise-induced retention failure toolkit.
//
// Subcommands
//   extract   drift/potential tables for one operating point
//   simulate  Monte Carlo TTF ensemble (reduced 1D or full 2D)
//   estimate  closed-form / quadrature MTTF (kish, nobile, siegert)
//   sweep     full dv sweep from a config file, persisted to output.dir
//   report    rebuild table + plot CSV from an existing report.csv
//
// Exit codes: 0 clean, 1 fatal error (including fatal sweep rows),
// 2 config/usage problems.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bitflip/bitflip.hpp"

namespace {

using namespace bitflip;

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch())
      .count();
}

struct PointArtifacts {
  CellParams cell;
  Equilibria eq;
  ProjectionAxis axis;
  DriftTable drift;  // extended
  PotentialTable potential;
  double sigma_w = 0.0;
  double sigma_vv = 0.0;
};

// The standard per-point pipeline. dv, when given, applies the worst-case
// convention dv1 = +dv, dv2 = -dv on top of the configured cell.
PointArtifacts build_point(const RunConfig& cfg,
                           const std::optional<double>& dv) {
  PointArtifacts a;
  a.cell = cfg.cell;
  if (dv) {
    a.cell.dv1 = *dv;
    a.cell.dv2 = -*dv;
  }
  a.cell.validate();
  a.eq = find_equilibria(a.cell);
  a.axis = make_axis(a.eq);
  const Trajectory traj =
      relax_trajectory(a.cell, a.eq, 1e-3 * a.eq.delta_vv,
                       a.cell.rc() / 200.0, 2000.0 * a.cell.rc());
  a.drift = extend_negative(extract_drift(traj, a.axis), a.cell, a.eq);
  a.potential = quasi_potential(a.drift);
  a.sigma_w = node_noise_sigma(a.cell);
  a.sigma_vv = a.sigma_w * std::sqrt(a.drift.tau / 2.0);
  return a;
}

std::string drift_provenance(const RunConfig& cfg, const PointArtifacts& a) {
  return "params=" + params_hash(a.cell) +
         " epsilon=" + fmt_g17(1e-3 * a.eq.delta_vv) +
         " dt=" + fmt_g17(cfg.cell.rc() / 200.0) +
         " extension=" + a.drift.extension;
}

void print_kv(const char* key, const std::string& val) {
  std::cout << key << " = " << val << "\n";
}

int cmd_extract(const RunConfig& cfg, const std::optional<double>& dv,
                std::string out) {
  const double t0 = now_s();
  const PointArtifacts a = build_point(cfg, dv);
  if (out.empty()) out = cfg.output_dir + "/drift.csv";
  std::filesystem::create_directories(
      std::filesystem::path(out).parent_path().empty()
          ? "."
          : std::filesystem::path(out).parent_path().string());
  write_drift_csv(out, a.drift, a.potential, drift_provenance(cfg, a));
  print_kv("delta_vv_V", fmt_g17(a.eq.delta_vv));
  print_kv("tau_s", fmt_g17(a.drift.tau));
  print_kv("sigma_vv_V", fmt_g17(a.sigma_vv));
  print_kv("sigma_w_V_per_sqrt_s", fmt_g17(a.sigma_w));
  print_kv("barrier_V2_per_s", fmt_g17(a.potential.barrier));
  print_kv("extension", a.drift.extension);
  print_kv("wrote", out);
  print_kv("elapsed_s", fmt_g17(now_s() - t0));
  return 0;
}

int cmd_simulate(const RunConfig& cfg, const std::string& mode,
                 const std::optional<double>& dv, int64_t n, uint64_t seed,
                 std::string out) {
  const double t0 = now_s();
  const PointArtifacts a = build_point(cfg, dv);

  EnsembleOptions opt;
  opt.n = n;
  opt.base_seed = seed;
  opt.threads = cfg.threads;
  opt.t_max = cfg.t_max;

  TtfEnsemble ens;
  if (mode == "1d") {
    const SdeModel1D model{a.drift, a.sigma_w, a.eq.delta_vv};
    opt.dt = a.drift.tau / 400.0;  // same step rule as the sweep
    opt.mode = "reduced-1d";
    ens = run_ensemble(
        [&](RngStream& rng) {
          return simulate_path_1d(model, opt.dt, opt.t_max, rng);
        },
        opt);
  } else {
    opt.dt = 1.0 / (2.0 * cfg.fmax);
    opt.mode = "full-2d";
    ens = run_ensemble(
        [&](RngStream& rng) {
          return simulate_path_2d(a.cell, a.eq, opt.dt, opt.t_max, rng);
        },
        opt);
  }

  if (out.empty()) out = cfg.output_dir + "/ensemble_" + mode + ".csv";
  const auto parent = std::filesystem::path(out).parent_path();
  std::filesystem::create_directories(parent.empty() ? "." : parent.string());
  write_ensemble_csv(out, ens, params_hash(a.cell));

  const MttfEstimate st = mttf_stats(ens);
  print_kv("mode", ens.mode);
  print_kv("n", std::to_string(n));
  print_kv("censored", std::to_string(st.n_censored));
  print_kv("mttf_s", fmt_g17(st.mean));
  print_kv("ci95_lo_s", fmt_g17(st.lo));
  print_kv("ci95_hi_s", fmt_g17(st.hi));
  if (st.lower_bound) print_kv("note", "all paths censored; lower bound");
  print_kv("wrote", out);
  print_kv("elapsed_s", fmt_g17(now_s() - t0));
  return 0;
}

int cmd_estimate(const RunConfig& cfg, const std::string& method,
                 const std::optional<double>& dv, const std::string& out) {
  const PointArtifacts a = build_point(cfg, dv);
  EstimatorResult res;
  if (method == "kish")
    res = kish_mttf(a.eq.delta_vv, a.sigma_vv, a.drift.tau);
  else if (method == "nobile")
    res = nobile_mttf(a.eq.delta_vv, a.sigma_vv, a.drift.tau);
  else
    res = siegert_mttf(a.potential, a.sigma_w, a.eq.delta_vv);

  print_kv("method", res.method);
  print_kv("mttf_s", fmt_g17(res.mttf));
  print_kv("delta_vv_V", fmt_g17(a.eq.delta_vv));
  print_kv("sigma_vv_V", fmt_g17(a.sigma_vv));
  print_kv("tau_s", fmt_g17(a.drift.tau));
  print_kv("sigma_w_V_per_sqrt_s", fmt_g17(a.sigma_w));
  if (res.overflow_to_infinity) print_kv("flag", "overflow_to_infinity");
  if (res.truncation_warning) print_kv("flag", "truncation_warning");

  if (!out.empty()) {
    std::string csv = "# params=" + params_hash(a.cell) + "\n";
    csv += "method,mttf_s,delta_vv_V,sigma_vv_V,tau_s,flags\n";
    std::string flags;
    if (res.overflow_to_infinity) flags += "overflow_to_infinity";
    if (res.truncation_warning)
      flags += flags.empty() ? "truncation_warning" : ";truncation_warning";
    csv += res.method + ',' + fmt_g17(res.mttf) + ',' +
           fmt_g17(a.eq.delta_vv) + ',' + fmt_g17(a.sigma_vv) + ',' +
           fmt_g17(a.drift.tau) + ',' + flags + '\n';
    write_text_file(out, csv);
    print_kv("wrote", out);
  }
  return 0;
}

int cmd_sweep(const RunConfig& cfg, std::string out) {
  const double t0 = now_s();
  const SweepReport rep = run_sweep(cfg);
  if (out.empty()) out = cfg.output_dir;
  persist_sweep(rep, out);
  std::cout << compare_table(rep);
  print_kv("wrote", out + "/report.csv");
  print_kv("elapsed_s", fmt_g17(now_s() - t0));
  return rep.any_fatal ? 1 : 0;
}

int cmd_report(const std::string& in, std::string out) {
  const SweepReport rep = read_report_csv(in);
  if (out.empty()) out = std::filesystem::path(in).parent_path().string();
  if (out.empty()) out = ".";
  std::filesystem::create_directories(out);
  write_plot_csv(rep, out + "/mttf_vs_dv.csv");
  const std::string table = compare_table(rep);
  write_text_file(out + "/table.txt", table);
  std::cout << table;
  print_kv("wrote", out + "/mttf_vs_dv.csv");
  return rep.any_fatal ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noise-induced retention failure simulator/estimator"};
  app.require_subcommand(1);

  std::string config_path, dv_text, out_path, mode = "1d", method, in_path;
  int64_t n = -1;
  uint64_t seed = 0;
  bool seed_given = false;
  int threads = 0;

  auto add_common = [&](CLI::App* sub, bool dv_required) {
    sub->add_option("--config", config_path, "config file (flat key = value)");
    auto* o = sub->add_option("--dv", dv_text,
                              "offset magnitude, dv1 = +dv, dv2 = -dv "
                              "(SI suffix ok, e.g. 43mV)");
    if (dv_required) o->required();
    sub->add_option("--threads", threads, "worker threads for MC ensembles");
  };

  auto* ext = app.add_subcommand("extract", "drift and potential tables");
  add_common(ext, false);
  ext->add_option("--out", out_path, "output CSV path");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo TTF ensemble");
  add_common(sim, true);
  sim->add_option("--mode", mode, "1d | 2d")
      ->check(CLI::IsMember({"1d", "2d"}));
  sim->add_option("--n", n, "number of paths");
  sim->add_option("--seed", seed, "ensemble base seed")
      ->each([&](const std::string&) { seed_given = true; });
  sim->add_option("--out", out_path, "output CSV path");

  auto* est = app.add_subcommand("estimate", "closed-form MTTF");
  add_common(est, true);
  est->add_option("--method", method, "kish | nobile | siegert")
      ->required()
      ->check(CLI::IsMember({"kish", "nobile", "siegert"}));
  est->add_option("--out", out_path, "optional one-row CSV");

  auto* swp = app.add_subcommand("sweep", "full dv sweep");
  swp->add_option("--config", config_path, "config file")->required();
  swp->add_option("--threads", threads, "worker threads for MC ensembles");
  swp->add_option("--out", out_path, "output directory (default output.dir)");

  auto* repc = app.add_subcommand("report", "table + plot data from a report");
  repc->add_option("--in", in_path, "report.csv path")->required();
  repc->add_option("--out", out_path, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);  // prints help or the usage error
    return rc == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg =
        config_path.empty() ? default_config() : load_config_file(config_path);
    if (threads > 0) cfg.threads = threads;
    std::optional<double> dv;
    if (!dv_text.empty()) dv = parse_quantity(dv_text);

    if (app.got_subcommand(ext)) return cmd_extract(cfg, dv, out_path);
    if (app.got_subcommand(sim)) {
      const int64_t n_eff =
          n > 0 ? n : (mode == "1d" ? cfg.n_paths_1d : cfg.n_paths_2d);
      const uint64_t seed_eff = seed_given ? seed : cfg.base_seed;
      return cmd_simulate(cfg, mode, dv, n_eff, seed_eff, out_path);
    }
    if (app.got_subcommand(est)) return cmd_estimate(cfg, method, dv, out_path);
    if (app.got_subcommand(swp)) return cmd_sweep(cfg, out_path);
    return cmd_report(in_path, out_path);
  } catch (ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
