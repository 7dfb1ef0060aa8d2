#include "bitflip/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "bitflip/errors.hpp"
#include "bitflip/io.hpp"

namespace bitflip {

namespace {

bool wants(const RunConfig& cfg, const char* tag) {
  return std::find(cfg.estimators.begin(), cfg.estimators.end(), tag) !=
         cfg.estimators.end();
}

std::string csv_safe(std::string s) {
  for (char& ch : s)
    if (ch == ',' || ch == '\n') ch = ';';
  return s;
}

std::string opt_cell(const std::optional<double>& v) {
  return v ? fmt_g17(*v) : std::string();
}

std::optional<double> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::strtod(s.c_str(), nullptr);
}

const char kReportHeader[] =
    "dv_V,status,delta_vv_V,tau_s,sigma_vv_V,sigma_w_V_per_sqrt_s,"
    "barrier_V2_per_s,parabolic_barrier_V2_per_s,"
    "mttf_mc2d_s,ci2d_lo_s,ci2d_hi_s,censored_2d,"
    "mttf_mc1d_s,ci1d_lo_s,ci1d_hi_s,censored_1d,"
    "mttf_kish_s,mttf_nobile_s,mttf_siegert_s";

}  // namespace

SweepReport run_sweep(const RunConfig& cfg) {
  SweepReport rep;
  rep.cfg = cfg;
  // The report identity must not depend on the worker count, only on what
  // was computed; hash the echo with the thread knob pinned.
  RunConfig canon = cfg;
  canon.threads = 1;
  rep.params_hash = fnv1a_hex(echo_config(canon));

  // Points run sequentially; cfg.threads parallelizes inside each ensemble.
  // Point p's 1D and 2D runs use stream ranges starting at (2p)<<32 and
  // (2p+1)<<32 of the single base seed, so no two paths anywhere share a
  // stream and the report does not depend on the thread count.
  for (int64_t p = 0;; ++p) {
    const double dv = cfg.dv_start + static_cast<double>(p) * cfg.dv_step;
    if (dv > cfg.dv_stop + 0.5 * cfg.dv_step) break;

    SweepRow row;
    row.dv = dv;
    CellParams cell = cfg.cell;
    cell.dv1 = dv;
    cell.dv2 = -dv;

    try {
      const Equilibria eq = find_equilibria(cell);
      const ProjectionAxis axis = make_axis(eq);
      const double dt_relax = cell.rc() / 200.0;
      const Trajectory traj = relax_trajectory(
          cell, eq, 1e-3 * eq.delta_vv, dt_relax, 2000.0 * cell.rc());
      const DriftTable base = extract_drift(traj, axis);
      const DriftTable ext = extend_negative(base, cell, eq);
      const PotentialTable pot = quasi_potential(ext);

      row.delta_vv = eq.delta_vv;
      row.tau = ext.tau;
      row.sigma_w = node_noise_sigma(cell);
      row.sigma_vv = row.sigma_w * std::sqrt(ext.tau / 2.0);
      row.barrier = pot.barrier;
      row.parabolic_barrier = eq.delta_vv * eq.delta_vv / (2.0 * ext.tau);
      row.drift = ext;
      row.potential = pot;

      if (wants(cfg, "kish"))
        row.mttf_kish = kish_mttf(eq.delta_vv, row.sigma_vv, ext.tau).mttf;
      if (wants(cfg, "nobile"))
        row.mttf_nobile = nobile_mttf(eq.delta_vv, row.sigma_vv, ext.tau).mttf;
      if (wants(cfg, "siegert"))
        row.mttf_siegert = siegert_mttf(pot, row.sigma_w, eq.delta_vv).mttf;

      if (wants(cfg, "mc-1d")) {
        const SdeModel1D model{ext, row.sigma_w, eq.delta_vv};
        EnsembleOptions opt;
        opt.n = cfg.n_paths_1d;
        opt.base_seed = cfg.base_seed;
        opt.start_index = static_cast<uint64_t>(2 * p) << 32;
        opt.threads = cfg.threads;
        // tau/400 keeps the Euler step bias well inside the n = 10^4 CI
        opt.dt = ext.tau / 400.0;
        opt.t_max = cfg.t_max;
        opt.mode = "reduced-1d";
        const TtfEnsemble ens = run_ensemble(
            [&](RngStream& rng) {
              return simulate_path_1d(model, opt.dt, opt.t_max, rng);
            },
            opt);
        const MttfEstimate st = mttf_stats(ens);
        row.mttf_mc1d = st.mean;
        row.ci1d_lo = st.lo;
        row.ci1d_hi = st.hi;
        row.censored_1d = st.n_censored;
      }

      if (wants(cfg, "mc-2d")) {
        EnsembleOptions opt;
        opt.n = cfg.n_paths_2d;
        opt.base_seed = cfg.base_seed;
        opt.start_index = static_cast<uint64_t>(2 * p + 1) << 32;
        opt.threads = cfg.threads;
        opt.dt = 1.0 / (2.0 * cfg.fmax);
        opt.t_max = cfg.t_max;
        opt.mode = "full-2d";
        const TtfEnsemble ens = run_ensemble(
            [&](RngStream& rng) {
              return simulate_path_2d(cell, eq, opt.dt, opt.t_max, rng);
            },
            opt);
        const MttfEstimate st = mttf_stats(ens);
        row.mttf_mc2d = st.mean;
        row.ci2d_lo = st.lo;
        row.ci2d_hi = st.hi;
        row.censored_2d = st.n_censored;
      }
    } catch (MonostableError&) {
      row.status = "monostable";
    } catch (Error& e) {
      row.status = std::string("error: ") + e.what();
      rep.any_fatal = true;
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

void write_report_csv(const SweepReport& rep, const std::string& path) {
  std::string out;
  out += "# config=" + rep.params_hash +
         " cell=" + params_hash(rep.cfg.cell) +
         " base_seed=" + std::to_string(rep.cfg.base_seed) +
         " n_paths_1d=" + std::to_string(rep.cfg.n_paths_1d) +
         " n_paths_2d=" + std::to_string(rep.cfg.n_paths_2d) +
         " t_max=" + fmt_g17(rep.cfg.t_max) +
         " fmax=" + fmt_g17(rep.cfg.fmax) + "\n";
  out += kReportHeader;
  out += '\n';
  for (const SweepRow& r : rep.rows) {
    const bool ok = r.status == "ok";
    out += fmt_g17(r.dv);
    out += ',' + csv_safe(r.status);
    if (ok) {
      out += ',' + fmt_g17(r.delta_vv);
      out += ',' + fmt_g17(r.tau);
      out += ',' + fmt_g17(r.sigma_vv);
      out += ',' + fmt_g17(r.sigma_w);
      out += ',' + fmt_g17(r.barrier);
      out += ',' + fmt_g17(r.parabolic_barrier);
    } else {
      out += ",,,,,,";
    }
    out += ',' + opt_cell(r.mttf_mc2d);
    out += ',' + opt_cell(r.ci2d_lo);
    out += ',' + opt_cell(r.ci2d_hi);
    out += ',' + (r.mttf_mc2d ? std::to_string(r.censored_2d) : std::string());
    out += ',' + opt_cell(r.mttf_mc1d);
    out += ',' + opt_cell(r.ci1d_lo);
    out += ',' + opt_cell(r.ci1d_hi);
    out += ',' + (r.mttf_mc1d ? std::to_string(r.censored_1d) : std::string());
    out += ',' + opt_cell(r.mttf_kish);
    out += ',' + opt_cell(r.mttf_nobile);
    out += ',' + opt_cell(r.mttf_siegert);
    out += '\n';
  }
  write_text_file(path, out);
}

SweepReport read_report_csv(const std::string& path) {
  const std::string text = read_text_file(path);
  std::stringstream ss(text);
  std::string line;
  SweepReport rep;
  bool saw_header = false;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const size_t at = line.find("config=");
      if (at != std::string::npos)
        rep.params_hash = line.substr(at + 7, 16);
      continue;
    }
    if (!saw_header) {
      if (line != kReportHeader)
        throw ParseError(path + ": unexpected report header");
      saw_header = true;
      continue;
    }
    const auto cells = split_csv_line(line);
    if (cells.size() != 19)
      throw ParseError(path + " line " + std::to_string(lineno) +
                       ": expected 19 cells, got " +
                       std::to_string(cells.size()));
    SweepRow r;
    r.dv = std::strtod(cells[0].c_str(), nullptr);
    r.status = cells[1];
    if (r.status == "ok") {
      r.delta_vv = std::strtod(cells[2].c_str(), nullptr);
      r.tau = std::strtod(cells[3].c_str(), nullptr);
      r.sigma_vv = std::strtod(cells[4].c_str(), nullptr);
      r.sigma_w = std::strtod(cells[5].c_str(), nullptr);
      r.barrier = std::strtod(cells[6].c_str(), nullptr);
      r.parabolic_barrier = std::strtod(cells[7].c_str(), nullptr);
    } else if (r.status.rfind("error: ", 0) == 0) {
      rep.any_fatal = true;
    }
    r.mttf_mc2d = parse_opt(cells[8]);
    r.ci2d_lo = parse_opt(cells[9]);
    r.ci2d_hi = parse_opt(cells[10]);
    if (!cells[11].empty())
      r.censored_2d = std::strtoll(cells[11].c_str(), nullptr, 10);
    r.mttf_mc1d = parse_opt(cells[12]);
    r.ci1d_lo = parse_opt(cells[13]);
    r.ci1d_hi = parse_opt(cells[14]);
    if (!cells[15].empty())
      r.censored_1d = std::strtoll(cells[15].c_str(), nullptr, 10);
    r.mttf_kish = parse_opt(cells[16]);
    r.mttf_nobile = parse_opt(cells[17]);
    r.mttf_siegert = parse_opt(cells[18]);
    rep.rows.push_back(std::move(r));
  }
  if (!saw_header) throw ParseError(path + ": missing report header");
  return rep;
}

std::string compare_table(const SweepReport& rep) {
  auto num = [](std::optional<double> v) {
    char buf[24];
    if (!v) return std::string("-");
    std::snprintf(buf, sizeof(buf), "%.4g", *v);
    return std::string(buf);
  };
  auto fixed = [](double v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return std::string(buf);
  };

  std::vector<std::vector<std::string>> grid;
  grid.push_back({"dv_mV", "dvv_mV", "tau_ns", "sig_mV", "U_act", "U_par",
                  "mc2d_s", "mc1d_s", "kish_s", "nobile_s", "siegert_s",
                  "c2d", "c1d", "status"});
  for (const SweepRow& r : rep.rows) {
    const bool ok = r.status == "ok";
    grid.push_back({
        fixed(r.dv * 1e3),
        ok ? fixed(r.delta_vv * 1e3) : "-",
        ok ? fixed(r.tau * 1e9) : "-",
        ok ? fixed(r.sigma_vv * 1e3) : "-",
        ok ? fixed(r.barrier) : "-",
        ok ? fixed(r.parabolic_barrier) : "-",
        num(r.mttf_mc2d),
        num(r.mttf_mc1d),
        num(r.mttf_kish),
        num(r.mttf_nobile),
        num(r.mttf_siegert),
        r.mttf_mc2d ? std::to_string(r.censored_2d) : "-",
        r.mttf_mc1d ? std::to_string(r.censored_1d) : "-",
        r.status,
    });
  }

  std::vector<size_t> width(grid[0].size(), 0);
  for (const auto& row : grid)
    for (size_t i = 0; i < row.size(); ++i)
      width[i] = std::max(width[i], row[i].size());

  std::string out;
  for (const auto& row : grid) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += "  ";
      out += row[i];
      if (i + 1 < row.size())
        out.append(width[i] - row[i].size(), ' ');
    }
    out += '\n';
  }
  return out;
}

void write_plot_csv(const SweepReport& rep, const std::string& path) {
  std::string out =
      "dv_mV,mttf_mc2d_s,mttf_mc1d_s,mttf_kish_s,mttf_nobile_s,"
      "mttf_siegert_s,ci_lo_s,ci_hi_s\n";
  for (const SweepRow& r : rep.rows) {
    out += fmt_g17(r.dv * 1e3);
    out += ',' + opt_cell(r.mttf_mc2d);
    out += ',' + opt_cell(r.mttf_mc1d);
    out += ',' + opt_cell(r.mttf_kish);
    out += ',' + opt_cell(r.mttf_nobile);
    out += ',' + opt_cell(r.mttf_siegert);
    const auto& lo = r.mttf_mc2d ? r.ci2d_lo : r.ci1d_lo;
    const auto& hi = r.mttf_mc2d ? r.ci2d_hi : r.ci1d_hi;
    out += ',' + opt_cell(lo);
    out += ',' + opt_cell(hi);
    out += '\n';
  }
  write_text_file(path, out);
}

void persist_sweep(const SweepReport& rep, const std::string& dir) {
  std::filesystem::create_directories(dir);
  write_report_csv(rep, dir + "/report.csv");
  write_plot_csv(rep, dir + "/mttf_vs_dv.csv");
  write_text_file(dir + "/table.txt", compare_table(rep));

  for (const SweepRow& r : rep.rows) {
    if (r.status != "ok") continue;
    CellParams cell = rep.cfg.cell;
    cell.dv1 = r.dv;
    cell.dv2 = -r.dv;
    char name[64];
    std::snprintf(name, sizeof(name), "drift_%.6gmV.csv", r.dv * 1e3);
    const std::string prov =
        "params=" + params_hash(cell) +
        " epsilon=" + fmt_g17(1e-3 * r.delta_vv) +
        " dt=" + fmt_g17(rep.cfg.cell.rc() / 200.0) +
        " extension=" + r.drift.extension;
    write_drift_csv(dir + "/" + name, r.drift, r.potential, prov);
  }
}

}  // namespace bitflip
