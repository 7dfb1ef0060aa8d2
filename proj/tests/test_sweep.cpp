// Sweep driver and report round-trip.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "bitflip/config.hpp"
#include "bitflip/drift.hpp"
#include "bitflip/errors.hpp"
#include "bitflip/estimators.hpp"
#include "bitflip/io.hpp"
#include "bitflip/projection.hpp"
#include "bitflip/sweep.hpp"
#include "doctest.h"

using namespace bitflip;

namespace {

RunConfig quick_config() {
  RunConfig cfg = default_config();
  cfg.dv_start = cfg.dv_stop = 0.043;
  cfg.estimators = {"kish", "nobile", "siegert"};
  return cfg;
}

}  // namespace

TEST_CASE("single-point sweep equals the hand-composed pipeline") {
  const RunConfig cfg = quick_config();
  const SweepReport rep = run_sweep(cfg);
  REQUIRE(rep.rows.size() == 1);
  const SweepRow& row = rep.rows[0];
  CHECK(row.status == "ok");
  CHECK_FALSE(rep.any_fatal);

  CellParams p = cfg.cell;
  p.dv1 = 0.043;
  p.dv2 = -0.043;
  const Equilibria eq = find_equilibria(p);
  const ProjectionAxis axis = make_axis(eq);
  const Trajectory traj = relax_trajectory(
      p, eq, 1e-3 * axis.delta_vv, p.rc() / 200.0, 2000.0 * p.rc());
  const DriftTable ext = extend_negative(extract_drift(traj, axis), p, eq);
  const PotentialTable pot = quasi_potential(ext);
  const double sigma_w = node_noise_sigma(p);

  CHECK(row.delta_vv == axis.delta_vv);
  CHECK(row.tau == ext.tau);
  CHECK(row.sigma_w == sigma_w);
  CHECK(row.sigma_vv == sigma_w * std::sqrt(ext.tau / 2.0));
  CHECK(row.barrier == pot.barrier);
  CHECK(row.parabolic_barrier ==
        axis.delta_vv * axis.delta_vv / (2.0 * ext.tau));

  REQUIRE(row.mttf_kish.has_value());
  REQUIRE(row.mttf_nobile.has_value());
  REQUIRE(row.mttf_siegert.has_value());
  CHECK(*row.mttf_kish ==
        kish_mttf(axis.delta_vv, row.sigma_vv, ext.tau).mttf);
  CHECK(*row.mttf_nobile ==
        nobile_mttf(axis.delta_vv, row.sigma_vv, ext.tau).mttf);
  CHECK(*row.mttf_siegert == siegert_mttf(pot, sigma_w, axis.delta_vv).mttf);
  CHECK_FALSE(row.mttf_mc1d.has_value());
  CHECK_FALSE(row.mttf_mc2d.has_value());

  // pipeline conservation: the persisted tables are the report's numbers
  CHECK(row.drift.tau == row.tau);
  CHECK(row.drift.delta_vv == row.delta_vv);
  CHECK(row.potential.barrier == row.barrier);
}

TEST_CASE("monostable points are flagged rows, not failures") {
  RunConfig cfg = quick_config();
  cfg.dv_start = cfg.dv_stop = 0.0474;
  const SweepReport rep = run_sweep(cfg);
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.rows[0].status == "monostable");
  CHECK_FALSE(rep.any_fatal);
  CHECK_FALSE(rep.rows[0].mttf_kish.has_value());
  CHECK(compare_table(rep).find("monostable") != std::string::npos);
}

TEST_CASE("report csv round-trips bit for bit") {
  RunConfig cfg = quick_config();
  SweepReport rep;
  rep.cfg = cfg;
  rep.params_hash = "00000000deadbeef";

  SweepRow a;
  a.dv = 0.041;
  a.delta_vv = 0.043873;
  a.tau = 7.78e-10;
  a.sigma_vv = 0.0113;
  a.sigma_w = 575.63509274539543;
  a.barrier = 3.1e-4;
  a.parabolic_barrier = 1.2371e-3;
  a.mttf_kish = 0.5;
  a.mttf_mc1d = 1e-7;
  a.ci1d_lo = 0.9e-7;
  a.ci1d_hi = 1.1e-7;
  a.censored_1d = 3;

  SweepRow b;
  b.dv = 0.0474;
  b.status = "monostable";

  rep.rows = {a, b};

  const std::string path = "test_report_roundtrip.csv";
  write_report_csv(rep, path);
  const SweepReport back = read_report_csv(path);
  std::remove(path.c_str());

  CHECK(back.params_hash == rep.params_hash);
  REQUIRE(back.rows.size() == 2);
  const SweepRow& ra = back.rows[0];
  CHECK(ra.dv == a.dv);
  CHECK(ra.status == "ok");
  CHECK(ra.delta_vv == a.delta_vv);
  CHECK(ra.tau == a.tau);
  CHECK(ra.sigma_vv == a.sigma_vv);
  CHECK(ra.sigma_w == a.sigma_w);
  CHECK(ra.barrier == a.barrier);
  CHECK(ra.parabolic_barrier == a.parabolic_barrier);
  REQUIRE(ra.mttf_kish.has_value());
  CHECK(*ra.mttf_kish == 0.5);
  REQUIRE(ra.mttf_mc1d.has_value());
  CHECK(*ra.mttf_mc1d == 1e-7);
  CHECK(*ra.ci1d_lo == 0.9e-7);
  CHECK(*ra.ci1d_hi == 1.1e-7);
  CHECK(ra.censored_1d == 3);
  CHECK_FALSE(ra.mttf_nobile.has_value());
  CHECK_FALSE(ra.mttf_mc2d.has_value());
  CHECK_FALSE(back.any_fatal);

  const SweepRow& rb = back.rows[1];
  CHECK(rb.status == "monostable");
  CHECK_FALSE(rb.mttf_kish.has_value());
}

TEST_CASE("error rows mark the report fatal on read-back") {
  SweepReport rep;
  rep.cfg = quick_config();
  rep.params_hash = "0";
  SweepRow bad;
  bad.dv = 0.042;
  bad.status = "error: relax diverged";
  rep.rows = {bad};
  rep.any_fatal = true;

  const std::string path = "test_report_fatal.csv";
  write_report_csv(rep, path);
  const SweepReport back = read_report_csv(path);
  std::remove(path.c_str());
  CHECK(back.any_fatal);
  CHECK(back.rows[0].status == "error: relax diverged");
}

TEST_CASE("plot csv carries one line per row under a pinned header") {
  SweepReport rep;
  rep.cfg = quick_config();
  SweepRow a;
  a.dv = 0.045;
  a.mttf_kish = 2e-8;
  a.mttf_mc1d = 1e-8;
  a.ci1d_lo = 0.8e-8;
  a.ci1d_hi = 1.2e-8;
  rep.rows = {a};

  const std::string path = "test_plot.csv";
  write_plot_csv(rep, path);
  const std::string got = read_text_file(path);
  std::remove(path.c_str());

  const std::string header =
      "dv_mV,mttf_mc2d_s,mttf_mc1d_s,mttf_kish_s,mttf_nobile_s,"
      "mttf_siegert_s,ci_lo_s,ci_hi_s\n";
  REQUIRE(got.substr(0, header.size()) == header);
  const std::string body = got.substr(header.size());
  CHECK(body == "45,,1e-08,2e-08,,,8e-09,1.2e-08\n");
}

TEST_CASE("mini sweep is deterministic and internally consistent") {
  RunConfig cfg = default_config();
  cfg.dv_start = 0.0445;
  cfg.dv_stop = 0.046;
  cfg.dv_step = 0.0015;
  cfg.n_paths_1d = 200;
  cfg.n_paths_2d = 20;
  cfg.t_max = 1e-6;

  const SweepReport rep = run_sweep(cfg);
  REQUIRE(rep.rows.size() == 2);
  for (const SweepRow& row : rep.rows) {
    CHECK(row.status == "ok");
    REQUIRE(row.mttf_mc1d.has_value());
    REQUIRE(row.mttf_mc2d.has_value());
    CHECK(*row.ci1d_lo <= *row.mttf_mc1d);
    CHECK(*row.mttf_mc1d <= *row.ci1d_hi);
    CHECK(row.drift.tau == row.tau);
    CHECK(row.potential.barrier == row.barrier);
    CHECK(row.barrier < row.parabolic_barrier);
  }

  RunConfig threaded = cfg;
  threaded.threads = 3;
  const SweepReport rep3 = run_sweep(threaded);

  const std::string p1 = "test_sweep_t1.csv";
  const std::string p3 = "test_sweep_t3.csv";
  write_report_csv(rep, p1);
  write_report_csv(rep3, p3);
  const std::string s1 = read_text_file(p1);
  std::string s3 = read_text_file(p3);
  std::remove(p1.c_str());
  std::remove(p3.c_str());

  CHECK(s1 == s3);

  const std::string table = compare_table(rep);
  CHECK(table.find("dv_mV") != std::string::npos);
  CHECK(table.find("kish_s") != std::string::npos);
}

TEST_CASE("persist_sweep writes the full artifact set") {
  RunConfig cfg = quick_config();
  cfg.output_dir = "test_persist_out";
  const SweepReport rep = run_sweep(cfg);
  persist_sweep(rep, cfg.output_dir);

  namespace fs = std::filesystem;
  CHECK(fs::exists("test_persist_out/report.csv"));
  CHECK(fs::exists("test_persist_out/mttf_vs_dv.csv"));
  CHECK(fs::exists("test_persist_out/table.txt"));
  CHECK(fs::exists("test_persist_out/drift_43mV.csv"));

  const SweepReport back = read_report_csv("test_persist_out/report.csv");
  REQUIRE(back.rows.size() == 1);
  CHECK(back.rows[0].delta_vv == rep.rows[0].delta_vv);
  CHECK(back.rows[0].tau == rep.rows[0].tau);
  CHECK(back.rows[0].sigma_vv == rep.rows[0].sigma_vv);
  fs::remove_all("test_persist_out");
}
