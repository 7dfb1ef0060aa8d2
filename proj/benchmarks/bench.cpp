#include <benchmark/benchmark.h>

#include "bitflip/bitflip.hpp"

namespace {

using namespace bitflip;

CellParams bench_cell() {
  CellParams p = default_cell();
  p.dv1 = 0.043;
  p.dv2 = -0.043;
  return p;
}

struct Pipeline {
  CellParams cell = bench_cell();
  Equilibria eq;
  ProjectionAxis axis;
  DriftTable drift;
  PotentialTable pot;
  double sigma_w = 0.0;

  Pipeline() {
    eq = find_equilibria(cell);
    axis = make_axis(eq);
    const Trajectory traj = relax_trajectory(
        cell, eq, 1e-3 * eq.delta_vv, cell.rc() / 200.0, 2000.0 * cell.rc());
    drift = extend_negative(extract_drift(traj, axis), cell, eq);
    pot = quasi_potential(drift);
    sigma_w = node_noise_sigma(cell);
  }
};

const Pipeline& pipeline() {
  static Pipeline p;
  return p;
}

void bm_philox_block(benchmark::State& state) {
  std::array<uint32_t, 4> ctr{0, 0, 0, 0};
  const std::array<uint32_t, 2> key{123, 456};
  for (auto _ : state) {
    ctr[0]++;
    benchmark::DoNotOptimize(Philox4x32::block(ctr, key));
  }
}
BENCHMARK(bm_philox_block);

void bm_normal(benchmark::State& state) {
  RngStream rng(7, 0);
  for (auto _ : state) benchmark::DoNotOptimize(rng.normal());
}
BENCHMARK(bm_normal);

void bm_drift_lookup(benchmark::State& state) {
  const Pipeline& p = pipeline();
  double x = 0.3 * p.eq.delta_vv;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p.drift.h_at(x));
    x = x < 0.6 * p.eq.delta_vv ? x * 1.001 : 0.3 * p.eq.delta_vv;
  }
}
BENCHMARK(bm_drift_lookup);

void bm_path_1d(benchmark::State& state) {
  const Pipeline& p = pipeline();
  const SdeModel1D m{p.drift, p.sigma_w, p.eq.delta_vv};
  const double dt = p.drift.tau / 200.0;
  uint64_t i = 0;
  for (auto _ : state) {
    RngStream rng(99, i++);
    benchmark::DoNotOptimize(simulate_path_1d(m, dt, 2e-7, rng));
  }
}
BENCHMARK(bm_path_1d);

void bm_path_2d(benchmark::State& state) {
  const Pipeline& p = pipeline();
  const double dt = 25e-12;
  uint64_t i = 0;
  for (auto _ : state) {
    RngStream rng(99, i++);
    benchmark::DoNotOptimize(simulate_path_2d(p.cell, p.eq, dt, 2e-8, rng));
  }
}
BENCHMARK(bm_path_2d);

void bm_extraction(benchmark::State& state) {
  const CellParams cell = bench_cell();
  const Equilibria eq = find_equilibria(cell);
  const ProjectionAxis axis = make_axis(eq);
  for (auto _ : state) {
    const Trajectory traj = relax_trajectory(
        cell, eq, 1e-3 * eq.delta_vv, cell.rc() / 200.0, 2000.0 * cell.rc());
    benchmark::DoNotOptimize(extract_drift(traj, axis));
  }
}
BENCHMARK(bm_extraction);

void bm_siegert(benchmark::State& state) {
  const Pipeline& p = pipeline();
  for (auto _ : state)
    benchmark::DoNotOptimize(siegert_mttf(p.pot, p.sigma_w, p.eq.delta_vv));
}
BENCHMARK(bm_siegert);

}  // namespace

BENCHMARK_MAIN();
