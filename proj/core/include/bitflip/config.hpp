#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bitflip/cell.hpp"

namespace bitflip {

// Flat `section.key = value` configuration with SI-suffixed quantities.
struct RunConfig {
  CellParams cell = default_cell();  // dv1/dv2 overridden per sweep point
  double dv_start = 0.041;   // V; sweep convention dv1 = +dv, dv2 = -dv
  double dv_stop = 0.046;
  double dv_step = 0.00125;
  int64_t n_paths_1d = 10000;
  int64_t n_paths_2d = 200;
  uint64_t base_seed = 42;
  double t_max = 10e-6;      // censoring horizon (s)
  double fmax = 20e9;        // 2D noise bandwidth (Hz); dt_2d = 1/(2 fmax)
  int threads = 1;
  std::vector<std::string> estimators = {"kish", "nobile", "siegert", "mc-1d",
                                         "mc-2d"};
  std::string output_dir = "out";
};

RunConfig default_config();

// Parses a quantity like "41mV", "10MOhm", "25ps", "50aF", "20GHz" into SI
// base units. Throws ParseError on malformed input or unknown suffix.
double parse_quantity(const std::string& text);

// Throws ParseError (with line number) or ValidationError (with field name).
RunConfig load_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

// Canonical serialization of every effective value, in SI base units; feeding
// the echo back through load_config reproduces the config bit for bit.
std::string echo_config(const RunConfig& cfg);

}  // namespace bitflip
