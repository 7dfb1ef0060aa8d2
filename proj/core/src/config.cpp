#include "bitflip/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <utility>

#include "bitflip/errors.hpp"
#include "bitflip/io.hpp"

namespace bitflip {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

const std::pair<const char*, double> kUnits[] = {
    {"V", 1.0},      {"mV", 1e-3},    {"uV", 1e-6},   {"nV", 1e-9},
    {"s", 1.0},      {"ms", 1e-3},    {"us", 1e-6},   {"ns", 1e-9},
    {"ps", 1e-12},   {"F", 1.0},      {"pF", 1e-12},  {"fF", 1e-15},
    {"aF", 1e-18},   {"Ohm", 1.0},    {"kOhm", 1e3},  {"MOhm", 1e6},
    {"GOhm", 1e9},   {"Ω", 1.0}, {"kΩ", 1e3}, {"MΩ", 1e6},
    {"GΩ", 1e9}, {"K", 1.0},     {"Hz", 1.0},    {"kHz", 1e3},
    {"MHz", 1e6},    {"GHz", 1e9},
};

long long parse_int(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  if (t.empty()) throw ParseError(key + ": expected integer, got ''");
  char* end = nullptr;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size())
    throw ParseError(key + ": expected integer, got '" + t + "'");
  return v;
}

uint64_t parse_u64(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  if (t.empty() || t[0] == '-')
    throw ParseError(key + ": expected unsigned integer, got '" + t + "'");
  char* end = nullptr;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size())
    throw ParseError(key + ": expected unsigned integer, got '" + t + "'");
  return v;
}

const char* kValidTags[] = {"kish", "nobile", "siegert", "mc-1d", "mc-2d"};

std::vector<std::string> parse_methods(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(text);
  while (std::getline(ss, cur, ',')) {
    const std::string tag = trim(cur);
    bool ok = false;
    for (const char* t : kValidTags) ok = ok || tag == t;
    if (!ok)
      throw ValidationError("unknown estimator tag '" + tag +
                            "' (valid: kish, nobile, siegert, mc-1d, mc-2d)");
    if (std::find(out.begin(), out.end(), tag) == out.end()) out.push_back(tag);
  }
  if (out.empty())
    throw ValidationError("estimators.methods must list at least one tag");
  return out;
}

}  // namespace

double parse_quantity(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ParseError("empty quantity");
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end == t.c_str()) throw ParseError("not a number: '" + t + "'");
  const std::string suffix = trim(std::string(end));
  if (suffix.empty()) return v;
  for (const auto& [s, mult] : kUnits)
    if (suffix == s) return v * mult;
  throw ParseError("unknown unit suffix '" + suffix + "' in '" + t + "'");
}

RunConfig default_config() { return RunConfig{}; }

RunConfig load_config(const std::string& text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(lineno) +
                       ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    try {
      if (key == "cell.vdd") cfg.cell.vdd = parse_quantity(val);
      else if (key == "cell.vm") cfg.cell.vm = parse_quantity(val);
      else if (key == "cell.vs") cfg.cell.vs = parse_quantity(val);
      else if (key == "cell.r") cfg.cell.r = parse_quantity(val);
      else if (key == "cell.c") cfg.cell.c = parse_quantity(val);
      else if (key == "cell.temp") cfg.cell.temp = parse_quantity(val);
      else if (key == "cell.dv1") cfg.cell.dv1 = parse_quantity(val);
      else if (key == "cell.dv2") cfg.cell.dv2 = parse_quantity(val);
      else if (key == "cell.noise_scale") cfg.cell.noise_scale = parse_quantity(val);
      else if (key == "sweep.dv_start") cfg.dv_start = parse_quantity(val);
      else if (key == "sweep.dv_stop") cfg.dv_stop = parse_quantity(val);
      else if (key == "sweep.dv_step") cfg.dv_step = parse_quantity(val);
      else if (key == "mc.n_paths") {
        const long long n = parse_int(val, key);
        cfg.n_paths_1d = n;
        cfg.n_paths_2d = n;
      } else if (key == "mc.n_paths_1d") cfg.n_paths_1d = parse_int(val, key);
      else if (key == "mc.n_paths_2d") cfg.n_paths_2d = parse_int(val, key);
      else if (key == "mc.base_seed") cfg.base_seed = parse_u64(val, key);
      else if (key == "mc.t_max") cfg.t_max = parse_quantity(val);
      else if (key == "mc.fmax") cfg.fmax = parse_quantity(val);
      else if (key == "mc.threads") cfg.threads = parse_int(val, key);
      else if (key == "estimators.methods") cfg.estimators = parse_methods(val);
      else if (key == "output.dir") {
        if (val.empty()) throw ValidationError("output.dir must not be empty");
        cfg.output_dir = val;
      } else {
        throw ValidationError("unknown config key '" + key + "'");
      }
    } catch (ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " +
                       std::string(e.what()));
    }
  }

  cfg.cell.validate();
  if (!(cfg.dv_step > 0.0))
    throw ValidationError("sweep.dv_step must be > 0");
  if (cfg.dv_start > cfg.dv_stop)
    throw ValidationError("sweep.dv_start must be <= sweep.dv_stop");
  if (cfg.n_paths_1d < 1) throw ValidationError("mc.n_paths_1d must be >= 1");
  if (cfg.n_paths_2d < 1) throw ValidationError("mc.n_paths_2d must be >= 1");
  if (!(cfg.t_max > 0.0)) throw ValidationError("mc.t_max must be > 0");
  if (!(cfg.fmax > 0.0)) throw ValidationError("mc.fmax must be > 0");
  if (cfg.threads < 1) throw ValidationError("mc.threads must be >= 1");
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  return load_config(read_text_file(path));
}

std::string echo_config(const RunConfig& cfg) {
  std::string out;
  auto kv = [&out](const char* key, const std::string& val) {
    out += key;
    out += " = ";
    out += val;
    out += '\n';
  };
  kv("cell.vdd", fmt_g17(cfg.cell.vdd));
  kv("cell.vm", fmt_g17(cfg.cell.vm));
  kv("cell.vs", fmt_g17(cfg.cell.vs));
  kv("cell.r", fmt_g17(cfg.cell.r));
  kv("cell.c", fmt_g17(cfg.cell.c));
  kv("cell.temp", fmt_g17(cfg.cell.temp));
  kv("cell.dv1", fmt_g17(cfg.cell.dv1));
  kv("cell.dv2", fmt_g17(cfg.cell.dv2));
  kv("cell.noise_scale", fmt_g17(cfg.cell.noise_scale));
  kv("sweep.dv_start", fmt_g17(cfg.dv_start));
  kv("sweep.dv_stop", fmt_g17(cfg.dv_stop));
  kv("sweep.dv_step", fmt_g17(cfg.dv_step));
  kv("mc.n_paths_1d", std::to_string(cfg.n_paths_1d));
  kv("mc.n_paths_2d", std::to_string(cfg.n_paths_2d));
  kv("mc.base_seed", std::to_string(cfg.base_seed));
  kv("mc.t_max", fmt_g17(cfg.t_max));
  kv("mc.fmax", fmt_g17(cfg.fmax));
  kv("mc.threads", std::to_string(cfg.threads));
  std::string tags;
  for (const auto& t : cfg.estimators) {
    if (!tags.empty()) tags += ',';
    tags += t;
  }
  kv("estimators.methods", tags);
  kv("output.dir", cfg.output_dir);
  return out;
}

}  // namespace bitflip
