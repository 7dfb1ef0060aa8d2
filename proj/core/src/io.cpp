#include "bitflip/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "bitflip/errors.hpp"

namespace bitflip {

std::string fmt_g17(double x) {
  char buf[40];
  // shortest form that round-trips
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == x) return buf;
  }
  return buf;
}

std::string fnv1a_hex(const std::string& text) {
  uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string params_hash(const CellParams& p) {
  std::string text;
  const double fields[] = {p.vdd, p.vm, p.vs, p.r,  p.c,
                           p.temp, p.dv1, p.dv2, p.noise_scale};
  for (double f : fields) {
    text += fmt_g17(f);
    text += ';';
  }
  return fnv1a_hex(text);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace bitflip
