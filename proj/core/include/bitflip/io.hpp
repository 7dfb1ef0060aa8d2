#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bitflip/cell.hpp"

namespace bitflip {

// Shortest round-trip decimal form of a double (%.17g trimmed), used for all
// deterministic CSV and echo output.
std::string fmt_g17(double x);

// FNV-1a 64 of arbitrary text, 16 hex digits.
std::string fnv1a_hex(const std::string& text);

// FNV-1a 64 over the canonical parameter text, 16 hex digits.
std::string params_hash(const CellParams& p);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace bitflip
