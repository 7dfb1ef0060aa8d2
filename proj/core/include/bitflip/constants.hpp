#pragma once

namespace bitflip {

struct PhysicalConstants {
  static constexpr double kB = 1.380649e-23;  // J/K, exact SI value
};

inline constexpr double kB = PhysicalConstants::kB;

}  // namespace bitflip
