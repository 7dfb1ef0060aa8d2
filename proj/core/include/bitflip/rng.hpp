#pragma once

#include <array>
#include <cstdint>

namespace bitflip {

// Philox4x32-10 counter-based generator (Salmon et al. constants).
struct Philox4x32 {
  static std::array<uint32_t, 4> block(const std::array<uint32_t, 4>& ctr,
                                       const std::array<uint32_t, 2>& key);
};

// One independent stream per (seed, stream) pair. The stream id occupies the
// upper counter words, a block index the lower ones, so streams never collide
// and a stream can draw 2^64 blocks. Used as (base_seed, path index).
class RngStream {
 public:
  RngStream(uint64_t seed, uint64_t stream);

  uint32_t next_u32();
  uint64_t next_u64();
  double uniform01();  // in (0, 1), 53-bit resolution, never 0
  double normal();     // standard Gaussian via Box-Muller, pair-cached

 private:
  void refill();

  std::array<uint32_t, 2> key_;
  uint64_t stream_;
  uint64_t block_ = 0;
  std::array<uint32_t, 4> buf_{};
  int pos_ = 4;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace bitflip
