#include "bitflip/rng.hpp"

#include <cmath>

namespace bitflip {

namespace {

constexpr uint32_t kM0 = 0xD2511F53u;
constexpr uint32_t kM1 = 0xCD9E8D57u;
constexpr uint32_t kW0 = 0x9E3779B9u;
constexpr uint32_t kW1 = 0xBB67AE85u;

inline void philox_round(std::array<uint32_t, 4>& x,
                         const std::array<uint32_t, 2>& k) {
  const uint64_t p0 = static_cast<uint64_t>(kM0) * x[0];
  const uint64_t p1 = static_cast<uint64_t>(kM1) * x[2];
  const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32);
  const uint32_t lo0 = static_cast<uint32_t>(p0);
  const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32);
  const uint32_t lo1 = static_cast<uint32_t>(p1);
  x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
}

}  // namespace

std::array<uint32_t, 4> Philox4x32::block(const std::array<uint32_t, 4>& ctr,
                                          const std::array<uint32_t, 2>& key) {
  std::array<uint32_t, 4> x = ctr;
  std::array<uint32_t, 2> k = key;
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      k[0] += kW0;
      k[1] += kW1;
    }
    philox_round(x, k);
  }
  return x;
}

RngStream::RngStream(uint64_t seed, uint64_t stream)
    : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
      stream_(stream) {}

void RngStream::refill() {
  const std::array<uint32_t, 4> ctr = {
      static_cast<uint32_t>(block_), static_cast<uint32_t>(block_ >> 32),
      static_cast<uint32_t>(stream_), static_cast<uint32_t>(stream_ >> 32)};
  buf_ = Philox4x32::block(ctr, key_);
  ++block_;
  pos_ = 0;
}

uint32_t RngStream::next_u32() {
  if (pos_ >= 4) refill();
  return buf_[pos_++];
}

uint64_t RngStream::next_u64() {
  const uint64_t lo = next_u32();
  const uint64_t hi = next_u32();
  return lo | (hi << 32);
}

double RngStream::uniform01() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 6.283185307179586476925286766559 * u2;
  spare_ = r * std::sin(th);
  have_spare_ = true;
  return r * std::cos(th);
}

}  // namespace bitflip
