#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "bitflip/rng.hpp"
#include "doctest.h"

using namespace bitflip;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // reference vectors from the Random123 distribution (kat_vectors)
  const std::array<uint32_t, 4> z{0u, 0u, 0u, 0u};
  const std::array<uint32_t, 2> zk{0u, 0u};
  const auto r0 = Philox4x32::block(z, zk);
  CHECK(r0[0] == 0x6627e8d5u);
  CHECK(r0[1] == 0xe169c58du);
  CHECK(r0[2] == 0xbc57ac4cu);
  CHECK(r0[3] == 0x9b00dbd8u);

  const std::array<uint32_t, 4> f{0xffffffffu, 0xffffffffu, 0xffffffffu,
                                  0xffffffffu};
  const std::array<uint32_t, 2> fk{0xffffffffu, 0xffffffffu};
  const auto r1 = Philox4x32::block(f, fk);
  CHECK(r1[0] == 0x408f276du);
  CHECK(r1[1] == 0x41c83b0eu);
  CHECK(r1[2] == 0xa20bc7c6u);
  CHECK(r1[3] == 0x6d5451fdu);

  const std::array<uint32_t, 4> pi{0x243f6a88u, 0x85a308d3u, 0x13198a2eu,
                                   0x03707344u};
  const std::array<uint32_t, 2> pik{0xa4093822u, 0x299f31d0u};
  const auto r2 = Philox4x32::block(pi, pik);
  CHECK(r2[0] == 0xd16cfe09u);
  CHECK(r2[1] == 0x94fdccebu);
  CHECK(r2[2] == 0x5001e420u);
  CHECK(r2[3] == 0x24126ea1u);
}

TEST_CASE("streams are deterministic and independent") {
  RngStream a(42, 7);
  RngStream b(42, 7);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u32() == b.next_u32());

  RngStream c(42, 8);
  RngStream d(43, 7);
  int c_diff = 0, d_diff = 0;
  RngStream a2(42, 7);
  for (int i = 0; i < 64; ++i) {
    const uint32_t ref = a2.next_u32();
    c_diff += ref != c.next_u32();
    d_diff += ref != d.next_u32();
  }
  CHECK(c_diff > 48);
  CHECK(d_diff > 48);
}

TEST_CASE("u64 is two u32 draws glued lo-first") {
  RngStream a(3, 4);
  RngStream b(3, 4);
  const uint32_t lo = a.next_u32();
  const uint32_t hi = a.next_u32();
  const uint64_t w = b.next_u64();
  CHECK(w == (static_cast<uint64_t>(hi) << 32 | lo));
}

TEST_CASE("uniform01 lies strictly inside (0, 1)") {
  RngStream rng(1, 0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  // mean 1/2, sd 1/sqrt(12 n)
  CHECK(std::abs(sum / n - 0.5) < 3.0 / std::sqrt(12.0 * n));
}

TEST_CASE("normal moments and pair caching") {
  RngStream rng(5, 11);
  const int n = 100000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s1 += x;
    s2 += x * x;
  }
  const double mean = s1 / n;
  const double var = s2 / n - mean * mean;
  CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / n));

  RngStream x(5, 11), y(5, 11);
  for (int i = 0; i < 9; ++i) (void)y.normal();
  RngStream z(5, 11);
  for (int i = 0; i < 9; ++i) CHECK(x.normal() == z.normal());
}

TEST_CASE("draws stay deterministic across block refills") {
  // one philox block holds 4 u32s; walk well past several refills
  RngStream a(9, 2);
  std::vector<uint32_t> first;
  for (int i = 0; i < 37; ++i) first.push_back(a.next_u32());
  RngStream b(9, 2);
  for (int i = 0; i < 37; ++i) CHECK(b.next_u32() == first[i]);
}
