#include <doctest.h>

#include <cmath>
#include <vector>

#include "mimolfb/rng.hpp"

using namespace mimolfb;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Published test vectors for the 10-round configuration.
  auto out = Philox4x32::block({0, 0, 0, 0}, {0, 0});
  CHECK(out == Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu,
                                   0x9b00dbd8u});

  out = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                          {0xffffffffu, 0xffffffffu});
  CHECK(out == Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u,
                                   0x6d5451fdu});

  out = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          {0xa4093822u, 0x299f31d0u});
  CHECK(out == Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u,
                                   0x24126ea1u});
}

TEST_CASE("streams are deterministic and distinct") {
  RandomStream a(42, 3, 17), b(42, 3, 17);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u32() == b.next_u32());

  RandomStream c(42, 3, 18), d(42, 4, 17), e(43, 3, 17);
  RandomStream base(42, 3, 17);
  int same_c = 0, same_d = 0, same_e = 0;
  for (int i = 0; i < 64; ++i) {
    const auto v = base.next_u32();
    same_c += v == c.next_u32();
    same_d += v == d.next_u32();
    same_e += v == e.next_u32();
  }
  CHECK(same_c < 4);
  CHECK(same_d < 4);
  CHECK(same_e < 4);
}

TEST_CASE("uniform and gaussian moments") {
  RandomStream rng(7, 0, 0);
  const int n = 100000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    sum2 += u * u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.005);
  CHECK(std::abs(sum2 / n - 1.0 / 3.0) < 0.005);

  double gsum = 0, gsum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.next_gauss();
    gsum += g;
    gsum2 += g * g;
  }
  CHECK(std::abs(gsum / n) < 0.02);
  CHECK(std::abs(gsum2 / n - 1.0) < 0.03);
}

TEST_CASE("complex gaussian has unit total variance") {
  RandomStream rng(11, 0, 5);
  const int n = 100000;
  double p = 0, re = 0, im = 0;
  for (int i = 0; i < n; ++i) {
    const auto z = rng.next_cgauss();
    p += std::norm(z);
    re += z.real();
    im += z.imag();
  }
  CHECK(std::abs(p / n - 1.0) < 0.02);
  CHECK(std::abs(re / n) < 0.02);
  CHECK(std::abs(im / n) < 0.02);
}

TEST_CASE("next_bits covers the requested width") {
  RandomStream rng(3, 0, 9);
  for (int k : {1, 8, 16, 32, 48, 64}) {
    std::uint64_t seen_or = 0;
    for (int i = 0; i < 200; ++i) {
      const std::uint64_t v = rng.next_bits(k);
      if (k < 64) CHECK(v < (std::uint64_t(1) << k));
      seen_or |= v;
    }
    // Every bit position fires over 200 draws with overwhelming probability.
    if (k == 64)
      CHECK(seen_or == ~std::uint64_t(0));
    else
      CHECK(seen_or == (std::uint64_t(1) << k) - 1);
  }
}
