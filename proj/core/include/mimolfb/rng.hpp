#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <utility>

namespace mimolfb {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
//
// A keyed bijection over 128-bit counters: every (key, counter) pair maps to
// four independent uniform 32-bit words. Streams never need to be skipped or
// jumped; workers simply derive disjoint counters.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key);
};

// A deterministic stream of random draws identified by (seed, domain,
// sequence). Distinct triples yield statistically independent streams, so
// Monte-Carlo workers can each own the stream of their block index and the
// aggregate is independent of how blocks are partitioned.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint32_t domain, std::uint64_t sequence);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  // k uniform random bits in the low positions, 0 <= k <= 64.
  std::uint64_t next_bits(int k);

  // Uniform double in [0, 1), 53-bit resolution.
  double next_unit();

  // Standard normal N(0,1) via Box-Muller; pairs are generated together and
  // the spare is cached.
  double next_gauss();

  // Circularly-symmetric complex Gaussian with unit total variance,
  // i.e. real and imaginary parts each N(0, 1/2).
  std::complex<double> next_cgauss();

 private:
  void refill();

  Philox4x32::Key key_;
  Philox4x32::Counter base_;
  std::uint64_t blocks_drawn_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int buf_pos_ = 4;
  double gauss_spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mimolfb
