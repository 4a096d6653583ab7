#include "mimolfb/rng.hpp"

#include <cmath>

namespace mimolfb {

namespace {

constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;  // golden ratio
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;  // sqrt(3) - 1
constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                      std::uint32_t& lo) {
  const std::uint64_t p = std::uint64_t(a) * b;
  hi = std::uint32_t(p >> 32);
  lo = std::uint32_t(p);
}

inline Philox4x32::Counter round_once(const Philox4x32::Counter& c,
                                      const Philox4x32::Key& k) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mul_hi_lo(kMul0, c[0], hi0, lo0);
  mul_hi_lo(kMul1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    ctr = round_once(ctr, key);
  }
  return ctr;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint32_t domain,
                           std::uint64_t sequence)
    : key_{std::uint32_t(seed),
           std::uint32_t(seed >> 32) ^ (domain * kWeyl0)},
      base_{0, 0, std::uint32_t(sequence), std::uint32_t(sequence >> 32)} {}

void RandomStream::refill() {
  Philox4x32::Counter ctr = base_;
  ctr[0] = std::uint32_t(blocks_drawn_);
  ctr[1] = std::uint32_t(blocks_drawn_ >> 32);
  buf_ = Philox4x32::block(ctr, key_);
  ++blocks_drawn_;
  buf_pos_ = 0;
}

std::uint32_t RandomStream::next_u32() {
  if (buf_pos_ >= 4) refill();
  return buf_[buf_pos_++];
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return lo | (hi << 32);
}

std::uint64_t RandomStream::next_bits(int k) {
  if (k <= 0) return 0;
  if (k <= 32) return next_u32() >> (32 - k);
  return next_u64() >> (64 - k);
}

double RandomStream::next_unit() {
  // 53 high-quality bits -> [0,1) on the 2^-53 grid.
  return double(next_u64() >> 11) * 0x1p-53;
}

double RandomStream::next_gauss() {
  if (has_spare_) {
    has_spare_ = false;
    return gauss_spare_;
  }
  const double u1 = 1.0 - next_unit();  // (0,1], keeps log() finite
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  gauss_spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

std::complex<double> RandomStream::next_cgauss() {
  const double re = next_gauss();
  const double im = next_gauss();
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

}  // namespace mimolfb
