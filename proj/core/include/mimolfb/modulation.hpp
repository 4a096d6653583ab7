#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "mimolfb/linalg.hpp"

namespace mimolfb {

// A finite arithmetic progression of integers, lo, lo+step, ..., used both
// for the real PAM alphabet S and for the difference set D.
struct CoordSet {
  int lo = 0;
  int step = 1;
  int count = 1;

  int value(int i) const { return lo + i * step; }
  int max() const { return lo + (count - 1) * step; }
  bool contains(int v) const {
    return v >= lo && v <= max() && (v - lo) % step == 0;
  }
};

// Square M-QAM alphabet with unnormalized integer coordinates and per-axis
// Gray bit labels.
//
// Bit conventions (fixed, documented):
//  - each symbol carries log2(M) bits: the first half selects the real (I)
//    level, the second half the imaginary (Q) level, MSB first;
//  - per axis the bits are a Gray code over the ascending PAM levels, so the
//    all-zero label is the most negative corner (-1-1i for 4-QAM) and
//    adjacent levels differ in exactly one bit;
//  - in a symbol vector, antenna 0's bits come first.
class Constellation {
 public:
  // Square QAM of the given order; throws ConfigError for anything that is
  // not a square with an even number of bits (4, 16, 64, ...).
  static Constellation qam(int order);

  int order() const { return order_; }
  int bits_per_symbol() const { return bits_per_symbol_; }
  int bits_per_axis() const { return bits_per_symbol_ / 2; }

  // Real PAM alphabet S = {+-1, +-3, ..., +-(sqrt(M)-1)}.
  const CoordSet& pam() const { return pam_; }

  // Difference constellation D = {s in Z : |s| <= sqrt(M)-1}, the
  // unit-spacing form with the common factor of 2 removed.
  const CoordSet& diff() const { return diff_; }

  // Mean symbol energy E_s = (2/3)(M-1); 2 for 4-QAM, 10 for 16-QAM.
  double symbol_energy() const { return es_; }

  // All M points indexed by their bit label.
  const std::vector<std::complex<double>>& points() const { return points_; }

  // Per-axis Gray map: label bits (bits_per_axis wide) <-> PAM level.
  int level_from_bits(std::uint32_t bits) const;
  std::uint32_t bits_from_level(int level) const;

 private:
  Constellation() = default;

  int order_ = 0;
  int bits_per_symbol_ = 0;
  CoordSet pam_;
  CoordSet diff_;
  double es_ = 0.0;
  std::vector<std::complex<double>> points_;
};

// Maps nt*log2(M) bits onto an nt-entry complex symbol vector. Throws
// ConfigError on a length mismatch.
ComplexVector bits_to_vector(std::span<const std::uint8_t> bits,
                             const Constellation& c, int nt);

// Inverse of bits_to_vector. Throws MappingError if any entry is not a
// constellation point.
std::vector<std::uint8_t> vector_to_bits(const ComplexVector& x,
                                         const Constellation& c);

}  // namespace mimolfb
