#include "mimolfb/modulation.hpp"

#include <cmath>

#include "mimolfb/errors.hpp"

namespace mimolfb {

namespace {

std::uint32_t gray_encode(std::uint32_t b) { return b ^ (b >> 1); }

std::uint32_t gray_decode(std::uint32_t g) {
  for (int s = 1; s < 32; s <<= 1) g ^= g >> s;
  return g;
}

}  // namespace

Constellation Constellation::qam(int order) {
  if (order < 4) throw ConfigError("unsupported modulation order " + std::to_string(order));
  const int root = int(std::lround(std::sqrt(double(order))));
  if (root * root != order || (root & (root - 1)) != 0)
    throw ConfigError("modulation order " + std::to_string(order) +
                      " is not a square power of two");

  Constellation c;
  c.order_ = order;
  c.bits_per_symbol_ = int(std::lround(std::log2(double(order))));
  c.pam_ = CoordSet{-(root - 1), 2, root};
  c.diff_ = CoordSet{-(root - 1), 1, 2 * root - 1};
  c.es_ = 2.0 * (order - 1) / 3.0;

  const int axis_bits = c.bits_per_symbol_ / 2;
  c.points_.resize(order);
  for (int label = 0; label < order; ++label) {
    const std::uint32_t i_bits = std::uint32_t(label) >> axis_bits;
    const std::uint32_t q_bits = std::uint32_t(label) & ((1u << axis_bits) - 1);
    c.points_[label] = {double(c.level_from_bits(i_bits)),
                        double(c.level_from_bits(q_bits))};
  }
  return c;
}

int Constellation::level_from_bits(std::uint32_t bits) const {
  return pam_.value(int(gray_decode(bits)));
}

std::uint32_t Constellation::bits_from_level(int level) const {
  if (!pam_.contains(level))
    throw MappingError("value " + std::to_string(level) +
                       " is not a PAM level of " + std::to_string(order_) + "-QAM");
  return gray_encode(std::uint32_t((level - pam_.lo) / pam_.step));
}

ComplexVector bits_to_vector(std::span<const std::uint8_t> bits,
                             const Constellation& c, int nt) {
  const int per_symbol = c.bits_per_symbol();
  if (int(bits.size()) != nt * per_symbol)
    throw ConfigError("expected " + std::to_string(nt * per_symbol) +
                      " bits, got " + std::to_string(bits.size()));
  const int axis = c.bits_per_axis();
  ComplexVector x(nt);
  for (int a = 0; a < nt; ++a) {
    std::uint32_t i_bits = 0, q_bits = 0;
    for (int b = 0; b < axis; ++b) {
      i_bits = (i_bits << 1) | (bits[a * per_symbol + b] & 1u);
      q_bits = (q_bits << 1) | (bits[a * per_symbol + axis + b] & 1u);
    }
    x(a) = {double(c.level_from_bits(i_bits)), double(c.level_from_bits(q_bits))};
  }
  return x;
}

std::vector<std::uint8_t> vector_to_bits(const ComplexVector& x,
                                         const Constellation& c) {
  const int axis = c.bits_per_axis();
  std::vector<std::uint8_t> bits;
  bits.reserve(std::size_t(x.size()) * c.bits_per_symbol());
  for (Eigen::Index a = 0; a < x.size(); ++a) {
    const auto to_level = [&](double v) {
      const int lvl = int(std::lround(v));
      if (std::abs(v - lvl) > 1e-9)
        throw MappingError("entry is not an integer constellation point");
      return lvl;
    };
    const std::uint32_t i_bits = c.bits_from_level(to_level(x(a).real()));
    const std::uint32_t q_bits = c.bits_from_level(to_level(x(a).imag()));
    for (int b = axis - 1; b >= 0; --b) bits.push_back((i_bits >> b) & 1u);
    for (int b = axis - 1; b >= 0; --b) bits.push_back((q_bits >> b) & 1u);
  }
  return bits;
}

}  // namespace mimolfb
