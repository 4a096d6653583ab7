#include "mimolfb/golden.hpp"

#include <array>
#include <cmath>

#include "mimolfb/errors.hpp"

namespace mimolfb {

namespace {

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;
const double kPhiBar = 1.0 - kPhi;
const std::complex<double> kAlpha{1.0, kPhiBar};  // 1 + i(1 - phi)
const std::complex<double> kAlphaBar{1.0, kPhi};  // 1 + i(1 - phibar), 1 - phibar = phi
const double kScale = 1.0 / std::sqrt(5.0);
const std::complex<double> kI{0.0, 1.0};

}  // namespace

ComplexMatrix golden_encode(const ComplexVector& s) {
  if (s.size() != 4) throw ConfigError("golden_encode expects 4 symbols");
  ComplexMatrix x(2, 2);
  x(0, 0) = kAlpha * (s(0) + s(1) * kPhi);
  x(0, 1) = kAlpha * (s(2) + s(3) * kPhi);
  x(1, 0) = kI * kAlphaBar * (s(2) + s(3) * kPhiBar);
  x(1, 1) = kAlphaBar * (s(0) + s(1) * kPhiBar);
  return kScale * x;
}

const std::array<ComplexMatrix, 4>& golden_bases() {
  static const std::array<ComplexMatrix, 4> bases = [] {
    std::array<ComplexMatrix, 4> b;
    for (int k = 0; k < 4; ++k) {
      ComplexVector e = ComplexVector::Zero(4);
      e(k) = 1.0;
      b[k] = golden_encode(e);
    }
    return b;
  }();
  return bases;
}

RealMatrix golden_equivalent_channel(const ComplexMatrix& h) {
  if (h.rows() != 2 || h.cols() != 2)
    throw ConfigError("golden code requires a 2x2 channel");
  ComplexMatrix m(4, 4);
  const auto& bases = golden_bases();
  for (int k = 0; k < 4; ++k) {
    const ComplexMatrix hb = h * bases[k];
    m(0, k) = hb(0, 0);
    m(1, k) = hb(1, 0);
    m(2, k) = hb(0, 1);
    m(3, k) = hb(1, 1);
  }
  return realify(m);
}

GoldenDecodeResult golden_ml_decode(const ComplexMatrix& y_block,
                                    const ComplexMatrix& h,
                                    const Constellation& c) {
  const RealMatrix g = golden_equivalent_channel(h);
  ComplexVector y_vec(4);
  y_vec << y_block(0, 0), y_block(1, 0), y_block(0, 1), y_block(1, 1);
  const DecodeResult dec = sphere_decode(g, realify(y_vec), c.pam());

  GoldenDecodeResult out;
  out.stats = dec.stats;
  out.s.resize(4);
  for (int k = 0; k < 4; ++k)
    out.s(k) = {double(dec.x(k)), double(dec.x(k + 4))};
  return out;
}

}  // namespace mimolfb
