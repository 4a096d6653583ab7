#pragma once

#include <array>

#include "mimolfb/lattice.hpp"
#include "mimolfb/linalg.hpp"
#include "mimolfb/modulation.hpp"

namespace mimolfb {

// 2x2 full-rate algebraic STBC carrying 4 QAM symbols over 2 channel uses
// (columns are channel uses). The generator uses the golden number
// phi = (1+sqrt 5)/2 and is normalized so the average transmitted energy
// per channel use equals that of uncoded 2-stream QAM.
ComplexMatrix golden_encode(const ComplexVector& s);

// The four 2x2 dispersion matrices B_k with encode(s) = sum_k s_k B_k.
const std::array<ComplexMatrix, 4>& golden_bases();

// Real 8x8 matrix G with realify(vec(H * encode(s))) == G * realify(s) for
// all s; vec() stacks the received block column-major.
RealMatrix golden_equivalent_channel(const ComplexMatrix& h);

struct GoldenDecodeResult {
  ComplexVector s;  // 4 decoded QAM symbols
  OpCount stats;
};

// Exact ML joint decoding of the 4 symbols from a received 2x2 block via
// sphere decoding of the 8-dimensional real equivalent system.
GoldenDecodeResult golden_ml_decode(const ComplexMatrix& y_block,
                                    const ComplexMatrix& h,
                                    const Constellation& c);

}  // namespace mimolfb
