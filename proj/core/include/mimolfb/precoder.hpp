#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mimolfb/lattice.hpp"
#include "mimolfb/linalg.hpp"
#include "mimolfb/modulation.hpp"

namespace mimolfb {

// One-parameter family of unitary Nt x Nt matrices. eval(theta) must be
// unitary for every theta; the bundled families satisfy this by
// construction and the property is unit-tested.
struct UnitaryFamily {
  int nt = 0;
  std::string name;
  std::function<ComplexMatrix(double)> eval;
};

// Two-antenna design, (1/sqrt 2) [[e^{j t}, 1], [-1, e^{-j t}]].
ComplexMatrix unitary_2x2(double theta);

// Alternative two-antenna parametrization with half-angle phases,
// (1/sqrt 2) [[e^{-j t/2}, e^{-j t}], [e^{j 3t/2}, -e^{j t}]].
ComplexMatrix unitary_2x2_alt(double theta);

// Three-antenna design, a fixed 1/3-scaled phase pattern.
ComplexMatrix unitary_3x3(double theta);

// Block recursion doubling the size per level:
//   U_{2n} = (1/sqrt 2) [[U_n, I], [-I, U_n^H]],  base case unitary_2x2.
// level m >= 1 yields a 2^(m+1) x 2^(m+1) matrix.
ComplexMatrix unitary_recursive(int level, double theta);

// Families by name: "u2", "u2alt", "u3", "u4", "u8" (recursive sizes).
UnitaryFamily make_family(const std::string& name);

// Preferred design per antenna count: u2 for 2, u3 for 3, recursive for
// powers of two >= 4.
UnitaryFamily default_family(int nt);

// Finite codebook: entry i is family.eval(2*pi*i / 2^bits).
struct PrecoderCodebook {
  UnitaryFamily family;
  int bits = 0;
  std::vector<ComplexMatrix> entries;

  int size() const { return int(entries.size()); }
};

PrecoderCodebook build_codebook(const UnitaryFamily& family, int bits);

// Minimum distance of the precoded channel H * entries[i] over the
// difference constellation of c (constrained shortest-vector search on the
// realified matrix).
double dmin_for_index(const ComplexMatrix& h, const PrecoderCodebook& cb,
                      int index, const Constellation& c);

struct Selection {
  int index = 0;
  double dmin = 0.0;
  OpCount ops;  // enumeration work summed over all codebook entries
};

// Receiver-side selection: the index maximizing d_min. Ties (within a 1e-9
// relative margin, which absorbs rounding noise on exactly tied grid points)
// break to the lowest index, so the feedback decision is reproducible and
// invariant under channel scaling.
Selection select_precoder(const ComplexMatrix& h, const PrecoderCodebook& cb,
                          const Constellation& c);

struct MuEstimate {
  double mu = 0.0;
  double stderr_mean = 0.0;
  std::uint64_t samples = 0;
};

// Monte-Carlo estimate of the codebook quality indicator: the expected
// ratio of the best precoded squared d_min to the unprecoded squared d_min
// over random channels. Numerator and denominator are paired per channel
// sample. Deterministic for a fixed seed, independent of worker count.
MuEstimate mu_metric(const UnitaryFamily& family, int bits,
                     const Constellation& c, std::uint64_t samples,
                     std::uint64_t seed, int nr = 0, int workers = 1);

// JSON document with every codebook entry listed as [re, im] pairs.
std::string codebook_to_json(const PrecoderCodebook& cb);

}  // namespace mimolfb
