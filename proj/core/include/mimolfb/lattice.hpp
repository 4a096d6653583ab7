#pragma once

#include <cstdint>

#include "mimolfb/linalg.hpp"
#include "mimolfb/modulation.hpp"

namespace mimolfb {

// Tally of real arithmetic performed by a lattice search. One real multiply
// and one real add each count as one operation; a division counts as a
// multiply; comparisons and index arithmetic are not counted. QR
// preprocessing and target transforms are excluded, so counts cover the
// enumeration phase only and are comparable across decoders.
struct OpCount {
  std::uint64_t real_mults = 0;
  std::uint64_t real_adds = 0;
  std::uint64_t nodes_visited = 0;

  std::uint64_t total() const { return real_mults + real_adds; }

  OpCount& operator+=(const OpCount& o) {
    real_mults += o.real_mults;
    real_adds += o.real_adds;
    nodes_visited += o.nodes_visited;
    return *this;
  }
};

// Real-valued lattice with a finite symmetric coordinate set per dimension.
struct RealLattice {
  RealMatrix basis;  // 2Nr x 2Nt when built from a complex matrix
  CoordSet coords;   // difference set D; symmetric about 0, contains 0
};

// realify(m) paired with the coordinate set.
RealLattice make_lattice(const ComplexMatrix& m, const CoordSet& coords);

struct SvpResult {
  double dmin = 0.0;
  IntVector z;  // attaining vector; -z is equally valid
  OpCount stats;
};

struct DecodeResult {
  IntVector x;
  OpCount stats;
};

// QR-factored basis ready for repeated searches. Householder QR without
// pivoting; near-zero diagonal entries of R are replaced by a 1e-9 ridge
// (distances are then approximate, the search still terminates).
class PreparedBasis {
 public:
  // with_target controls whether the Q factor needed to transform targets is
  // formed; shortest-vector-only callers can skip it.
  explicit PreparedBasis(const RealMatrix& basis, bool with_target = true);

  int dims() const { return n_; }

  // Exact ML point: argmin over x in S^n of ||y - basis*x||. Depth-first
  // Schnorr-Euchner enumeration, zig-zag ordered around the per-level center
  // and clipped to S, radius shrinking on every improvement. The first leaf
  // reached is the Babai nearest-plane point, which sets the initial radius.
  DecodeResult decode(const RealVector& y, const CoordSet& s) const;

  // Shortest nonzero vector with every coordinate in d. The all-zero leaf is
  // skipped and the highest-index nonzero coordinate is constrained to be
  // positive (z and -z are equivalent). Initial radius is the shortest
  // basis-column norm.
  SvpResult shortest_vector(const CoordSet& d) const;

 private:
  int n_ = 0;
  RealMatrix r_;        // n x n upper triangular
  RealMatrix q1_t_;     // n x rows, transforms targets into R-space
  bool has_target_ = false;
};

// One-shot conveniences.
SvpResult constrained_svp(const RealLattice& l);
DecodeResult sphere_decode(const RealMatrix& basis, const RealVector& y,
                           const CoordSet& s);

}  // namespace mimolfb
