#pragma once

#include <cstdint>
#include <optional>

#include "mimolfb/lattice.hpp"

namespace mimolfb {

struct ExhaustiveResult {
  double value = 0.0;  // attained distance (not squared)
  IntVector argmin;
};

// Exhaustive reference search, deliberately independent of the sphere
// decoder (no QR, plain full-residual evaluation per candidate).
//
// With a target y: argmin over coords^n of ||y - basis*x||.
// Without a target: argmin over coords^n \ {0} of ||basis*z||.
//
// Throws OracleTooLarge when |coords|^n exceeds max_candidates and
// ConfigError when the search space is empty.
ExhaustiveResult brute_force_min(const RealMatrix& basis,
                                 const std::optional<RealVector>& y,
                                 const CoordSet& coords,
                                 std::uint64_t max_candidates = 10'000'000);

}  // namespace mimolfb
