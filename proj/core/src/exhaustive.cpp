#include "mimolfb/exhaustive.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "mimolfb/errors.hpp"

namespace mimolfb {

ExhaustiveResult brute_force_min(const RealMatrix& basis,
                                 const std::optional<RealVector>& y,
                                 const CoordSet& coords,
                                 std::uint64_t max_candidates) {
  const int n = int(basis.cols());
  const int rows = int(basis.rows());
  const bool svp = !y.has_value();

  std::uint64_t total = 1;
  for (int k = 0; k < n; ++k) {
    total *= std::uint64_t(coords.count);
    if (total > max_candidates)
      throw OracleTooLarge("exhaustive search over " + std::to_string(coords.count) +
                           "^" + std::to_string(n) + " candidates exceeds cap");
  }
  if (svp && total <= 1)
    throw ConfigError("search space is empty: no nonzero candidate");

  std::vector<int> idx(n, 0);
  ExhaustiveResult best;
  best.value = std::numeric_limits<double>::infinity();
  best.argmin = IntVector::Zero(n);

  for (std::uint64_t c = 0; c < total; ++c) {
    bool all_zero = true;
    for (int k = 0; k < n; ++k)
      if (coords.value(idx[k]) != 0) all_zero = false;
    if (!(svp && all_zero)) {
      double dist2 = 0.0;
      for (int r = 0; r < rows; ++r) {
        double acc = y ? (*y)(r) : 0.0;
        for (int k = 0; k < n; ++k) acc -= basis(r, k) * coords.value(idx[k]);
        dist2 += acc * acc;
      }
      if (dist2 < best.value) {
        best.value = dist2;
        for (int k = 0; k < n; ++k) best.argmin(k) = coords.value(idx[k]);
      }
    }
    for (int k = 0; k < n; ++k) {  // odometer
      if (++idx[k] < coords.count) break;
      idx[k] = 0;
    }
  }
  best.value = std::sqrt(best.value);
  return best;
}

}  // namespace mimolfb
