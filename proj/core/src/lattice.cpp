#include "mimolfb/lattice.hpp"

#include <Eigen/QR>
#include <array>
#include <cmath>
#include <limits>

#include "mimolfb/errors.hpp"

namespace mimolfb {

namespace {

// Largest real search dimension (8x8 complex). Enumeration state lives on
// the stack.
constexpr int kMaxDim = 16;
constexpr double kRidge = 1e-9;

inline int nearest_value(const CoordSet& cs, double x, int min_value) {
  // Nearest alphabet value to x, clipped to [min_value, cs.max()].
  long idx = std::lround((x - cs.lo) / cs.step);
  const long lo_idx = (min_value - cs.lo + cs.step - 1) / cs.step;
  if (idx < lo_idx) idx = lo_idx;
  if (idx > cs.count - 1) idx = cs.count - 1;
  return cs.value(int(idx));
}

struct EnumOut {
  double dist2 = std::numeric_limits<double>::infinity();
  std::array<int, kMaxDim> z{};
  bool found = false;
};

// Depth-first Schnorr-Euchner enumeration over cs^n against the upper
// triangular factor R. target may be null (shortest-vector mode). In SVP
// mode the zero vector is excluded and, whenever all coordinates above the
// current level are zero, the candidate range is restricted to v >= 0.
EnumOut enumerate_lattice(const RealMatrix& R, const double* target,
                          const CoordSet& cs, bool svp_mode, double init_best,
                          OpCount& ops) {
  const int n = int(R.cols());
  EnumOut out;

  double e[kMaxDim];           // per-level target residual over upper levels
  double center[kMaxDim];      // e / R(k,k)
  double dist_above[kMaxDim];  // accumulated partial distance above level k
  int z[kMaxDim];
  int lo_val[kMaxDim], hi_val[kMaxDim];  // visited window per level
  bool lo_open[kMaxDim], hi_open[kMaxDim];
  bool zero_above[kMaxDim];
  int min_val[kMaxDim];

  double best = init_best;

  auto descend = [&](int k) {
    double acc = target ? target[k] : 0.0;
    for (int j = k + 1; j < n; ++j) acc -= R(k, j) * z[j];
    ops.real_mults += std::uint64_t(n - 1 - k);
    ops.real_adds += std::uint64_t(n - 1 - k);
    e[k] = acc;
    center[k] = acc / R(k, k);
    ops.real_mults += 1;
    min_val[k] = (svp_mode && zero_above[k]) ? 0 : cs.lo;
    const int v0 = nearest_value(cs, center[k], min_val[k]);
    lo_val[k] = v0;
    hi_val[k] = v0 - cs.step;  // first next_candidate() returns v0 via hi side
    lo_open[k] = true;
    hi_open[k] = true;
  };

  // Next unvisited value at level k in order of |v - center|, or sentinel.
  auto next_candidate = [&](int k, int& v) -> bool {
    const int lo_next = lo_val[k] - cs.step;
    const int hi_next = hi_val[k] + cs.step;
    const bool lo_ok = lo_open[k] && lo_next >= min_val[k];
    const bool hi_ok = hi_open[k] && hi_next <= cs.max();
    if (lo_ok && hi_ok) {
      if (std::abs(lo_next - center[k]) <= std::abs(hi_next - center[k])) {
        v = lo_val[k] = lo_next;
      } else {
        v = hi_val[k] = hi_next;
      }
      return true;
    }
    if (lo_ok) {
      v = lo_val[k] = lo_next;
      return true;
    }
    if (hi_ok) {
      v = hi_val[k] = hi_next;
      return true;
    }
    return false;
  };

  zero_above[n - 1] = true;
  dist_above[n - 1] = 0.0;
  descend(n - 1);

  int k = n - 1;
  while (true) {
    int v;
    if (!next_candidate(k, v)) {
      // Level exhausted; backtrack.
      ++k;
      if (k == n) break;
      continue;
    }
    const double term = e[k] - R(k, k) * v;
    const double npd = dist_above[k] + term * term;
    ops.real_mults += 2;
    ops.real_adds += 2;
    ++ops.nodes_visited;
    if (npd >= best) {
      // Candidates are ordered by |v - center|, so every remaining value at
      // this level fails too.
      lo_open[k] = hi_open[k] = false;
      continue;
    }
    z[k] = v;
    if (k == 0) {
      if (svp_mode && zero_above[0] && v == 0) continue;  // the excluded origin
      best = npd;
      out.dist2 = npd;
      out.found = true;
      for (int j = 0; j < n; ++j) out.z[j] = z[j];
      continue;
    }
    zero_above[k - 1] = zero_above[k] && v == 0;
    dist_above[k - 1] = npd;
    --k;
    descend(k);
  }

  out.dist2 = std::min(out.dist2, best);
  return out;
}

}  // namespace

RealLattice make_lattice(const ComplexMatrix& m, const CoordSet& coords) {
  return {realify(m), coords};
}

PreparedBasis::PreparedBasis(const RealMatrix& basis, bool with_target)
    : n_(int(basis.cols())), has_target_(with_target) {
  if (basis.rows() < basis.cols())
    throw ConfigError("basis has more columns than rows");
  if (n_ < 1 || n_ > kMaxDim)
    throw ConfigError("search dimension " + std::to_string(n_) +
                      " outside supported range 1.." + std::to_string(kMaxDim));
  Eigen::HouseholderQR<RealMatrix> qr(basis);
  r_ = qr.matrixQR().topRows(n_).triangularView<Eigen::Upper>();
  for (int k = 0; k < n_; ++k) {
    if (std::abs(r_(k, k)) < kRidge) r_(k, k) = kRidge;
  }
  if (with_target) {
    RealMatrix q =
        qr.householderQ() * RealMatrix::Identity(basis.rows(), n_);
    q1_t_ = q.transpose();
  }
}

DecodeResult PreparedBasis::decode(const RealVector& y,
                                   const CoordSet& s) const {
  if (!has_target_)
    throw ConfigError("PreparedBasis was built without target support");
  if (y.size() != q1_t_.cols())
    throw ConfigError("target vector length mismatch");
  double target[kMaxDim] = {};
  for (int k = 0; k < n_; ++k) target[k] = q1_t_.row(k).dot(y);

  DecodeResult res;
  const EnumOut out = enumerate_lattice(
      r_, target, s, /*svp_mode=*/false,
      std::numeric_limits<double>::infinity(), res.stats);
  res.x.resize(n_);
  for (int k = 0; k < n_; ++k) res.x(k) = out.z[k];
  return res;
}

SvpResult PreparedBasis::shortest_vector(const CoordSet& d) const {
  if (!(d.contains(0) && d.contains(1) && d.contains(-1)))
    throw ConfigError("difference set must contain 0 and +-1");

  SvpResult res;
  // Initial incumbent: the shortest basis column, reachable as z = e_j.
  double best = std::numeric_limits<double>::infinity();
  int best_col = 0;
  for (int j = 0; j < n_; ++j) {
    double norm2 = 0.0;
    for (int i = 0; i <= j; ++i) norm2 += r_(i, j) * r_(i, j);
    res.stats.real_mults += std::uint64_t(j + 1);
    res.stats.real_adds += std::uint64_t(j + 1);
    if (norm2 < best) {
      best = norm2;
      best_col = j;
    }
  }

  const EnumOut out =
      enumerate_lattice(r_, nullptr, d, /*svp_mode=*/true, best, res.stats);
  res.z = IntVector::Zero(n_);
  if (out.found) {
    for (int k = 0; k < n_; ++k) res.z(k) = out.z[k];
    res.dmin = std::sqrt(out.dist2);
  } else {
    res.z(best_col) = 1;
    res.dmin = std::sqrt(best);
  }
  return res;
}

SvpResult constrained_svp(const RealLattice& l) {
  PreparedBasis pb(l.basis, /*with_target=*/false);
  return pb.shortest_vector(l.coords);
}

DecodeResult sphere_decode(const RealMatrix& basis, const RealVector& y,
                           const CoordSet& s) {
  PreparedBasis pb(basis);
  return pb.decode(y, s);
}

}  // namespace mimolfb
