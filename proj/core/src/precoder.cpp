#include "mimolfb/precoder.hpp"

#include <cmath>
#include <numbers>
#include <thread>

#include <json.hpp>

#include "mimolfb/channel.hpp"
#include "mimolfb/errors.hpp"

namespace mimolfb {

namespace {

constexpr double kSqrt1_2 = std::numbers::sqrt2 / 2.0;

std::complex<double> cis(double a) { return {std::cos(a), std::sin(a)}; }

}  // namespace

ComplexMatrix unitary_2x2(double theta) {
  ComplexMatrix u(2, 2);
  u << cis(theta), 1.0, -1.0, cis(-theta);
  return kSqrt1_2 * u;
}

ComplexMatrix unitary_2x2_alt(double theta) {
  ComplexMatrix u(2, 2);
  u << cis(-theta / 2), cis(-theta), cis(3 * theta / 2), -cis(theta);
  return kSqrt1_2 * u;
}

ComplexMatrix unitary_3x3(double theta) {
  ComplexMatrix u(3, 3);
  u << 2.0 * cis(theta), -2.0, cis(theta),
       cis(theta / 2), 2.0 * cis(-theta / 2), 2.0 * cis(theta / 2),
       2.0, cis(-theta), -2.0;
  return u / 3.0;
}

ComplexMatrix unitary_recursive(int level, double theta) {
  if (level < 1) throw ConfigError("recursion level must be >= 1");
  ComplexMatrix base = unitary_2x2(theta);
  for (int m = 1; m <= level; ++m) {
    const Eigen::Index n = base.rows();
    ComplexMatrix next(2 * n, 2 * n);
    next.topLeftCorner(n, n) = base;
    next.topRightCorner(n, n) = ComplexMatrix::Identity(n, n);
    next.bottomLeftCorner(n, n) = -ComplexMatrix::Identity(n, n);
    next.bottomRightCorner(n, n) = base.adjoint();
    base = kSqrt1_2 * next;
  }
  return base;
}

UnitaryFamily make_family(const std::string& name) {
  if (name == "u2") return {2, name, [](double t) { return unitary_2x2(t); }};
  if (name == "u2alt")
    return {2, name, [](double t) { return unitary_2x2_alt(t); }};
  if (name == "u3") return {3, name, [](double t) { return unitary_3x3(t); }};
  if (name == "u4")
    return {4, name, [](double t) { return unitary_recursive(1, t); }};
  if (name == "u8")
    return {8, name, [](double t) { return unitary_recursive(2, t); }};
  throw ConfigError("unknown precoder family '" + name +
                    "' (known: u2, u2alt, u3, u4, u8)");
}

UnitaryFamily default_family(int nt) {
  switch (nt) {
    case 2: return make_family("u2");
    case 3: return make_family("u3");
    case 4: return make_family("u4");
    case 8: return make_family("u8");
    default:
      throw ConfigError("no default precoder family for nt = " +
                        std::to_string(nt));
  }
}

PrecoderCodebook build_codebook(const UnitaryFamily& family, int bits) {
  if (bits < 0 || bits > 20) throw ConfigError("feedback bits out of range");
  PrecoderCodebook cb;
  cb.family = family;
  cb.bits = bits;
  const int n = 1 << bits;
  cb.entries.reserve(n);
  for (int i = 0; i < n; ++i)
    cb.entries.push_back(family.eval(2.0 * std::numbers::pi * i / n));
  return cb;
}

double dmin_for_index(const ComplexMatrix& h, const PrecoderCodebook& cb,
                      int index, const Constellation& c) {
  if (index < 0 || index >= cb.size()) throw ConfigError("codebook index out of range");
  return constrained_svp(make_lattice(h * cb.entries[index], c.diff())).dmin;
}

Selection select_precoder(const ComplexMatrix& h, const PrecoderCodebook& cb,
                          const Constellation& c) {
  if (cb.size() == 0) throw ConfigError("codebook is empty");
  // Some families produce exactly tied distances at different grid points
  // (e.g. theta and theta+pi for the 2x2 designs). A later index must beat
  // the incumbent by a relative margin, so ties resolve to the lowest index
  // regardless of rounding, and the chosen index is invariant under channel
  // scaling.
  constexpr double kTieMargin = 1e-9;
  Selection sel;
  sel.index = -1;
  for (int i = 0; i < cb.size(); ++i) {
    SvpResult r = constrained_svp(make_lattice(h * cb.entries[i], c.diff()));
    sel.ops += r.stats;
    if (sel.index < 0 || r.dmin > sel.dmin * (1.0 + kTieMargin)) {
      sel.dmin = r.dmin;
      sel.index = i;
    }
  }
  return sel;
}

MuEstimate mu_metric(const UnitaryFamily& family, int bits,
                     const Constellation& c, std::uint64_t samples,
                     std::uint64_t seed, int nr, int workers) {
  if (samples < 1) throw ConfigError("mu estimate needs at least one sample");
  const int nt = family.nt;
  if (nr <= 0) nr = nt;
  const PrecoderCodebook cb = build_codebook(family, bits);

  std::vector<double> ratios(samples);
  auto run_chunk = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t s = begin; s < end; ++s) {
      RandomStream rng(seed, /*domain=*/0, /*sequence=*/s);
      const ComplexMatrix h = sample_channel(nt, nr, rng);
      const double base = constrained_svp(make_lattice(h, c.diff())).dmin;
      double best = 0.0;
      for (const auto& u : cb.entries) {
        const double d = constrained_svp(make_lattice(h * u, c.diff())).dmin;
        best = std::max(best, d);
      }
      ratios[s] = (best * best) / (base * base);
    }
  };

  if (workers <= 1) {
    run_chunk(0, samples);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (samples + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::uint64_t b = std::min<std::uint64_t>(w * chunk, samples);
      const std::uint64_t e = std::min<std::uint64_t>(b + chunk, samples);
      if (b < e) pool.emplace_back(run_chunk, b, e);
    }
    for (auto& t : pool) t.join();
  }

  // Ordered reduction: the estimate must not depend on the worker count.
  double sum = 0.0;
  for (double r : ratios) sum += r;
  const double mean = sum / double(samples);
  double ss = 0.0;
  for (double r : ratios) ss += (r - mean) * (r - mean);
  MuEstimate est;
  est.mu = mean;
  est.samples = samples;
  est.stderr_mean =
      samples > 1 ? std::sqrt(ss / (double(samples) * double(samples - 1))) : 0.0;
  return est;
}

std::string codebook_to_json(const PrecoderCodebook& cb) {
  nlohmann::json doc;
  doc["family"] = cb.family.name;
  doc["nt"] = cb.family.nt;
  doc["bits"] = cb.bits;
  doc["size"] = cb.size();
  nlohmann::json entries = nlohmann::json::array();
  for (int i = 0; i < cb.size(); ++i) {
    const ComplexMatrix& m = cb.entries[i];
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index cc = 0; cc < m.cols(); ++cc)
        row.push_back({m(r, cc).real(), m(r, cc).imag()});
      rows.push_back(row);
    }
    entries.push_back({{"index", i},
                       {"theta", 2.0 * std::numbers::pi * i / cb.size()},
                       {"matrix", rows}});
  }
  doc["entries"] = entries;
  return doc.dump(2);
}

}  // namespace mimolfb
