#include <doctest.h>

#include <cmath>
#include <optional>

#include "mimolfb/channel.hpp"
#include "mimolfb/errors.hpp"
#include "mimolfb/exhaustive.hpp"
#include "mimolfb/lattice.hpp"
#include "mimolfb/modulation.hpp"
#include "mimolfb/rng.hpp"

using namespace mimolfb;

namespace {

RealMatrix rotation2(double a) {
  RealMatrix f(2, 2);
  f << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return f;
}

RealMatrix random_real(int rows, int cols, RandomStream& rng) {
  RealMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = rng.next_gauss();
  return m;
}

// A random orthogonal matrix from the QR of a Gaussian matrix.
RealMatrix random_orthogonal(int n, RandomStream& rng) {
  const RealMatrix g = random_real(n, n, rng);
  Eigen::HouseholderQR<RealMatrix> qr(g);
  return qr.householderQ() * RealMatrix::Identity(n, n);
}

}  // namespace

TEST_CASE("realify block layout") {
  ComplexMatrix h(2, 2);
  h << -1.0, 5.0, 1.0, 3.0;  // purely real
  const RealMatrix r = realify(h);
  CHECK(r.rows() == 4);
  CHECK(r.topLeftCorner(2, 2) == h.real());
  CHECK(r.bottomRightCorner(2, 2) == h.real());
  CHECK(r.topRightCorner(2, 2).cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.bottomLeftCorner(2, 2).cwiseAbs().maxCoeff() == 0.0);

  ComplexMatrix imag1(1, 1);
  imag1(0, 0) = {0.0, 1.0};
  const RealMatrix ri = realify(imag1);
  CHECK(ri(0, 0) == 0.0);
  CHECK(ri(0, 1) == -1.0);
  CHECK(ri(1, 0) == 1.0);
  CHECK(ri(1, 1) == 0.0);
}

TEST_CASE("realification is an isometry") {
  RandomStream rng(21, 0, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix h = sample_channel(3, 4, rng);
    ComplexVector x(3);
    for (int i = 0; i < 3; ++i) x(i) = rng.next_cgauss();
    const double a = (realify(h) * realify(x)).norm();
    const double b = (h * x).norm();
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
    CHECK((realify(h) * realify(x) - realify(ComplexVector(h * x)))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

TEST_CASE("worked 2x2 example: minimum distance with and without rotation") {
  RealMatrix h(2, 2);
  h << -1.0, 5.0, 1.0, 3.0;
  const CoordSet d{-1, 1, 3};

  const SvpResult plain = constrained_svp({h, d});
  CHECK(plain.dmin == doctest::Approx(1.4142).epsilon(1e-3));
  CHECK(plain.dmin == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(std::abs(plain.z(0)) == 1);
  CHECK(plain.z(1) == 0);

  const SvpResult rotated = constrained_svp({h * rotation2(M_PI / 6), d});
  CHECK(rotated.dmin == doctest::Approx(2.8758).epsilon(2e-3 / 2.8758));
  // exact: sqrt(10 - sqrt 3)
  CHECK(rotated.dmin ==
        doctest::Approx(std::sqrt(10.0 - std::sqrt(3.0))).epsilon(1e-12));
}

TEST_CASE("constrained SVP agrees with exhaustive enumeration") {
  RandomStream rng(99, 0, 1);
  const auto qam4 = Constellation::qam(4);
  const auto qam16 = Constellation::qam(16);

  struct Cfg {
    int nt, nr;
    CoordSet d;
  };
  const Cfg cfgs[] = {{2, 2, qam4.diff()}, {3, 3, qam4.diff()}, {2, 2, qam16.diff()}};
  for (const auto& cfg : cfgs) {
    for (int trial = 0; trial < 200; ++trial) {
      const ComplexMatrix h = sample_channel(cfg.nt, cfg.nr, rng);
      const RealLattice lat = make_lattice(h, cfg.d);
      const SvpResult got = constrained_svp(lat);
      const ExhaustiveResult want = brute_force_min(lat.basis, std::nullopt, cfg.d);
      CHECK(got.dmin == doctest::Approx(want.value).epsilon(1e-9));
      // the returned vector attains the reported distance
      RealVector img = lat.basis * got.z.cast<double>();
      CHECK(img.norm() == doctest::Approx(got.dmin).epsilon(1e-9));
    }
  }
}

TEST_CASE("SVP respects the coordinate box") {
  // Large coordinates would give a shorter vector if the box were ignored:
  // basis columns nearly cancel at z = (3, -2), but 4-QAM differences only
  // allow |z_i| <= 1.
  RealMatrix b(2, 2);
  b << 2.0, 3.001, 2.0, 2.999;
  const CoordSet d{-1, 1, 3};
  const SvpResult r = constrained_svp({b, d});
  const ExhaustiveResult want = brute_force_min(b, std::nullopt, d);
  CHECK(r.dmin == doctest::Approx(want.value).epsilon(1e-12));
  for (int i = 0; i < 2; ++i) CHECK(std::abs(r.z(i)) <= 1);
}

TEST_CASE("SVP homogeneity and rotation invariance") {
  RandomStream rng(5, 0, 2);
  const CoordSet d{-3, 1, 7};
  for (int trial = 0; trial < 25; ++trial) {
    const ComplexMatrix h = sample_channel(2, 2, rng);
    const RealMatrix basis = realify(h);
    const double base = constrained_svp({basis, d}).dmin;

    const double c = 0.25 + 3.0 * rng.next_unit();
    CHECK(constrained_svp({c * basis, d}).dmin ==
          doctest::Approx(c * base).epsilon(1e-9));

    const RealMatrix q = random_orthogonal(4, rng);
    CHECK(constrained_svp({q * basis, d}).dmin ==
          doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("rank-deficient bases do not abort") {
  const CoordSet d{-1, 1, 3};
  const RealMatrix zero = RealMatrix::Zero(4, 4);
  const SvpResult r = constrained_svp({zero, d});
  CHECK(r.dmin >= 0.0);
  CHECK(r.dmin < 1e-6);

  RealMatrix rank1(2, 2);
  rank1 << 1.0, 1.0, 1.0, 1.0;
  CHECK_NOTHROW(constrained_svp({rank1, d}));
}

TEST_CASE("sphere decoder recovers noiseless points") {
  RandomStream rng(31, 0, 4);
  const auto c = Constellation::qam(16);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexMatrix h = sample_channel(2, 2, rng);
    const RealMatrix basis = realify(h);
    IntVector x0(4);
    for (int i = 0; i < 4; ++i)
      x0(i) = c.pam().value(int(rng.next_bits(8)) % c.pam().count);
    const RealVector y = basis * x0.cast<double>();
    const DecodeResult dec = sphere_decode(basis, y, c.pam());
    CHECK(dec.x == x0);
  }
}

TEST_CASE("sphere decoder slices per coordinate on an identity basis") {
  const CoordSet s{-1, 2, 2};
  RealVector y(4);
  y << 0.3, -0.2, 0.8, -0.9;
  const DecodeResult dec = sphere_decode(RealMatrix::Identity(4, 4), y, s);
  CHECK(dec.x(0) == 1);
  CHECK(dec.x(1) == -1);
  CHECK(dec.x(2) == 1);
  CHECK(dec.x(3) == -1);
}

TEST_CASE("sphere decoder is exact ML against exhaustive search") {
  RandomStream rng(47, 0, 6);
  struct Cfg {
    int nt, nr, mod;
    double snr_db;
  };
  const Cfg cfgs[] = {{2, 2, 4, 10.0}, {3, 3, 4, 12.0}, {2, 2, 16, 16.0}};
  for (const auto& cfg : cfgs) {
    const auto c = Constellation::qam(cfg.mod);
    const double sigma2 = noise_sigma2(cfg.snr_db, cfg.nt, c.symbol_energy());
    std::uint64_t nodes_total = 0;
    std::uint64_t worst_nodes = 0;
    int trials = 200;
    double leaf_count = std::pow(double(c.pam().count), 2.0 * cfg.nt);
    for (int trial = 0; trial < trials; ++trial) {
      const ComplexMatrix h = sample_channel(cfg.nt, cfg.nr, rng);
      IntVector x0(2 * cfg.nt);
      for (int i = 0; i < 2 * cfg.nt; ++i)
        x0(i) = c.pam().value(int(rng.next_bits(8)) % c.pam().count);
      ComplexVector xc = unrealify(x0.cast<double>());
      RandomStream noise_rng(rng.next_u32(), 0, trial);
      const ComplexVector y = transmit(h, ComplexMatrix::Identity(cfg.nt, cfg.nt),
                                       xc, sigma2, noise_rng);
      const RealMatrix basis = realify(h);
      const RealVector yr = realify(y);

      const DecodeResult dec = sphere_decode(basis, yr, c.pam());
      const ExhaustiveResult want = brute_force_min(basis, yr, c.pam());
      const double got_dist = (yr - basis * dec.x.cast<double>()).norm();
      CHECK(got_dist == doctest::Approx(want.value).epsilon(1e-9));
      nodes_total += dec.stats.nodes_visited;
      worst_nodes = std::max(worst_nodes, dec.stats.nodes_visited);
      CHECK(dec.stats.total() > 0);
    }
    // Enumeration beats exhaustive search on average at moderate SNR.
    CHECK(double(nodes_total) / trials < leaf_count);
    MESSAGE("mod=", cfg.mod, " nt=", cfg.nt, " mean nodes=",
            double(nodes_total) / trials, " worst=", worst_nodes,
            " leaves=", leaf_count);
  }
}

TEST_CASE("operation counters are plausible and reset per call") {
  RandomStream rng(8, 0, 0);
  const auto c = Constellation::qam(4);
  const ComplexMatrix h = sample_channel(2, 2, rng);
  const RealLattice lat = make_lattice(h, c.diff());
  const SvpResult a = constrained_svp(lat);
  const SvpResult b = constrained_svp(lat);
  CHECK(a.stats.real_mults == b.stats.real_mults);
  CHECK(a.stats.real_adds == b.stats.real_adds);
  CHECK(a.stats.nodes_visited == b.stats.nodes_visited);
  CHECK(a.stats.total() == a.stats.real_mults + a.stats.real_adds);
}

TEST_CASE("exhaustive oracle edge cases") {
  const RealMatrix eye = RealMatrix::Identity(4, 4);
  CHECK_THROWS_AS(
      brute_force_min(eye, std::nullopt, CoordSet{-7, 1, 15}, /*cap=*/100),
      OracleTooLarge);
  CHECK_THROWS_AS(brute_force_min(eye, std::nullopt, CoordSet{0, 1, 1}),
                  ConfigError);
}
