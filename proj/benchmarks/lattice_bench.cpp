// Microbenchmarks for the enumeration hot paths: per-use sphere decoding,
// per-index shortest-vector search, and whole-codebook selection.

#include <benchmark/benchmark.h>

#include <vector>

#include "mimolfb/channel.hpp"
#include "mimolfb/golden.hpp"
#include "mimolfb/lattice.hpp"
#include "mimolfb/precoder.hpp"
#include "mimolfb/rng.hpp"

using namespace mimolfb;

namespace {

struct Instance {
  RealMatrix basis;
  RealVector y;
  ComplexMatrix h;
};

std::vector<Instance> make_instances(int nt, int nr, int mod, double snr_db,
                                     int count) {
  RandomStream rng(1234, 0, 0);
  const auto c = Constellation::qam(mod);
  const double sigma2 = noise_sigma2(snr_db, nt, c.symbol_energy());
  std::vector<Instance> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const ComplexMatrix h = sample_channel(nt, nr, rng);
    IntVector x0(2 * nt);
    for (int k = 0; k < 2 * nt; ++k)
      x0(k) = c.pam().value(int(rng.next_bits(16)) % c.pam().count);
    ComplexVector y = h * unrealify(x0.cast<double>());
    add_noise(y, sigma2, rng);
    out.push_back({realify(h), realify(y), h});
  }
  return out;
}

void BM_SphereDecode(benchmark::State& state) {
  const int nt = int(state.range(0));
  const int mod = int(state.range(1));
  const auto c = Constellation::qam(mod);
  const auto instances = make_instances(nt, nt, mod, 12.0, 256);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& inst = instances[i++ & 255];
    benchmark::DoNotOptimize(sphere_decode(inst.basis, inst.y, c.pam()));
  }
}
BENCHMARK(BM_SphereDecode)->Args({2, 4})->Args({2, 16})->Args({4, 4});

void BM_ConstrainedSvp(benchmark::State& state) {
  const int nt = int(state.range(0));
  const int mod = int(state.range(1));
  const auto c = Constellation::qam(mod);
  const auto instances = make_instances(nt, nt, mod, 12.0, 256);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& inst = instances[i++ & 255];
    benchmark::DoNotOptimize(constrained_svp({inst.basis, c.diff()}));
  }
}
BENCHMARK(BM_ConstrainedSvp)->Args({2, 4})->Args({2, 16})->Args({4, 4});

void BM_SelectPrecoder(benchmark::State& state) {
  const int nt = int(state.range(0));
  const int bits = int(state.range(1));
  const auto c = Constellation::qam(4);
  const auto cb = build_codebook(default_family(nt), bits);
  const auto instances = make_instances(nt, nt, 4, 12.0, 64);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& inst = instances[i++ & 63];
    benchmark::DoNotOptimize(select_precoder(inst.h, cb, c));
  }
}
BENCHMARK(BM_SelectPrecoder)->Args({2, 4})->Args({2, 8})->Args({4, 4});

void BM_GoldenDecode(benchmark::State& state) {
  RandomStream rng(77, 0, 0);
  const auto c = Constellation::qam(4);
  const double sigma2 = noise_sigma2(12.0, 2, c.symbol_energy());
  std::vector<std::pair<ComplexMatrix, ComplexMatrix>> instances;
  for (int i = 0; i < 256; ++i) {
    const ComplexMatrix h = sample_channel(2, 2, rng);
    ComplexVector s(4);
    for (int k = 0; k < 4; ++k) s(k) = c.points()[rng.next_bits(2)];
    ComplexMatrix y = h * golden_encode(s);
    const double scale = std::sqrt(sigma2);
    for (int use = 0; use < 2; ++use)
      for (int r = 0; r < 2; ++r) y(r, use) += scale * rng.next_cgauss();
    instances.emplace_back(y, h);
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [y, h] = instances[i++ & 255];
    benchmark::DoNotOptimize(golden_ml_decode(y, h, c));
  }
}
BENCHMARK(BM_GoldenDecode);

}  // namespace

BENCHMARK_MAIN();
