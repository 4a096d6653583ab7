#include "mimolfb/channel.hpp"

#include <cmath>

#include "mimolfb/errors.hpp"

namespace mimolfb {

double noise_sigma2(double snr_db, int nt, double es) {
  const double gamma = std::pow(10.0, snr_db / 10.0);
  return nt * es / gamma;
}

NoiseSpec NoiseSpec::from_snr(double snr_db, int nt, double es) {
  return {snr_db, es, noise_sigma2(snr_db, nt, es)};
}

ComplexMatrix sample_channel(int nt, int nr, RandomStream& rng) {
  ComplexMatrix h(nr, nt);
  for (int r = 0; r < nr; ++r)
    for (int c = 0; c < nt; ++c) h(r, c) = rng.next_cgauss();
  return h;
}

void add_noise(ComplexVector& y, double sigma2, RandomStream& rng) {
  if (sigma2 <= 0.0) return;
  const double scale = std::sqrt(sigma2);
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += scale * rng.next_cgauss();
}

ComplexVector transmit(const ComplexMatrix& h, const ComplexMatrix& f,
                       const ComplexVector& x, double sigma2,
                       RandomStream& rng) {
  if (h.cols() != f.rows() || f.cols() != x.size())
    throw ConfigError("transmit: dimension mismatch (H is " +
                      std::to_string(h.rows()) + "x" + std::to_string(h.cols()) +
                      ", F is " + std::to_string(f.rows()) + "x" +
                      std::to_string(f.cols()) + ", x has " +
                      std::to_string(x.size()) + " entries)");
  ComplexVector y = h * (f * x);
  add_noise(y, sigma2, rng);
  return y;
}

}  // namespace mimolfb
