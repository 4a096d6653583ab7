#pragma once

#include "mimolfb/linalg.hpp"
#include "mimolfb/rng.hpp"

namespace mimolfb {

// Noise calibration for a target average received SNR per receive antenna.
// sigma2 is the total variance per complex noise entry (real and imaginary
// parts carry sigma2/2 each).
struct NoiseSpec {
  double snr_db = 0.0;
  double es = 1.0;
  double sigma2 = 0.0;

  static NoiseSpec from_snr(double snr_db, int nt, double es);
};

// sigma^2 = nt * es / gamma with gamma = 10^(snr_db/10).
double noise_sigma2(double snr_db, int nt, double es);

// Rayleigh flat-fading channel: nr x nt, entries i.i.d. CN(0,1) drawn
// row-major from the stream.
ComplexMatrix sample_channel(int nt, int nr, RandomStream& rng);

// y = h * f * x + n with n i.i.d. CN(0, sigma2). Throws ConfigError on a
// dimension mismatch.
ComplexVector transmit(const ComplexMatrix& h, const ComplexMatrix& f,
                       const ComplexVector& x, double sigma2,
                       RandomStream& rng);

// Adds CN(0, sigma2) noise to each entry in place.
void add_noise(ComplexVector& y, double sigma2, RandomStream& rng);

}  // namespace mimolfb
