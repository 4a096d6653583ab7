#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "mimolfb/lattice.hpp"

namespace mimolfb {

enum class Scheme { VblastPlain, VblastLfb, Golden };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& name);

// One Monte-Carlo experiment. A trial is one quasi-static block: the channel
// stays fixed for nt consecutive uses (2 uses for the Golden code), the
// precoder index is fed back once per block, and every block owns the random
// stream keyed by (seed, snr point, block index), so results do not depend
// on the worker count.
struct SimConfig {
  Scheme scheme = Scheme::VblastLfb;
  int nt = 2;
  int nr = 2;
  int mod_order = 4;
  int feedback_bits = 4;
  std::string family;  // empty selects default_family(nt)
  std::vector<double> snr_db = {4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24};

  // Per SNR point: run at least min_trials blocks and keep going until
  // min_bit_errors errors are seen, but never beyond max_trials. A point
  // that hits the cap short of min_bit_errors is flagged censored.
  std::uint64_t min_trials = 1000;
  std::uint64_t max_trials = 100000;
  std::uint64_t min_bit_errors = 200;

  std::uint64_t seed = 1;
  int workers = 1;

  void validate() const;  // throws ConfigError
};

struct BerRecord {
  double snr_db = 0.0;
  std::uint64_t trials = 0;  // quasi-static blocks simulated
  std::uint64_t bits_sent = 0;
  std::uint64_t bit_errors = 0;
  double ber = 0.0;
  double mean_ops_per_symbol = 0.0;   // decode enumeration ops per complex symbol
  double mean_selection_ops = 0.0;    // selection enumeration ops per block
  bool censored = false;

  // Variance of the per-block error count; in-memory only, not serialized.
  double block_err_var = 0.0;

  // Standard error of the BER estimate. Blocks are the independent unit;
  // bits within a block share a channel realization.
  double stderr_ber() const;
};

using PointCallback = std::function<void(const BerRecord&)>;

// Sweeps config.snr_db and returns one record per point.
std::vector<BerRecord> run_ber(const SimConfig& config,
                               const PointCallback& on_point = {});

// Least-squares slope of log10(BER) versus SNR(dB) over records with
// lo_db <= snr <= hi_db, converted to a diversity order via
// BER ~ SNR^{-d}. Requires >= 2 usable records, each with >= 50 bit errors;
// throws ConfigError otherwise.
double estimate_diversity(const std::vector<BerRecord>& records, double lo_db,
                          double hi_db);

struct ComplexityRecord {
  Scheme scheme = Scheme::VblastLfb;
  double snr_db = 0.0;
  std::uint64_t decodes = 0;
  std::uint64_t symbols = 0;  // complex symbols decoded
  double decode_ops_per_symbol = 0.0;
  double decode_nodes_per_symbol = 0.0;
  double selection_ops_per_block = 0.0;
};

// Mean enumeration work at one SNR point over at least min_decodes decoder
// invocations. Selection work is tallied separately and excluded from the
// per-symbol decoding figure.
ComplexityRecord run_complexity(const SimConfig& config, double snr_db,
                                std::uint64_t min_decodes = 10000);

// Smallest SNR (within tol_db) whose BER falls at or below target_ber,
// located by bisection over [lo_db, hi_db] with short runs.
double find_snr_at_ber(const SimConfig& config, double target_ber,
                       double lo_db, double hi_db, double tol_db = 0.25);

// CSV with one data row per record. Header:
// scheme,nt,nr,mod,B,snr_db,trials,bits_sent,bit_errors,ber,ops_per_symbol,selection_ops,seed,censored
void write_csv(std::ostream& os, const SimConfig& config,
               const std::vector<BerRecord>& records);

// Parses the data columns written by write_csv.
std::vector<BerRecord> read_csv(std::istream& is);

// JSON summary: version string, config echo, and all records.
void write_json(std::ostream& os, const SimConfig& config,
                const std::vector<BerRecord>& records);

}  // namespace mimolfb
