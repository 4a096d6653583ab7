#include "mimolfb/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mimolfb/channel.hpp"
#include "mimolfb/errors.hpp"
#include "mimolfb/golden.hpp"
#include "mimolfb/precoder.hpp"
#include "mimolfb/version.hpp"

namespace mimolfb {

namespace {

// Stream domains. Domain 0 belongs to mu_metric; BER sweeps use
// 1 + snr index; complexity runs get their own tag.
constexpr std::uint32_t kBerDomainBase = 1;
constexpr std::uint32_t kComplexityDomain = 0x434F4D50;  // "COMP"

struct Tally {
  std::uint64_t blocks = 0;
  std::uint64_t bits = 0;
  std::uint64_t errs = 0;
  std::uint64_t errs_sq = 0;  // sum of squared per-block error counts
  std::uint64_t decodes = 0;
  std::uint64_t symbols = 0;
  OpCount decode_ops;
  OpCount selection_ops;

  Tally& operator+=(const Tally& o) {
    blocks += o.blocks;
    bits += o.bits;
    errs += o.errs;
    errs_sq += o.errs_sq;
    decodes += o.decodes;
    symbols += o.symbols;
    decode_ops += o.decode_ops;
    selection_ops += o.selection_ops;
    return *this;
  }
};

struct RunContext {
  SimConfig cfg;
  Constellation cons;
  PrecoderCodebook codebook;  // populated for the lfb scheme only

  int bits_per_block() const {
    return cfg.nt * cfg.nt * cons.bits_per_symbol();
  }
};

RunContext make_context(const SimConfig& cfg) {
  RunContext ctx{cfg, Constellation::qam(cfg.mod_order), {}};
  if (cfg.scheme == Scheme::VblastLfb) {
    UnitaryFamily fam = cfg.family.empty() ? default_family(cfg.nt)
                                           : make_family(cfg.family);
    if (fam.nt != cfg.nt)
      throw ConfigError("family '" + fam.name + "' is for nt = " +
                        std::to_string(fam.nt) + ", config has nt = " +
                        std::to_string(cfg.nt));
    ctx.codebook = build_codebook(fam, cfg.feedback_bits);
  }
  return ctx;
}

// One quasi-static V-BLAST block: nt channel uses under a fixed channel and,
// for the lfb scheme, a single per-block precoder decision.
void run_vblast_block(const RunContext& ctx, double sigma2,
                      std::uint32_t domain, std::uint64_t block, Tally& t) {
  const int nt = ctx.cfg.nt, nr = ctx.cfg.nr;
  const Constellation& cons = ctx.cons;
  const int bps = cons.bits_per_symbol();
  const int axis = cons.bits_per_axis();
  const int kbits = nt * bps;

  RandomStream rng(ctx.cfg.seed, domain, block);
  const ComplexMatrix h = sample_channel(nt, nr, rng);

  ComplexMatrix heff;
  if (ctx.cfg.scheme == Scheme::VblastLfb) {
    const Selection sel = select_precoder(h, ctx.codebook, cons);
    t.selection_ops += sel.ops;
    heff = h * ctx.codebook.entries[sel.index];
  } else {
    heff = h;
  }
  const PreparedBasis pb(realify(heff));

  ComplexVector x(nt), y(nr);
  RealVector y_real(2 * nr);
  std::uint32_t sent[8];
  std::uint64_t block_errs = 0;

  for (int use = 0; use < nt; ++use) {
    const std::uint64_t data = rng.next_bits(kbits);
    for (int a = 0; a < nt; ++a) {
      const auto sym =
          std::uint32_t(data >> (kbits - (a + 1) * bps)) & ((1u << bps) - 1);
      sent[a] = sym;
      x(a) = {double(cons.level_from_bits(sym >> axis)),
              double(cons.level_from_bits(sym & ((1u << axis) - 1)))};
    }
    y.noalias() = heff * x;
    add_noise(y, sigma2, rng);
    for (int r = 0; r < nr; ++r) {
      y_real(r) = y(r).real();
      y_real(r + nr) = y(r).imag();
    }

    const DecodeResult dec = pb.decode(y_real, cons.pam());
    t.decode_ops += dec.stats;
    ++t.decodes;
    t.symbols += nt;

    for (int a = 0; a < nt; ++a) {
      const std::uint32_t got = (cons.bits_from_level(dec.x(a)) << axis) |
                                cons.bits_from_level(dec.x(a + nt));
      block_errs += std::popcount(sent[a] ^ got);
    }
    t.bits += kbits;
  }
  t.errs += block_errs;
  t.errs_sq += block_errs * block_errs;
  ++t.blocks;
}

// One Golden-code block: 4 symbols jointly decoded over 2 channel uses.
void run_golden_block(const RunContext& ctx, double sigma2,
                      std::uint32_t domain, std::uint64_t block, Tally& t) {
  const Constellation& cons = ctx.cons;
  const int bps = cons.bits_per_symbol();
  const int axis = cons.bits_per_axis();
  const int kbits = 4 * bps;

  RandomStream rng(ctx.cfg.seed, domain, block);
  const ComplexMatrix h = sample_channel(2, 2, rng);

  const std::uint64_t data = rng.next_bits(kbits);
  ComplexVector s(4);
  std::uint32_t sent[4];
  for (int k = 0; k < 4; ++k) {
    const auto sym =
        std::uint32_t(data >> (kbits - (k + 1) * bps)) & ((1u << bps) - 1);
    sent[k] = sym;
    s(k) = {double(cons.level_from_bits(sym >> axis)),
            double(cons.level_from_bits(sym & ((1u << axis) - 1)))};
  }

  ComplexMatrix y = h * golden_encode(s);
  if (sigma2 > 0.0) {
    const double scale = std::sqrt(sigma2);
    for (int use = 0; use < 2; ++use)
      for (int r = 0; r < 2; ++r) y(r, use) += scale * rng.next_cgauss();
  }

  const GoldenDecodeResult dec = golden_ml_decode(y, h, cons);
  t.decode_ops += dec.stats;
  ++t.decodes;
  t.symbols += 4;

  std::uint64_t block_errs = 0;
  for (int k = 0; k < 4; ++k) {
    const int i_lvl = int(std::lround(dec.s(k).real()));
    const int q_lvl = int(std::lround(dec.s(k).imag()));
    const std::uint32_t got =
        (cons.bits_from_level(i_lvl) << axis) | cons.bits_from_level(q_lvl);
    block_errs += std::popcount(sent[k] ^ got);
  }
  t.bits += kbits;
  t.errs += block_errs;
  t.errs_sq += block_errs * block_errs;
  ++t.blocks;
}

void run_block(const RunContext& ctx, double sigma2, std::uint32_t domain,
               std::uint64_t block, Tally& t) {
  if (ctx.cfg.scheme == Scheme::Golden)
    run_golden_block(ctx, sigma2, domain, block, t);
  else
    run_vblast_block(ctx, sigma2, domain, block, t);
}

// Runs blocks [begin, end). Workers take contiguous slices and the partial
// tallies are combined in slice order; every field is an integer count, so
// the aggregate is exactly independent of the worker count.
void process_batch(const RunContext& ctx, double sigma2, std::uint32_t domain,
                   std::uint64_t begin, std::uint64_t end, Tally& total) {
  const int workers = ctx.cfg.workers;
  const std::uint64_t count = end - begin;
  if (workers <= 1 || count < 64) {
    Tally t;
    for (std::uint64_t b = begin; b < end; ++b)
      run_block(ctx, sigma2, domain, b, t);
    total += t;
    return;
  }
  std::vector<Tally> parts(workers);
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t b = begin + std::min<std::uint64_t>(w * chunk, count);
    const std::uint64_t e = begin + std::min<std::uint64_t>((w + 1) * chunk, count);
    if (b < e)
      pool.emplace_back([&ctx, sigma2, domain, b, e, &parts, w] {
        for (std::uint64_t blk = b; blk < e; ++blk)
          run_block(ctx, sigma2, domain, blk, parts[w]);
      });
  }
  for (auto& th : pool) th.join();
  for (const Tally& p : parts) total += p;
}

BerRecord tally_to_record(double snr_db, const Tally& t,
                          std::uint64_t min_bit_errors) {
  BerRecord rec;
  rec.snr_db = snr_db;
  rec.trials = t.blocks;
  rec.bits_sent = t.bits;
  rec.bit_errors = t.errs;
  rec.ber = t.bits ? double(t.errs) / double(t.bits) : 0.0;
  rec.mean_ops_per_symbol =
      t.symbols ? double(t.decode_ops.total()) / double(t.symbols) : 0.0;
  rec.mean_selection_ops =
      t.blocks ? double(t.selection_ops.total()) / double(t.blocks) : 0.0;
  rec.censored = t.errs < min_bit_errors;
  if (t.blocks > 1) {
    const double n = double(t.blocks);
    const double mean = double(t.errs) / n;
    rec.block_err_var =
        std::max(0.0, (double(t.errs_sq) - n * mean * mean) / (n - 1.0));
  }
  return rec;
}

BerRecord run_point(const RunContext& ctx, int snr_idx) {
  const SimConfig& cfg = ctx.cfg;
  const double snr_db = cfg.snr_db[snr_idx];
  const double sigma2 = noise_sigma2(snr_db, cfg.nt, ctx.cons.symbol_energy());
  const std::uint32_t domain = kBerDomainBase + std::uint32_t(snr_idx);

  Tally total;
  std::uint64_t done = 0;
  while (true) {
    const bool have_min = done >= cfg.min_trials;
    const bool have_err = total.errs >= cfg.min_bit_errors;
    if ((have_min && have_err) || done >= cfg.max_trials) break;

    // Batch sizes depend only on the (deterministic) tally so far, keeping
    // the total block count independent of the worker split.
    std::uint64_t batch;
    if (!have_min) {
      batch = cfg.min_trials - done;
    } else if (total.errs > 0) {
      const double rate = double(total.errs) / double(done);
      const double need =
          std::ceil(double(cfg.min_bit_errors - total.errs) / rate * 1.2);
      batch = std::clamp<std::uint64_t>(std::uint64_t(need), 1024,
                                        cfg.max_trials - done);
    } else {
      batch = std::clamp<std::uint64_t>(done, 1024, cfg.max_trials - done);
    }
    batch = std::min(batch, cfg.max_trials - done);
    process_batch(ctx, sigma2, domain, done, done + batch, total);
    done += batch;
  }
  return tally_to_record(snr_db, total, cfg.min_bit_errors);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  if (std::strtod(buf, nullptr) != v) std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::VblastPlain: return "vblast-plain";
    case Scheme::VblastLfb: return "vblast-lfb";
    case Scheme::Golden: return "golden";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "vblast-plain") return Scheme::VblastPlain;
  if (name == "vblast-lfb") return Scheme::VblastLfb;
  if (name == "golden") return Scheme::Golden;
  throw ConfigError("unknown scheme '" + name +
                    "' (known: vblast-plain, vblast-lfb, golden)");
}

void SimConfig::validate() const {
  if (nt < 1 || nt > 8) throw ConfigError("nt must be in 1..8");
  if (nr < 1 || nr > 8) throw ConfigError("nr must be in 1..8");
  if (nr < nt)
    throw ConfigError("ML detection requires nr >= nt (full column rank)");
  Constellation::qam(mod_order);  // throws for unsupported orders
  if (scheme == Scheme::Golden && (nt != 2 || nr != 2))
    throw ConfigError("golden scheme requires nt = nr = 2");
  if (scheme == Scheme::VblastLfb) {
    if (feedback_bits < 0 || feedback_bits > 16)
      throw ConfigError("feedback bits must be in 0..16");
    UnitaryFamily fam = family.empty() ? default_family(nt) : make_family(family);
    if (fam.nt != nt)
      throw ConfigError("family '" + fam.name + "' does not match nt");
  }
  if (snr_db.empty()) throw ConfigError("snr sweep is empty");
  if (min_trials < 1) throw ConfigError("min_trials must be >= 1");
  if (max_trials < min_trials)
    throw ConfigError("max_trials must be >= min_trials");
  if (workers < 1 || workers > 256) throw ConfigError("workers must be in 1..256");
  const int kbits = nt * Constellation::qam(mod_order).bits_per_symbol();
  if (kbits > 64) throw ConfigError("bits per channel use exceeds 64");
}

double BerRecord::stderr_ber() const {
  if (trials < 2 || bits_sent == 0) return 0.0;
  const double bits_per_block = double(bits_sent) / double(trials);
  return std::sqrt(block_err_var / double(trials)) / bits_per_block;
}

std::vector<BerRecord> run_ber(const SimConfig& config,
                               const PointCallback& on_point) {
  config.validate();
  const RunContext ctx = make_context(config);
  std::vector<BerRecord> out;
  out.reserve(config.snr_db.size());
  for (std::size_t i = 0; i < config.snr_db.size(); ++i) {
    out.push_back(run_point(ctx, int(i)));
    if (on_point) on_point(out.back());
  }
  return out;
}

double estimate_diversity(const std::vector<BerRecord>& records, double lo_db,
                          double hi_db) {
  std::vector<std::pair<double, double>> pts;
  for (const BerRecord& r : records) {
    if (r.snr_db < lo_db - 1e-9 || r.snr_db > hi_db + 1e-9) continue;
    if (r.bit_errors < 50) continue;
    pts.emplace_back(r.snr_db, std::log10(r.ber));
  }
  if (pts.size() < 2)
    throw ConfigError(
        "diversity estimate needs >= 2 records with >= 50 bit errors in [" +
        std::to_string(lo_db) + ", " + std::to_string(hi_db) + "] dB; have " +
        std::to_string(pts.size()));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = double(pts.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -10.0 * slope;
}

ComplexityRecord run_complexity(const SimConfig& config, double snr_db,
                                std::uint64_t min_decodes) {
  config.validate();
  const RunContext ctx = make_context(config);
  const std::uint64_t per_block = config.scheme == Scheme::Golden ? 1 : config.nt;
  const std::uint64_t blocks = (min_decodes + per_block - 1) / per_block;
  const double sigma2 =
      noise_sigma2(snr_db, config.nt, ctx.cons.symbol_energy());

  Tally total;
  process_batch(ctx, sigma2, kComplexityDomain, 0, blocks, total);

  ComplexityRecord rec;
  rec.scheme = config.scheme;
  rec.snr_db = snr_db;
  rec.decodes = total.decodes;
  rec.symbols = total.symbols;
  rec.decode_ops_per_symbol =
      total.symbols ? double(total.decode_ops.total()) / double(total.symbols) : 0.0;
  rec.decode_nodes_per_symbol =
      total.symbols ? double(total.decode_ops.nodes_visited) / double(total.symbols)
                    : 0.0;
  rec.selection_ops_per_block =
      total.blocks ? double(total.selection_ops.total()) / double(total.blocks) : 0.0;
  return rec;
}

double find_snr_at_ber(const SimConfig& config, double target_ber,
                       double lo_db, double hi_db, double tol_db) {
  config.validate();
  if (!(lo_db < hi_db) || target_ber <= 0.0 || tol_db <= 0.0)
    throw ConfigError("find_snr_at_ber: bad bracket or target");
  auto eval = [&](double snr) {
    SimConfig c = config;
    c.snr_db = {snr};
    return run_ber(c)[0].ber;
  };
  if (eval(lo_db) <= target_ber) return lo_db;
  if (eval(hi_db) > target_ber) return hi_db;
  double lo = lo_db, hi = hi_db;
  while (hi - lo > tol_db) {
    const double mid = 0.5 * (lo + hi);
    (eval(mid) > target_ber ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void write_csv(std::ostream& os, const SimConfig& config,
               const std::vector<BerRecord>& records) {
  os << "scheme,nt,nr,mod,B,snr_db,trials,bits_sent,bit_errors,ber,"
        "ops_per_symbol,selection_ops,seed,censored\n";
  const int b = config.scheme == Scheme::VblastLfb ? config.feedback_bits : 0;
  for (const BerRecord& r : records) {
    os << to_string(config.scheme) << ',' << config.nt << ',' << config.nr
       << ',' << config.mod_order << ',' << b << ',' << fmt_double(r.snr_db)
       << ',' << r.trials << ',' << r.bits_sent << ',' << r.bit_errors << ','
       << fmt_double(r.ber) << ',' << fmt_double(r.mean_ops_per_symbol) << ','
       << fmt_double(r.mean_selection_ops) << ',' << config.seed << ','
       << (r.censored ? 1 : 0) << '\n';
  }
}

std::vector<BerRecord> read_csv(std::istream& is) {
  std::vector<BerRecord> out;
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
    if (cols.size() != 14) throw ConfigError("malformed CSV row: " + line);
    BerRecord r;
    r.snr_db = std::strtod(cols[5].c_str(), nullptr);
    r.trials = std::strtoull(cols[6].c_str(), nullptr, 10);
    r.bits_sent = std::strtoull(cols[7].c_str(), nullptr, 10);
    r.bit_errors = std::strtoull(cols[8].c_str(), nullptr, 10);
    r.ber = std::strtod(cols[9].c_str(), nullptr);
    r.mean_ops_per_symbol = std::strtod(cols[10].c_str(), nullptr);
    r.mean_selection_ops = std::strtod(cols[11].c_str(), nullptr);
    r.censored = cols[13] == "1";
    out.push_back(r);
  }
  return out;
}

void write_json(std::ostream& os, const SimConfig& config,
                const std::vector<BerRecord>& records) {
  nlohmann::json doc;
  doc["version"] = version();
  doc["config"] = {
      {"scheme", to_string(config.scheme)},
      {"nt", config.nt},
      {"nr", config.nr},
      {"mod", config.mod_order},
      {"bits", config.feedback_bits},
      {"family", config.family},
      {"snr_db", config.snr_db},
      {"min_trials", config.min_trials},
      {"max_trials", config.max_trials},
      {"min_bit_errors", config.min_bit_errors},
      {"seed", config.seed},
      {"workers", config.workers},
  };
  nlohmann::json recs = nlohmann::json::array();
  for (const BerRecord& r : records) {
    recs.push_back({{"snr_db", r.snr_db},
                    {"trials", r.trials},
                    {"bits_sent", r.bits_sent},
                    {"bit_errors", r.bit_errors},
                    {"ber", r.ber},
                    {"ops_per_symbol", r.mean_ops_per_symbol},
                    {"selection_ops", r.mean_selection_ops},
                    {"censored", r.censored}});
  }
  doc["records"] = recs;
  os << doc.dump(2) << '\n';
}

}  // namespace mimolfb
