// mimolfb: link-level Monte-Carlo simulator for limited-feedback precoded
// V-BLAST and the Golden-code baseline.
//
// Subcommands: ber, mu, dmin, complexity, codebook-export.
// Exit codes: 0 success, 2 configuration error, 3 censored-only results.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mimolfb/channel.hpp"
#include "mimolfb/errors.hpp"
#include "mimolfb/precoder.hpp"
#include "mimolfb/sim.hpp"
#include "mimolfb/version.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCensored = 3;

// "16", "4:24:2" -> explicit SNR list.
std::vector<double> parse_snr(const std::string& text) {
  std::vector<double> out;
  const auto c1 = text.find(':');
  if (c1 == std::string::npos) {
    out.push_back(std::stod(text));
    return out;
  }
  const auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos)
    throw mimolfb::ConfigError("--snr expects <value> or <start:stop:step>");
  const double start = std::stod(text.substr(0, c1));
  const double stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  const double step = std::stod(text.substr(c2 + 1));
  if (step <= 0) throw mimolfb::ConfigError("--snr step must be positive");
  for (double v = start; v <= stop + 1e-9; v += step) out.push_back(v);
  if (out.empty()) throw mimolfb::ConfigError("--snr range is empty");
  return out;
}

// Complex matrix from JSON: rows of entries, each entry a number or a
// [re, im] pair.
mimolfb::ComplexMatrix parse_matrix(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw mimolfb::ConfigError(std::string("bad matrix JSON: ") + e.what());
  }
  if (!doc.is_array() || doc.empty() || !doc[0].is_array())
    throw mimolfb::ConfigError("matrix must be a JSON array of rows");
  const int rows = int(doc.size());
  const int cols = int(doc[0].size());
  mimolfb::ComplexMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (int(doc[r].size()) != cols)
      throw mimolfb::ConfigError("matrix rows have unequal lengths");
    for (int c = 0; c < cols; ++c) {
      const auto& e = doc[r][c];
      if (e.is_number()) {
        m(r, c) = {e.get<double>(), 0.0};
      } else if (e.is_array() && e.size() == 2) {
        m(r, c) = {e[0].get<double>(), e[1].get<double>()};
      } else {
        throw mimolfb::ConfigError("matrix entries must be numbers or [re, im]");
      }
    }
  }
  return m;
}

// Values from a JSON config file fill any option the user did not pass on
// the command line; explicit flags always win.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mimolfb::ConfigError("cannot open config file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw mimolfb::ConfigError("config file " + path + ": " + e.what());
  }
  if (!doc.is_object())
    throw mimolfb::ConfigError("config file must hold a JSON object");
  for (const auto& [key, value] : doc.items()) {
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt == nullptr)
      throw mimolfb::ConfigError("config file key '" + key +
                                 "' matches no option of this subcommand");
    if (opt->count() > 0) continue;  // flag given explicitly
    std::string text;
    if (value.is_string())
      text = value.get<std::string>();
    else
      text = value.dump();
    opt->add_result(text);
    opt->run_callback();
  }
}

struct CommonOpts {
  std::string scheme = "vblast-lfb";
  int nt = 2;
  int nr = 2;
  int mod = 4;
  int bits = 4;
  std::string family;
  std::string snr = "4:24:2";
  std::uint64_t trials = 1000;
  std::uint64_t max_trials = 100000;
  std::uint64_t min_errors = 200;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out;
  std::string format = "csv";
  std::string config_path;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_scheme) {
  if (with_scheme)
    cmd->add_option("--scheme", o.scheme,
                    "vblast-plain | vblast-lfb | golden");
  cmd->add_option("--nt", o.nt, "transmit antennas");
  cmd->add_option("--nr", o.nr, "receive antennas");
  cmd->add_option("--mod", o.mod, "QAM order (4 or 16)");
  cmd->add_option("--bits", o.bits, "feedback bits B (codebook size 2^B)");
  cmd->add_option("--family", o.family,
                  "precoder family (u2, u2alt, u3, u4, u8; default by nt)");
  cmd->add_option("--snr", o.snr, "SNR in dB: <value> or <start:stop:step>");
  cmd->add_option("--trials", o.trials, "minimum quasi-static blocks per point");
  cmd->add_option("--max-trials", o.max_trials, "block cap per point");
  cmd->add_option("--min-errors", o.min_errors,
                  "bit errors collected before a point may stop");
  cmd->add_option("--seed", o.seed, "base RNG seed");
  cmd->add_option("--workers", o.workers, "worker threads");
  cmd->add_option("--out", o.out, "output path (default stdout)");
  cmd->add_option("--format", o.format, "csv | json");
  cmd->add_option("--config", o.config_path,
                  "JSON file supplying any flag; explicit flags override");
}

mimolfb::SimConfig to_sim_config(const CommonOpts& o) {
  mimolfb::SimConfig cfg;
  cfg.scheme = mimolfb::scheme_from_string(o.scheme);
  cfg.nt = o.nt;
  cfg.nr = o.nr;
  cfg.mod_order = o.mod;
  cfg.feedback_bits = o.bits;
  cfg.family = o.family;
  cfg.snr_db = parse_snr(o.snr);
  cfg.min_trials = o.trials;
  cfg.max_trials = o.max_trials;
  cfg.min_bit_errors = o.min_errors;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  return cfg;
}

// Writes to o.out or stdout.
void emit(const CommonOpts& o, const std::function<void(std::ostream&)>& fn) {
  if (o.out.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw mimolfb::ConfigError("cannot open output path " + o.out);
  fn(file);
  if (!file.good())
    throw mimolfb::ConfigError("write failed for output path " + o.out);
}

int cmd_ber(const CommonOpts& o) {
  const mimolfb::SimConfig cfg = to_sim_config(o);
  const auto records = mimolfb::run_ber(cfg, [](const mimolfb::BerRecord& r) {
    std::cerr << "snr " << r.snr_db << " dB: ber " << r.ber << " ("
              << r.bit_errors << " errors, " << r.trials << " blocks"
              << (r.censored ? ", censored" : "") << ")\n";
  });
  if (o.format == "json")
    emit(o, [&](std::ostream& os) { mimolfb::write_json(os, cfg, records); });
  else
    emit(o, [&](std::ostream& os) { mimolfb::write_csv(os, cfg, records); });
  const bool all_censored =
      std::all_of(records.begin(), records.end(),
                  [](const mimolfb::BerRecord& r) { return r.censored; });
  return all_censored ? kExitCensored : kExitOk;
}

int cmd_mu(const CommonOpts& o) {
  const mimolfb::UnitaryFamily fam =
      o.family.empty() ? mimolfb::default_family(o.nt)
                       : mimolfb::make_family(o.family);
  const auto c = mimolfb::Constellation::qam(o.mod);
  const auto est = mimolfb::mu_metric(fam, o.bits, c, o.trials, o.seed, o.nr,
                                      o.workers);
  emit(o, [&](std::ostream& os) {
    if (o.format == "json") {
      json doc = {{"family", fam.name},   {"bits", o.bits},
                  {"mod", o.mod},         {"samples", est.samples},
                  {"mu", est.mu},         {"stderr", est.stderr_mean},
                  {"seed", o.seed}};
      os << doc.dump(2) << '\n';
    } else {
      os << "mu(" << fam.name << ", B=" << o.bits << ", " << o.mod
         << "-QAM) = " << est.mu << " +- " << est.stderr_mean << " ("
         << est.samples << " samples)\n";
    }
  });
  return kExitOk;
}

int cmd_dmin(const CommonOpts& o, const std::string& h_text) {
  const mimolfb::UnitaryFamily fam =
      o.family.empty() ? mimolfb::default_family(o.nt)
                       : mimolfb::make_family(o.family);
  const auto c = mimolfb::Constellation::qam(o.mod);
  const auto cb = mimolfb::build_codebook(fam, o.bits);

  mimolfb::ComplexMatrix h;
  if (!h_text.empty()) {
    h = parse_matrix(h_text);
    if (int(h.cols()) != fam.nt)
      throw mimolfb::ConfigError("channel has " + std::to_string(h.cols()) +
                                 " columns, family needs " +
                                 std::to_string(fam.nt));
  } else {
    mimolfb::RandomStream rng(o.seed, 0, 0);
    h = mimolfb::sample_channel(fam.nt, o.nr, rng);
  }

  std::vector<double> dmins(cb.size());
  for (int i = 0; i < cb.size(); ++i)
    dmins[i] = mimolfb::dmin_for_index(h, cb, i, c);
  const auto sel = mimolfb::select_precoder(h, cb, c);

  emit(o, [&](std::ostream& os) {
    if (o.format == "json") {
      json doc = {{"family", fam.name},
                  {"bits", o.bits},
                  {"mod", o.mod},
                  {"selected", sel.index},
                  {"dmin", json::array()}};
      for (double d : dmins) doc["dmin"].push_back(d);
      os << doc.dump(2) << '\n';
    } else {
      for (int i = 0; i < cb.size(); ++i)
        os << i << (i == sel.index ? " *" : "  ") << " dmin=" << dmins[i]
           << '\n';
      os << "selected index " << sel.index << " (dmin " << sel.dmin << ")\n";
    }
  });
  return kExitOk;
}

int cmd_complexity(const CommonOpts& o, double snr_override, double target_ber,
                   std::uint64_t decodes) {
  mimolfb::SimConfig cfg = to_sim_config(o);
  double snr = snr_override;
  if (std::isnan(snr)) {
    // Locate the SNR hitting the target BER with short calibration runs.
    mimolfb::SimConfig probe = cfg;
    probe.min_trials = 2000;
    probe.max_trials = 200000;
    probe.min_bit_errors = 150;
    const auto sweep = parse_snr(o.snr);
    snr = mimolfb::find_snr_at_ber(probe, target_ber, sweep.front(),
                                   sweep.back(), 0.25);
    std::cerr << "snr at ber " << target_ber << ": " << snr << " dB\n";
  }
  const auto rec = mimolfb::run_complexity(cfg, snr, decodes);
  emit(o, [&](std::ostream& os) {
    if (o.format == "json") {
      json doc = {{"scheme", mimolfb::to_string(rec.scheme)},
                  {"snr_db", rec.snr_db},
                  {"decodes", rec.decodes},
                  {"symbols", rec.symbols},
                  {"decode_ops_per_symbol", rec.decode_ops_per_symbol},
                  {"decode_nodes_per_symbol", rec.decode_nodes_per_symbol},
                  {"selection_ops_per_block", rec.selection_ops_per_block}};
      os << doc.dump(2) << '\n';
    } else {
      os << mimolfb::to_string(rec.scheme) << " @ " << rec.snr_db
         << " dB: " << rec.decode_ops_per_symbol << " real ops/symbol over "
         << rec.decodes << " decodes; selection "
         << rec.selection_ops_per_block << " ops/block\n";
    }
  });
  return kExitOk;
}

int cmd_codebook_export(const CommonOpts& o) {
  const mimolfb::UnitaryFamily fam =
      o.family.empty() ? mimolfb::default_family(o.nt)
                       : mimolfb::make_family(o.family);
  const auto cb = mimolfb::build_codebook(fam, o.bits);
  emit(o, [&](std::ostream& os) { os << mimolfb::codebook_to_json(cb) << '\n'; });
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"link-level simulator for limited-feedback precoded V-BLAST "
               "and Golden-code MIMO"};
  app.set_version_flag("--version", mimolfb::version());
  app.require_subcommand(1);

  CommonOpts ber_opts, mu_opts, dmin_opts, cx_opts, export_opts;
  std::string dmin_h;
  double cx_snr = std::nan("");
  double cx_target = 1e-2;
  std::uint64_t cx_decodes = 10000;

  CLI::App* ber = app.add_subcommand("ber", "Monte-Carlo BER sweep");
  add_common(ber, ber_opts, true);

  CLI::App* mu = app.add_subcommand("mu", "codebook quality indicator");
  add_common(mu, mu_opts, false);

  CLI::App* dmin = app.add_subcommand(
      "dmin", "per-index minimum distances for one channel");
  add_common(dmin, dmin_opts, false);
  dmin->add_option("--channel", dmin_h,
                   "channel matrix as JSON rows of numbers or [re, im] "
                   "pairs; omitted: sample one from --seed");

  CLI::App* cx = app.add_subcommand(
      "complexity", "mean decode operations at a target-BER SNR");
  add_common(cx, cx_opts, true);
  cx->add_option("--at-snr", cx_snr, "skip calibration and run at this SNR");
  cx->add_option("--target-ber", cx_target, "calibration target (default 1e-2)");
  cx->add_option("--decodes", cx_decodes, "decoder invocations to average");

  CLI::App* exp = app.add_subcommand("codebook-export",
                                     "write a codebook as a JSON document");
  add_common(exp, export_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    for (auto [cmd, opts] :
         {std::pair{ber, &ber_opts}, {mu, &mu_opts}, {dmin, &dmin_opts},
          {cx, &cx_opts}, {exp, &export_opts}}) {
      if (cmd->parsed() && !opts->config_path.empty())
        apply_config_file(cmd, opts->config_path);
    }
    if (ber->parsed()) return cmd_ber(ber_opts);
    if (mu->parsed()) return cmd_mu(mu_opts);
    if (dmin->parsed()) return cmd_dmin(dmin_opts, dmin_h);
    if (cx->parsed()) return cmd_complexity(cx_opts, cx_snr, cx_target, cx_decodes);
    if (exp->parsed()) return cmd_codebook_export(export_opts);
  } catch (const mimolfb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
