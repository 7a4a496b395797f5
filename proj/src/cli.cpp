// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The smimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "smimo/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <limits>
#include <locale>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "smimo/bulk_support.hpp"
#include "smimo/config.hpp"
#include "smimo/errors.hpp"
#include "smimo/montecarlo.hpp"
#include "smimo/rmt_spectrum.hpp"

namespace smimo {

using nlohmann::json;

namespace {

struct Common {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  int threads = 0;
  int grid_points = 4000;
  double y_offset = 0.0;
};

struct Context {
  RunConfig cfg;
  json header;
  std::filesystem::path out;
};

Context prepare(const Common& c, const std::string& command) {
  Context ctx;
  ctx.cfg = c.config_path.empty() ? parse_config(json::object()) : load_config(c.config_path);
  if (c.seed) ctx.cfg.seed = *c.seed;
  if (c.threads < 0) throw ConfigError("--threads must be non-negative");
  if (c.grid_points < 2) throw ConfigError("--grid-points must be at least 2");
  if (c.y_offset < 0.0) throw ConfigError("--y-offset must be non-negative");
  ctx.header = {{"command", command},
                {"seed", ctx.cfg.seed},
                {"config", to_json(ctx.cfg)},
                {"run", {{"threads", c.threads}, {"grid_points", c.grid_points}, {"y_offset", c.y_offset}}}};
  ctx.out = c.out_dir;
  std::error_code ec;
  std::filesystem::create_directories(ctx.out, ec);
  if (ec || !std::filesystem::is_directory(ctx.out)) {
    throw ConfigError("cannot create output directory '" + c.out_dir + "'");
  }
  return ctx;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write '" + path.string() + "'");
  os.imbue(std::locale::classic());
  os.precision(std::numeric_limits<double>::max_digits10);
  return os;
}

void write_json(const std::filesystem::path& path, const json& doc) {
  auto os = open_output(path);
  os << doc.dump(2) << '\n';
}

void comment_header(std::ostream& os, const json& header) { os << "# " << header.dump() << '\n'; }

json interval_json(const BulkInterval& b) { return {{"lower", b.lower}, {"upper", b.upper}}; }

json estimate_json(const SupportEstimate& e) {
  return {{"method", to_string(e.method)},
          {"variant", e.variant},
          {"valid", e.valid},
          {"separable", e.separable},
          {"signal", interval_json(e.signal)},
          {"interference", interval_json(e.interference)},
          {"flags", e.flags}};
}

// Largest overshoot of `b` past `u`, relative to the width of `u`.
double overshoot(const BulkInterval& b, const BulkInterval& u) {
  const double w = u.width() > 0.0 ? u.width() : 1.0;
  return std::max({u.lower - b.lower, b.upper - u.upper, 0.0}) / w;
}

json support_document(const RunConfig& cfg, const json& header) {
  const SystemParams& sys = cfg.sys;
  const DerivedParams dp = derive_params(sys);
  std::vector<SupportEstimate> estimates = all_supports(sys);

  json doc = header;
  doc["derived"] = {{"kappa", dp.kappa},           {"alpha", dp.alpha}, {"r", dp.r},
                    {"t", dp.t},                   {"zeta", dp.zeta},   {"I_over_P", dp.beta_ratio},
                    {"interference_flat", dp.interference_flat}};
  json thresholds;
  try {
    const UnilateralVerdict v = unilateral_separable(dp, sys.P, sys.W, sys.L);
    thresholds["unilateral"] = {{"I_over_P", v.threshold}, {"separable", v.separable}};
  } catch (const RegimeError& e) {
    thresholds["unilateral"] = {{"I_over_P", nullptr}, {"error", e.what()}};
  }
  const double bil = separability_threshold(dp.alpha / dp.kappa, sys.L);
  thresholds["bilateral"] = {{"I_over_P", bil}, {"separable", dp.beta_ratio < bil}};
  doc["thresholds"] = thresholds;

  // Bilateral intervals are compared with the scaled unilateral ones; anything
  // sticking out by more than 10 % of the unilateral width is flagged.
  const SupportEstimate* uni = nullptr;
  for (const auto& e : estimates) {
    if (e.method == SupportMethod::unilateral && e.valid) uni = &e;
  }
  json consistency = json::array();
  if (uni != nullptr) {
    for (auto& e : estimates) {
      if (&e == uni || !e.valid) continue;
      const double os_sig = overshoot(e.signal, uni->signal);
      const double os_int = overshoot(e.interference, uni->interference);
      const bool within = os_sig <= 0.1 && os_int <= 0.1;
      if (!within) e.flags.push_back("exceeds_unilateral");
      consistency.push_back({{"method", to_string(e.method)},
                             {"variant", e.variant},
                             {"flags", e.flags},
                             {"signal_overshoot", os_sig},
                             {"interference_overshoot", os_int},
                             {"within_tolerance", within}});
    }
  }
  doc["estimates"] = json::array();
  for (const auto& e : estimates) doc["estimates"].push_back(estimate_json(e));
  doc["consistency_with_unilateral"] = consistency;

  if (std::isfinite(dp.t) && dp.t > dp.r) {
    try {
      const RepulsionReport rep = appendixB_scale_verification(dp, sys.L);
      doc["repulsion"] = {{"G4", rep.G4},       {"s0_at_G4", rep.s0_at_G4},     {"s0_closed", rep.s0_closed},
                          {"ratio", rep.ratio}, {"ratio_formula", rep.ratio_formula}, {"i_P", rep.i_P},
                          {"minus_branch", rep.minus_branch}};
    } catch (const DomainError&) {
    }
  }
  return doc;
}

void run_coherence(const Common& c, std::ostream& out) {
  Context ctx = prepare(c, "coherence");
  const double symbols = coherence_symbols(ctx.cfg.radio);
  json doc = ctx.header;
  doc["coherence_symbols"] = symbols;
  write_json(ctx.out / "coherence.json", doc);
  std::ostringstream line;
  line.imbue(std::locale::classic());
  line.precision(std::numeric_limits<double>::max_digits10);
  line << symbols << '\n';
  out << line.str();
}

void run_spectrum(const Common& c, int seeds, int bins, std::ostream& out) {
  Context ctx = prepare(c, "spectrum");
  SpectrumConfig sc;
  sc.sys = ctx.cfg.sys;
  sc.seeds = seeds > 0 ? seeds : ctx.cfg.seeds;
  sc.seed = ctx.cfg.seed;
  sc.grid_points = c.grid_points;
  sc.y_offset = c.y_offset;
  sc.bins = bins;
  sc.threads = c.threads;
  ctx.header["run"]["seeds"] = sc.seeds;
  ctx.header["run"]["bins"] = sc.bins;
  const SpectrumResult res = spectrum_experiment(sc);

  {
    auto os = open_output(ctx.out / "density.csv");
    os << "# kappa=" << derive_params(sc.sys).kappa << '\n';
    os << "# atom=" << res.density.atom_at_zero << '\n';
    os << "# continuous_mass=" << res.density.continuous_mass() << '\n';
    comment_header(os, ctx.header);
    os << "x,density\n";
    for (std::size_t i = 0; i < res.density.grid.size(); ++i) {
      os << res.density.grid[i] << ',' << res.density.values[i] << '\n';
    }
  }
  {
    auto os = open_output(ctx.out / "histogram.csv");
    comment_header(os, ctx.header);
    os << "bin_lower,bin_upper,empirical,asymptotic\n";
    for (std::size_t b = 0; b < res.histogram.size(); ++b) {
      os << res.bin_edges[b] << ',' << res.bin_edges[b + 1] << ',' << res.histogram[b] << ','
         << res.asymptotic_at_bins[b] << '\n';
    }
  }
  json doc = support_document(ctx.cfg, ctx.header);
  doc["ks_distance"] = res.ks_distance;
  doc["gap"] = {{"lower", res.gap_lower}, {"upper", res.gap_upper}, {"mass", res.gap_mass}};
  doc["atom_at_zero"] = res.density.atom_at_zero;
  doc["continuous_mass"] = res.density.continuous_mass();
  write_json(ctx.out / "spectrum.json", doc);
  out << (ctx.out / "density.csv").string() << '\n'
      << (ctx.out / "histogram.csv").string() << '\n'
      << (ctx.out / "spectrum.json").string() << '\n';
}

void run_support(const Common& c, std::ostream& out) {
  Context ctx = prepare(c, "support");
  write_json(ctx.out / "support.json", support_document(ctx.cfg, ctx.header));
  out << (ctx.out / "support.json").string() << '\n';
}

void run_separability(const Common& c, std::vector<int> Ls, int points, std::ostream& out) {
  Context ctx = prepare(c, "separability");
  if (Ls.empty()) Ls = ctx.cfg.L_values;
  if (Ls.empty()) Ls = {2, 4, 7};
  if (points < 2) throw ConfigError("--points must be at least 2");
  ctx.header["run"]["L"] = Ls;
  ctx.header["run"]["points"] = points;
  auto os = open_output(ctx.out / "separability.csv");
  comment_header(os, ctx.header);
  os << "L,beta,alpha_over_kappa\n";
  for (int L : Ls) {
    for (double beta : numerics::linspace(0.0, 1.0, points)) {
      os << L << ',' << beta << ',' << separability_boundary(beta, L) << '\n';
    }
  }
  out << (ctx.out / "separability.csv").string() << '\n';
}

void run_ber(const Common& c, const std::string& sweep, long long min_symbols, std::ostream& out) {
  Context ctx = prepare(c, "ber");
  const RunConfig& rc = ctx.cfg;
  ExperimentConfig ec;
  ec.base = rc.sys;
  ec.min_symbols = min_symbols > 0 ? min_symbols : rc.min_symbols;
  ec.t_sel = rc.t_sel;
  ec.seed = rc.seed;
  ec.threads = c.threads;
  std::vector<BerPoint> points;
  if (sweep == "R") {
    ec.sweep_values = rc.R_values.empty() ? std::vector<double>{50, 100, 200, 400} : rc.R_values;
    ec.deltas = rc.deltas.empty() ? std::vector<double>{2, 3, 4, 5, 6} : rc.deltas;
    ec.tau_blocks = {rc.tau_blocks};
    points = ber_vs_R(ec);
  } else {
    ec.sweep_values = rc.I_over_P_values.empty() ? std::vector<double>{0.1, 0.3, 0.5, 0.7, 0.95} : rc.I_over_P_values;
    ec.tau_blocks = rc.tau_values.empty() ? std::vector<int>{rc.tau_blocks} : rc.tau_values;
    points = ber_vs_IP(ec);
  }
  ctx.header["run"]["sweep"] = sweep;
  ctx.header["run"]["min_symbols"] = ec.min_symbols;
  // Both receivers of a point decode the same blocks: block b uses stream b of the seed.
  ctx.header["run"]["paired_streams"] = true;
  auto os = open_output(ctx.out / "ber.csv");
  write_ber_csv(os, points, ctx.header.dump());
  out << (ctx.out / "ber.csv").string() << '\n';
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  if (dynamic_cast<const SolverError*>(&e)) return "SolverError";
  if (dynamic_cast<const EstimationError*>(&e)) return "EstimationError";
  if (dynamic_cast<const RegimeError*>(&e)) return "RegimeError";
  return "Error";
}

void report(std::ostream& err, const std::string& kind, const std::string& message) {
  err << json{{"error", {{"type", kind}, {"message", message}}}}.dump() << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-cell massive MIMO spectra, bulk supports and BER experiments", "smimo"};
  app.require_subcommand(1);
  Common c;
  app.add_option("--config", c.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", c.out_dir, "Output directory");
  app.add_option("--seed", c.seed, "Overrides the config seed");
  app.add_option("--threads", c.threads, "Worker threads (0: all cores)");
  app.add_option("--grid-points", c.grid_points, "Density grid size");
  app.add_option("--y-offset", c.y_offset, "Distance from the real axis for density inversion (0: automatic)");

  auto* coherence = app.add_subcommand("coherence", "Coherence time in symbols");
  auto* spectrum = app.add_subcommand("spectrum", "Asymptotic density, empirical histogram and supports");
  int seeds = 0;
  int bins = 120;
  spectrum->add_option("--seeds", seeds, "Realizations (0: config value)");
  spectrum->add_option("--bins", bins, "Histogram bins");
  auto* support = app.add_subcommand("support", "Bulk supports from every method");
  auto* separability = app.add_subcommand("separability", "Separability boundary alpha/kappa against I/P");
  std::vector<int> Ls;
  int points = 201;
  separability->add_option("--L", Ls, "Neighbour counts")->delimiter(',');
  separability->add_option("--points", points, "I/P grid points on [0, 1]");
  auto* ber = app.add_subcommand("ber", "Uncoded QPSK bit error rate sweeps");
  std::string sweep;
  long long min_symbols = 0;
  ber->add_option("--sweep", sweep, "R or IP")->required()->check(CLI::IsMember({"R", "IP"}));
  ber->add_option("--min-symbols", min_symbols, "Data symbols per point (0: config value)");
  for (auto* sub : {coherence, spectrum, support, separability, ber}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report(err, "UsageError", e.what());
    return 2;
  }

  try {
    if (*coherence) run_coherence(c, out);
    if (*spectrum) run_spectrum(c, seeds, bins, out);
    if (*support) run_support(c, out);
    if (*separability) run_separability(c, Ls, points, out);
    if (*ber) run_ber(c, sweep, min_symbols, out);
  } catch (const std::exception& e) {
    report(err, error_kind(e), e.what());
    return 1;
  }
  return 0;
}

}  // namespace smimo
