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

#include "smimo/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <locale>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "smimo/subspace_receiver.hpp"

namespace smimo {

namespace {

template <typename Fn>
void parallel_for(std::size_t jobs, int threads, Fn&& fn) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(jobs, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex m;
  auto run = [&] {
    try {
      for (std::size_t j = next++; j < jobs; j = next++) fn(j);
    } catch (...) {
      std::lock_guard lock(m);
      if (!failure) failure = std::current_exception();
      next = jobs;
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

long long bit_errors(const CMatrix& decided, const CMatrix& sent) {
  long long e = 0;
  for (Eigen::Index j = 0; j < sent.cols(); ++j) {
    for (Eigen::Index i = 0; i < sent.rows(); ++i) {
      e += (decided(i, j).real() < 0.0) != (sent(i, j).real() < 0.0);
      e += (decided(i, j).imag() < 0.0) != (sent(i, j).imag() < 0.0);
    }
  }
  return e;
}

struct PointSpec {
  SystemParams sys;
  double sweep_value;
  double parameter;
  int tau;
};

std::vector<BerPoint> run_points(const ExperimentConfig& cfg, const std::vector<PointSpec>& specs) {
  struct Job {
    std::size_t point;
    int block;
  };
  std::vector<Job> jobs;
  std::vector<int> nblocks(specs.size());
  for (std::size_t p = 0; p < specs.size(); ++p) {
    nblocks[p] = blocks_per_point(cfg, specs[p].tau);
    for (int b = 0; b < nblocks[p]; ++b) jobs.push_back({p, b});
  }
  std::vector<BlockErrors> results(jobs.size());
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t j) {
    const PointSpec& ps = specs[jobs[j].point];
    const int t_sel = cfg.t_sel > 0 ? cfg.t_sel : ps.sys.T;
    results[j] = run_block(ps.sys, ps.tau, t_sel, stream_seed(cfg.seed, static_cast<std::uint64_t>(jobs[j].block)));
  });

  std::vector<BlockErrors> totals(specs.size());
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    auto& t = totals[jobs[j].point];
    t.svd += results[j].svd;
    t.conventional += results[j].conventional;
    t.bits += results[j].bits;
  }

  std::vector<BerPoint> out;
  for (std::size_t p = 0; p < specs.size(); ++p) {
    for (Receiver rc : cfg.receivers) {
      BerPoint bp;
      bp.sweep_value = specs[p].sweep_value;
      bp.parameter = specs[p].parameter;
      bp.receiver = rc;
      bp.tau = specs[p].tau;
      bp.errors = rc == Receiver::svd ? totals[p].svd : totals[p].conventional;
      bp.bits = totals[p].bits;
      bp.symbols_counted = bp.bits / 2;
      bp.ber = bp.bits > 0 ? static_cast<double>(bp.errors) / static_cast<double>(bp.bits) : 0.0;
      bp.ci_halfwidth = ber_ci_halfwidth(bp.errors, bp.bits);
      out.push_back(bp);
    }
  }
  return out;
}

}  // namespace

std::string to_string(Receiver r) { return r == Receiver::svd ? "svd" : "conventional"; }

double ber_ci_halfwidth(long long errors, long long bits) {
  if (bits <= 0) return 0.0;
  const double p = static_cast<double>(errors) / static_cast<double>(bits);
  return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(bits));
}

int blocks_per_point(const ExperimentConfig& cfg, int tau) {
  const long long data = static_cast<long long>(cfg.base.T) * (cfg.base.C - static_cast<long long>(tau) * cfg.base.T);
  if (data <= 0) throw ConfigError("pilot blocks (tau*T) leave no data symbols in the coherence time");
  const long long need = (std::max(cfg.min_symbols, 0LL) + data - 1) / data;
  return static_cast<int>(std::max<long long>(need, std::max(cfg.min_blocks, 1)));
}

BlockErrors run_block(const SystemParams& sys, int tau, int t_sel, std::uint64_t block_seed) {
  auto pilot_rng = make_stream(block_seed, 1);
  const PilotConfig pilots =
      tau == 1 ? PilotConfig::orthogonal(sys.T, sys.P) : PilotConfig::random(sys.T, tau, sys.P, pilot_rng);
  const ChannelRealization rz = sample_realization(sys, pilots, block_seed, DataLaw::qpsk);
  const CMatrix Y = assemble_received(rz);
  const CMatrix sent = rz.X.rightCols(rz.data_columns());

  BlockErrors e;
  e.bits = 2 * sent.size();
  e.svd = bit_errors(subspace_receiver(Y, pilots, t_sel, sys.W, sys.P), sent);
  e.conventional = bit_errors(conventional_receiver(Y, pilots, sys.P), sent);
  return e;
}

std::vector<BerPoint> ber_vs_R(const ExperimentConfig& cfg) {
  if (cfg.tau_blocks.empty()) throw ConfigError("ber_vs_R: tau_blocks is empty");
  const int tau = cfg.tau_blocks.front();
  std::vector<PointSpec> specs;
  for (double delta : cfg.deltas) {
    for (double R : cfg.sweep_values) {
      SystemParams sys = cfg.base;
      sys.R = static_cast<int>(std::lround(R));
      sys.interference_powers = interference_profile(InterferenceProfile::modulo(delta), sys.T, sys.L, sys.P);
      sys.validate();
      specs.push_back({sys, R, delta, tau});
    }
  }
  return run_points(cfg, specs);
}

std::vector<BerPoint> ber_vs_IP(const ExperimentConfig& cfg) {
  std::vector<PointSpec> specs;
  for (int tau : cfg.tau_blocks) {
    for (double ratio : cfg.sweep_values) {
      if (!(ratio >= 0.0)) throw ConfigError("ber_vs_IP: I/P must be non-negative");
      SystemParams sys = cfg.base;
      sys.interference_powers = interference_profile(InterferenceProfile::flat(ratio * sys.P), sys.T, sys.L, sys.P);
      sys.validate();
      specs.push_back({sys, ratio, std::numeric_limits<double>::quiet_NaN(), tau});
    }
  }
  return run_points(cfg, specs);
}

std::vector<SupportEstimate> all_supports(const SystemParams& sys) {
  std::vector<SupportEstimate> out;
  const double I = sys.max_interference();
  if (!(sys.P > 0.0) || !(I > 0.0)) return out;
  const DerivedParams dp = derive_params(sys);
  auto add = [&](auto&& make) {
    try {
      SupportEstimate e = make();
      if (!dp.interference_flat) e.flags.push_back("interference_not_flat");
      out.push_back(std::move(e));
    } catch (const DomainError&) {
    } catch (const RegimeError&) {
    }
  };
  if (I != sys.P) add([&] { return unilateral_supports(dp, sys.P, I, sys.W, sys.L); });
  {
    auto noiseless = [&](SupportEstimate e) {
      if (sys.W > 0.0) e.flags.push_back("noise_ignored");
      return e;
    };
    add([&] { return noiseless(first_order_supports(dp, sys.L)); });
    add([&] { return noiseless(bilateral_supports_highsnr(dp, sys.L).rho_zeros); });
    add([&] { return noiseless(bilateral_supports_highsnr(dp, sys.L).enclosure); });
    add([&] { return bilateral_supports_general(dp, sys.L, dp.zeta); });
  }
  return out;
}

SpectrumResult spectrum_experiment(const SpectrumConfig& cfg) {
  cfg.sys.validate();
  if (cfg.seeds < 1) throw ConfigError("spectrum_experiment: need at least one seed");
  if (cfg.bins < 1) throw ConfigError("spectrum_experiment: need at least one bin");

  SpectrumResult res;
  const FixedPointParams fp = FixedPointParams::from_system(cfg.sys);
  const std::vector<double> grid = default_grid(fp, cfg.grid_points);
  const double span = grid.back() - grid.front();
  const double y = cfg.y_offset > 0.0 ? cfg.y_offset : 1e-4 * span;
  res.density = density_from_stieltjes(grid, fp, y, cfg.threads);

  PilotConfig no_pilots;
  no_pilots.pilot_matrix.resize(cfg.sys.T, 0);
  res.spectra.resize(static_cast<std::size_t>(cfg.seeds));
  parallel_for(res.spectra.size(), cfg.threads, [&](std::size_t i) {
    const auto rz = sample_realization(cfg.sys, no_pilots, stream_seed(cfg.seed, i), DataLaw::gaussian);
    res.spectra[i] = empirical_spectrum(assemble_received(rz));
  });

  double top = 0.0;
  for (const auto& s : res.spectra) top = std::max(top, s.empty() ? 0.0 : s.front());
  for (const auto& s : res.spectra) {
    for (double e : s) {
      if (e > 1e-9 * top) res.nonzero.push_back(e);
    }
  }
  if (res.nonzero.empty()) throw DomainError("spectrum_experiment: all eigenvalues are zero");

  const std::vector<double> cdf = normalized_cdf(res.density);
  res.ks_distance = kolmogorov_distance(res.nonzero, grid, cdf);

  const auto comps = res.density.components(1e-3);
  res.gap_lower = res.gap_upper = std::numeric_limits<double>::quiet_NaN();
  res.gap_mass = 0.0;
  if (comps.size() >= 2) {
    res.gap_lower = comps[comps.size() - 2].second;
    res.gap_upper = comps.back().first;
    const auto inside = std::count_if(res.nonzero.begin(), res.nonzero.end(),
                                      [&](double e) { return e > res.gap_lower && e < res.gap_upper; });
    res.gap_mass = static_cast<double>(inside) / static_cast<double>(res.nonzero.size());
  }

  const double hi = std::max(grid.back(), top);
  res.bin_edges = numerics::linspace(0.0, hi, cfg.bins + 1);
  const double width = hi / cfg.bins;
  res.histogram.assign(static_cast<std::size_t>(cfg.bins), 0.0);
  for (double e : res.nonzero) {
    const auto b = std::min<std::size_t>(static_cast<std::size_t>(e / width), static_cast<std::size_t>(cfg.bins) - 1);
    res.histogram[b] += 1.0;
  }
  for (double& h : res.histogram) h /= static_cast<double>(res.nonzero.size()) * width;

  const double mass = res.density.continuous_mass();
  res.asymptotic_at_bins.resize(static_cast<std::size_t>(cfg.bins));
  for (std::size_t b = 0; b < res.asymptotic_at_bins.size(); ++b) {
    const double x = 0.5 * (res.bin_edges[b] + res.bin_edges[b + 1]);
    double v = 0.0;
    if (x <= grid.back()) {
      const auto it = std::upper_bound(grid.begin(), grid.end(), x);
      const std::size_t j = std::clamp<std::size_t>(static_cast<std::size_t>(it - grid.begin()), 1, grid.size() - 1);
      const double w = (x - grid[j - 1]) / (grid[j] - grid[j - 1]);
      v = (1.0 - w) * res.density.values[j - 1] + w * res.density.values[j];
    }
    res.asymptotic_at_bins[b] = mass > 0.0 ? v / mass : 0.0;
  }

  res.supports = all_supports(cfg.sys);
  return res;
}

Containment bulk_containment(const std::vector<std::vector<double>>& spectra, int T, int LT,
                             const SupportEstimate& est) {
  if (T < 0 || LT < 0) throw DomainError("bulk_containment: negative bulk sizes");
  long long sig_in = 0, sig_n = 0, int_in = 0, int_n = 0;
  for (const auto& s : spectra) {
    if (s.size() < static_cast<std::size_t>(T + LT)) throw DomainError("bulk_containment: spectrum too short");
    for (int i = 0; i < T; ++i) {
      sig_in += est.signal.contains(s[static_cast<std::size_t>(i)]);
      ++sig_n;
    }
    for (int i = T; i < T + LT; ++i) {
      int_in += est.interference.contains(s[static_cast<std::size_t>(i)]);
      ++int_n;
    }
  }
  Containment c;
  c.signal = sig_n > 0 ? static_cast<double>(sig_in) / static_cast<double>(sig_n) : 1.0;
  c.interference = int_n > 0 ? static_cast<double>(int_in) / static_cast<double>(int_n) : 1.0;
  return c;
}

void write_ber_csv(std::ostream& os, const std::vector<BerPoint>& points, const std::string& header_json) {
  std::ostringstream buf;
  buf.imbue(std::locale::classic());
  buf.precision(std::numeric_limits<double>::max_digits10);
  std::istringstream lines(header_json);
  for (std::string line; std::getline(lines, line);) buf << "# " << line << '\n';
  buf << "sweep_value,parameter,receiver,tau,ber,errors,bits,ci\n";
  for (const BerPoint& p : points) {
    buf << p.sweep_value << ',';
    if (std::isfinite(p.parameter)) buf << p.parameter;
    buf << ',' << to_string(p.receiver) << ',' << p.tau << ',' << p.ber << ',' << p.errors << ',' << p.bits << ','
        << p.ci_halfwidth << '\n';
  }
  os << buf.str();
}

}  // namespace smimo
