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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "smimo/bulk_support.hpp"
#include "smimo/rmt_spectrum.hpp"
#include "smimo/system_model.hpp"

namespace smimo {

enum class Receiver { svd, conventional };
std::string to_string(Receiver r);

/// One BER measurement. `parameter` is the secondary sweep value (delta of the
/// modulo profile for R sweeps, NaN otherwise).
struct BerPoint {
  double sweep_value = 0.0;
  double parameter = 0.0;
  Receiver receiver = Receiver::svd;
  int tau = 1;
  long long errors = 0;
  long long bits = 0;
  long long symbols_counted = 0;
  double ber = 0.0;
  double ci_halfwidth = 0.0;  // 95 %, normal approximation
};

/// 1.96 sqrt(p (1 - p) / bits).
double ber_ci_halfwidth(long long errors, long long bits);

struct ExperimentConfig {
  SystemParams base;                 // interference_powers are regenerated per point
  std::vector<double> sweep_values;  // R values or I/P ratios
  std::vector<double> deltas;        // modulo-profile parameters (R sweep)
  std::vector<int> tau_blocks{1};
  std::vector<Receiver> receivers{Receiver::svd, Receiver::conventional};
  long long min_symbols = 100000;  // data symbols per point and receiver
  int min_blocks = 1;
  int t_sel = 0;  // 0: T
  std::uint64_t seed = 1;
  int threads = 0;  // 0: hardware concurrency
};

/// Coherence blocks needed for `min_symbols` data symbols.
int blocks_per_point(const ExperimentConfig& cfg, int tau);

/// Bit errors of both receivers on one block. Both receivers see the same Y.
struct BlockErrors {
  long long svd = 0;
  long long conventional = 0;
  long long bits = 0;
};
BlockErrors run_block(const SystemParams& sys, int tau, int t_sel, std::uint64_t block_seed);

/// BER against the number of receive antennas, one curve per delta of the
/// modulo interference profile. Block b of every point uses stream b of the
/// seed, so receivers and points share realization lineage.
std::vector<BerPoint> ber_vs_R(const ExperimentConfig& cfg);

/// BER against I/P with flat interference, one curve per tau.
std::vector<BerPoint> ber_vs_IP(const ExperimentConfig& cfg);

struct SpectrumConfig {
  SystemParams sys;
  int seeds = 20;
  std::uint64_t seed = 1;
  int grid_points = 4000;
  double y_offset = 0.0;  // 0: 1e-4 of the grid span
  int bins = 120;
  int threads = 0;
};

struct SpectrumResult {
  SpectralDensity density;
  std::vector<std::vector<double>> spectra;  // per seed, descending, Y Y^H / R
  std::vector<double> nonzero;               // pooled nonzero eigenvalues
  std::vector<double> bin_edges;
  std::vector<double> histogram;             // per-bin density of the nonzero eigenvalues
  std::vector<double> asymptotic_at_bins;    // continuous density / continuous mass at bin centres
  std::vector<SupportEstimate> supports;     // all methods that apply
  double ks_distance = 0.0;
  double gap_lower = 0.0;  // empty region between the two top bulks (NaN if none)
  double gap_upper = 0.0;
  double gap_mass = 0.0;   // fraction of nonzero eigenvalues strictly inside the gap
};

SpectrumResult spectrum_experiment(const SpectrumConfig& cfg);

/// Fraction of the top T (signal) and the next L T (interference) eigenvalues
/// of each spectrum that fall in the corresponding interval.
struct Containment {
  double signal = 0.0;
  double interference = 0.0;
};
Containment bulk_containment(const std::vector<std::vector<double>>& spectra, int T, int LT,
                             const SupportEstimate& est);

/// Supports from every method applicable to `sys` (flat interference uses the
/// common power; otherwise the largest and a flag).
std::vector<SupportEstimate> all_supports(const SystemParams& sys);

/// CSV: sweep_value,parameter,receiver,tau,ber,errors,bits,ci, preceded by
/// '# ' comment lines holding `header_json`.
void write_ber_csv(std::ostream& os, const std::vector<BerPoint>& points, const std::string& header_json);

}  // namespace smimo
