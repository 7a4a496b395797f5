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

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "smimo/errors.hpp"

namespace smimo {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kSpeedOfLight = 299'792'458.0;

struct RadioParams {
  double carrier_frequency = 0.0;  // Hz
  double delay_spread = 0.0;       // s
  double mobile_speed = 0.0;       // m/s
  double light_speed = kSpeedOfLight;
};

/// Channel coherence time in symbol intervals, 3 / (4 sqrt(pi) f0 tau) * c / v.
double coherence_symbols(const RadioParams& radio);

/// Cell layout and powers of the multi-cell uplink. All powers are linear.
struct SystemParams {
  int R = 0;  // receive antennas
  int T = 0;  // transmit antennas per cell
  int C = 0;  // coherence time in symbols
  int L = 0;  // neighbouring cells
  double P = 0.0;  // intracell received power
  double W = 0.0;  // noise power per entry
  std::vector<double> interference_powers;  // L*T values I_k

  /// Throws ConfigError on any violated invariant.
  void validate() const;
  /// True if some I_k exceeds P (no power-controlled handoff).
  bool handoff_violated() const;
  /// True if all I_k are equal (or there are none).
  bool flat_interference() const;
  double max_interference() const;
};

struct DerivedParams {
  double kappa = 0.0;       // C / R
  double alpha = 0.0;       // T / R
  double r = 0.0;           // 1 / (P R C)
  double t = 0.0;           // 1 / (I R C)
  double zeta = 0.0;        // W C
  double beta_ratio = 0.0;  // r / t = I / P
  double R = 0.0;           // kept so results can be rescaled to YY^H / R
  bool interference_flat = true;  // false: t was computed from max I_k
};

/// Normalized coherence time, load and the (r, t, zeta) parameterization.
/// Throws DomainError when P = 0.
DerivedParams derive_params(const SystemParams& sys);

struct InterferenceProfile {
  enum class Kind { flat, modulo };
  Kind kind = Kind::flat;
  double value = 0.0;  // I for flat, delta for modulo

  static InterferenceProfile flat(double I) { return {Kind::flat, I}; }
  static InterferenceProfile modulo(double delta) { return {Kind::modulo, delta}; }
};

/// The L*T interferer powers. The modulo profile is I_k = P (k mod T) / (delta T),
/// k = 1..L*T.
std::vector<double> interference_profile(const InterferenceProfile& profile, int T, int L, double P);

/// Deterministic per-stream generator: stream `index` of `seed` is an
/// independent mt19937_64 seeded through splitmix64.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index);

/// Circularly-symmetric complex Gaussian matrix with per-entry variance `var`.
CMatrix complex_gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, double var);

/// Haar-distributed n x n unitary.
CMatrix haar_unitary(std::mt19937_64& rng, Eigen::Index n);

struct PilotConfig {
  int tau_blocks = 1;
  CMatrix pilot_matrix;  // T x (tau*T), rows orthogonal within each block, norm^2 = T P
  bool reused_by_neighbours = true;  // neighbouring cells send the same pilots

  Eigen::Index T() const { return pilot_matrix.rows(); }
  Eigen::Index length() const { return pilot_matrix.cols(); }

  /// One block of the scaled T-point DFT, shared by all cells.
  static PilotConfig orthogonal(int T, double P);
  /// tau independent Haar unitaries scaled by sqrt(T P); every cell draws its own.
  static PilotConfig random(int T, int tau, double P, std::mt19937_64& rng);
};

enum class DataLaw { gaussian, qpsk };

/// One coherence block of the multi-cell uplink.
struct ChannelRealization {
  CMatrix H;      // R x T, unit variance
  CMatrix X;      // T x C, pilots in the first tau*T columns
  CMatrix H_I;    // R x (L T), column k variance I_k / P
  CMatrix X_I;    // (L T) x C, power P
  CMatrix noise;  // R x C, variance W
  PilotConfig pilots;
  std::uint64_t seed = 0;

  Eigen::Index pilot_columns() const { return pilots.length(); }
  Eigen::Index data_columns() const { return X.cols() - pilots.length(); }
};

/// QPSK point of power P for the Gray-mapped bit pair (b0 -> real sign, b1 -> imag sign).
cd qpsk_symbol(bool b0, bool b1, double P);

/// Draws one block. Throws ConfigError when tau*T > C or the pilot matrix
/// does not match T.
ChannelRealization sample_realization(const SystemParams& sys, const PilotConfig& pilots,
                                      std::uint64_t seed, DataLaw data_law);

/// Y = H X + H_I X_I + noise.
CMatrix assemble_received(const ChannelRealization& rz);

}  // namespace smimo
