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

#include "smimo/system_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace smimo {

double coherence_symbols(const RadioParams& radio) {
  if (!(radio.carrier_frequency > 0.0 && radio.delay_spread > 0.0 && radio.mobile_speed > 0.0 &&
        radio.light_speed > 0.0)) {
    throw DomainError("coherence_symbols: all radio parameters must be positive");
  }
  return 3.0 / (4.0 * std::sqrt(std::numbers::pi) * radio.carrier_frequency * radio.delay_spread) *
         radio.light_speed / radio.mobile_speed;
}

void SystemParams::validate() const {
  if (R < 1 || T < 1 || C < 1) throw ConfigError("R, T and C must be at least 1");
  if (L < 0) throw ConfigError("L must be non-negative");
  if (!(P >= 0.0) || !(W >= 0.0)) throw ConfigError("P and W must be non-negative");
  if (interference_powers.size() != static_cast<std::size_t>(L) * static_cast<std::size_t>(T)) {
    throw ConfigError("interference_powers must hold L*T = " + std::to_string(L * T) + " values, got " +
                      std::to_string(interference_powers.size()));
  }
  for (double I : interference_powers) {
    if (!(I >= 0.0)) throw ConfigError("interference powers must be non-negative");
  }
}

bool SystemParams::handoff_violated() const {
  return std::any_of(interference_powers.begin(), interference_powers.end(), [&](double I) { return I > P; });
}

bool SystemParams::flat_interference() const {
  return std::adjacent_find(interference_powers.begin(), interference_powers.end(), std::not_equal_to<>()) ==
         interference_powers.end();
}

double SystemParams::max_interference() const {
  return interference_powers.empty() ? 0.0
                                     : *std::max_element(interference_powers.begin(), interference_powers.end());
}

DerivedParams derive_params(const SystemParams& sys) {
  sys.validate();
  if (!(sys.P > 0.0)) throw DomainError("derive_params: r = 1/(P R C) needs P > 0");
  const double R = sys.R;
  const double C = sys.C;
  DerivedParams dp;
  dp.kappa = C / R;
  dp.alpha = static_cast<double>(sys.T) / R;
  dp.r = 1.0 / (sys.P * R * C);
  const double I = sys.max_interference();
  dp.t = I > 0.0 ? 1.0 / (I * R * C) : std::numeric_limits<double>::infinity();
  dp.zeta = sys.W * C;
  dp.beta_ratio = I / sys.P;
  dp.R = R;
  dp.interference_flat = sys.flat_interference();
  return dp;
}

std::vector<double> interference_profile(const InterferenceProfile& profile, int T, int L, double P) {
  const std::size_t n = static_cast<std::size_t>(T) * static_cast<std::size_t>(std::max(L, 0));
  std::vector<double> out(n);
  if (profile.kind == InterferenceProfile::Kind::flat) {
    if (!(profile.value >= 0.0)) throw DomainError("flat interference power must be non-negative");
    std::fill(out.begin(), out.end(), profile.value);
    return out;
  }
  if (!(profile.value > 0.0)) throw DomainError("modulo profile needs delta > 0");
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<long long>(i + 1);
    out[i] = P * static_cast<double>(k % T) / (profile.value * T);
  }
  return out;
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(seed) ^ mix(index + 0x632be59bd9b4e019ULL));
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(stream_seed(seed, index));
}

CMatrix complex_gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, double var) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const double s = std::sqrt(var / 2.0);
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = nd(rng);
      const double im = nd(rng);
      m(i, j) = cd(s * re, s * im);
    }
  }
  return m;
}

CMatrix haar_unitary(std::mt19937_64& rng, Eigen::Index n) {
  const CMatrix z = complex_gaussian(rng, n, n, 1.0);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity of QR so that the distribution is Haar.
  for (Eigen::Index j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

PilotConfig PilotConfig::orthogonal(int T, double P) {
  if (T < 1) throw ConfigError("pilot dimension T must be at least 1");
  PilotConfig pc;
  pc.tau_blocks = 1;
  pc.reused_by_neighbours = true;
  pc.pilot_matrix.resize(T, T);
  const double amp = std::sqrt(P);
  for (int i = 0; i < T; ++i) {
    for (int j = 0; j < T; ++j) {
      pc.pilot_matrix(i, j) = amp * std::polar(1.0, -2.0 * std::numbers::pi * i * j / T);
    }
  }
  return pc;
}

PilotConfig PilotConfig::random(int T, int tau, double P, std::mt19937_64& rng) {
  if (T < 1 || tau < 1) throw ConfigError("pilot dimensions must be at least 1");
  PilotConfig pc;
  pc.tau_blocks = tau;
  pc.reused_by_neighbours = false;
  pc.pilot_matrix.resize(T, static_cast<Eigen::Index>(tau) * T);
  const double amp = std::sqrt(static_cast<double>(T) * P);
  for (int b = 0; b < tau; ++b) {
    pc.pilot_matrix.middleCols(static_cast<Eigen::Index>(b) * T, T) = amp * haar_unitary(rng, T);
  }
  return pc;
}

cd qpsk_symbol(bool b0, bool b1, double P) {
  const double a = std::sqrt(P / 2.0);
  return {b0 ? -a : a, b1 ? -a : a};
}

namespace {

void fill_data(std::mt19937_64& rng, CMatrix& x, Eigen::Index first_col, double P, DataLaw law) {
  if (law == DataLaw::gaussian) {
    x.rightCols(x.cols() - first_col) = complex_gaussian(rng, x.rows(), x.cols() - first_col, P);
    return;
  }
  std::bernoulli_distribution bit(0.5);
  for (Eigen::Index j = first_col; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const bool b0 = bit(rng);
      const bool b1 = bit(rng);
      x(i, j) = qpsk_symbol(b0, b1, P);
    }
  }
}

}  // namespace

ChannelRealization sample_realization(const SystemParams& sys, const PilotConfig& pilots, std::uint64_t seed,
                                      DataLaw data_law) {
  sys.validate();
  if (pilots.T() != sys.T) throw ConfigError("pilot matrix must have T rows");
  if (pilots.length() > sys.C) throw ConfigError("pilot blocks (tau*T) do not fit in the coherence time C");

  auto rng = make_stream(seed, 0);
  const Eigen::Index R = sys.R, T = sys.T, C = sys.C, LT = static_cast<Eigen::Index>(sys.L) * sys.T;
  const Eigen::Index np = pilots.length();

  ChannelRealization rz;
  rz.seed = seed;
  rz.pilots = pilots;

  rz.H = complex_gaussian(rng, R, T, 1.0);
  rz.X.resize(T, C);
  rz.X.leftCols(np) = pilots.pilot_matrix;
  fill_data(rng, rz.X, np, sys.P, data_law);

  rz.H_I = complex_gaussian(rng, R, LT, 1.0);
  for (Eigen::Index k = 0; k < LT; ++k) {
    const double v = sys.P > 0.0 ? sys.interference_powers[static_cast<std::size_t>(k)] / sys.P : 0.0;
    rz.H_I.col(k) *= std::sqrt(v);
  }
  rz.X_I.resize(LT, C);
  for (int cell = 0; cell < sys.L; ++cell) {
    const Eigen::Index row = static_cast<Eigen::Index>(cell) * T;
    if (pilots.reused_by_neighbours) {
      rz.X_I.block(row, 0, T, np) = pilots.pilot_matrix;
    } else {
      const double amp = std::sqrt(static_cast<double>(T) * sys.P);
      for (int b = 0; b < pilots.tau_blocks; ++b) {
        rz.X_I.block(row, static_cast<Eigen::Index>(b) * T, T, T) = amp * haar_unitary(rng, T);
      }
    }
  }
  fill_data(rng, rz.X_I, np, sys.P, data_law);

  rz.noise = complex_gaussian(rng, R, C, sys.W);
  return rz;
}

CMatrix assemble_received(const ChannelRealization& rz) {
  if (rz.H.cols() != rz.X.rows() || rz.H_I.cols() != rz.X_I.rows() || rz.H.rows() != rz.H_I.rows() ||
      rz.X.cols() != rz.X_I.cols() || rz.noise.rows() != rz.H.rows() || rz.noise.cols() != rz.X.cols()) {
    throw ConfigError("assemble_received: dimension mismatch");
  }
  CMatrix y = rz.H * rz.X;
  if (rz.H_I.cols() > 0) y.noalias() += rz.H_I * rz.X_I;
  y += rz.noise;
  return y;
}

}  // namespace smimo
