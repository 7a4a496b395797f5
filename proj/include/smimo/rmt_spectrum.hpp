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

#include <complex>
#include <functional>
#include <vector>

#include "smimo/numerics.hpp"
#include "smimo/system_model.hpp"

namespace smimo {

/// One class of transmitters in the fixed-point equation: `multiplicity`
/// identical terms with dimension ratio rho and power a2.
struct FixedPointTerm {
  double multiplicity = 1.0;
  double rho = 0.0;
  double a2 = 0.0;
};

/// Fixed-point parameterization of the spectrum of Y Y^H / R. The signal term
/// has rho = alpha/kappa, a2 = P T C; each interferer rho = 1/C, a2 = I_k C;
/// the white noise enters through a0^2 = W C.
struct FixedPointParams {
  double kappa = 1.0;
  double R = 1.0;
  std::vector<FixedPointTerm> terms;
  double noise_a2 = 0.0;

  /// Throws DomainError on negative weights or non-positive kappa / R.
  void validate() const;

  /// Maps a SystemParams onto fixed-point terms; equal interferer powers share a term.
  static FixedPointParams from_system(const SystemParams& sys);
  /// Noise-only law with per-entry variance W.
  static FixedPointParams noise_only(double kappa, double R, double W);

  /// Noise variance W = a0^2 / (kappa R).
  double noise_level() const { return noise_a2 / (kappa * R); }
  /// Mass of the point at zero: 1 - min(1, kappa, rank share).
  double atom_at_zero() const;
  /// Rough upper edge of the support (used to size default grids).
  double support_upper_hint() const;

  /// K(v) = sum m rho kappa a2 / (R kappa^2 rho - a2 v) + W, and its derivative.
  std::complex<double> kernel(std::complex<double> v) const;
  std::complex<double> kernel_derivative(std::complex<double> v) const;
};

struct StieltjesValue {
  std::complex<double> s;
  std::complex<double> G;
  double residual = 0.0;
  int iterations = 0;
};

/// Residual of the fixed point, g (z + u K(u g)) + 1 with u = z g + 1 - kappa.
std::complex<double> fixed_point_residual(std::complex<double> z, std::complex<double> g,
                                          const FixedPointParams& fp);

/// The map g -> -1 / (z + u K(u g)).
std::complex<double> fixed_point_map(std::complex<double> z, std::complex<double> g, const FixedPointParams& fp);

struct StieltjesOptions {
  numerics::FixedPointOptions fixed_point{};  // damping, tol, iteration budget
  double y_start = 0.0;  // 0 = automatic
};

/// Stieltjes transform of the asymptotic law of Y Y^H / R at s (Im s > 0).
/// Starts far from the real axis, where the damped iteration contracts, and
/// walks Im s down to the target with Newton / damped fixed-point steps. The
/// returned value has |residual| <= tol (1 + |s G|) and Im G > 0.
/// Throws DomainError for Im s <= 0 and SolverError on failure.
StieltjesValue stieltjes_solve(std::complex<double> s, const FixedPointParams& fp, const StieltjesOptions& opt = {});

struct SpectralDensity {
  std::vector<double> grid;
  std::vector<double> values;  // density of the continuous part
  double atom_at_zero = 0.0;

  double continuous_mass() const { return numerics::trapezoid(grid, values); }
  /// Connected ranges where values exceed `rel_threshold * max(values)`.
  std::vector<std::pair<double, double>> components(double rel_threshold = 1e-3) const;
};

/// Im G(x + j y_offset) / pi on `grid`, with the point mass at zero removed.
/// Grid points are solved concurrently on `threads` workers (0 = hardware).
SpectralDensity density_from_stieltjes(const std::vector<double>& grid, const FixedPointParams& fp,
                                       double y_offset, int threads = 0);

/// Default grid [0, 2 x upper edge hint] with `points` nodes.
std::vector<double> default_grid(const FixedPointParams& fp, int points = 4000);

/// Eigenvalues of Y Y^H / R, descending and clamped at zero.
std::vector<double> empirical_spectrum(const CMatrix& Y);

struct MpDensity {
  double kappa = 1.0;
  double scale = 1.0;
  double lower = 0.0;  // support edges, scaled
  double upper = 0.0;
  double atom = 0.0;   // 1 - kappa for kappa < 1
  double operator()(double x) const;
};

/// Marchenko-Pastur density kappa sqrt(4/kappa - (x - 1 - 1/kappa)^2) / (2 pi x) on
/// (1 +- 1/sqrt(kappa))^2, with x measured in units of `scale`. Its continuous
/// mass is min(1, kappa). Throws DomainError for kappa <= 0 or scale <= 0.
MpDensity mp_density(double kappa, double scale = 1.0);

/// T C W (1 + 1/sqrt(kappa))^2.
double noise_bulk_max_power(double T, double C, double W, double kappa);

struct SnrBounds {
  double bound1 = 0.0;  // (P/W) R / (1 + 1/sqrt(kappa))^2
  double bound2 = 0.0;  // (P/W) min(R, C) / 4
};
SnrBounds snr_lower_bound(double P, double W, double R, double C, double kappa);

/// CDF of the continuous part normalized to one, tabulated on the density grid.
std::vector<double> normalized_cdf(const SpectralDensity& d);

/// Kolmogorov distance between the empirical CDF of `samples` and a tabulated
/// CDF (linear interpolation between grid nodes).
double kolmogorov_distance(std::vector<double> samples, const std::vector<double>& grid,
                           const std::vector<double>& cdf);

}  // namespace smimo
