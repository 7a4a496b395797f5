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

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "smimo/system_model.hpp"

namespace smimo {

struct BulkInterval {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double x) const { return x >= lower && x <= upper; }
  double width() const { return upper - lower; }
};

enum class SupportMethod { unilateral, bilateral_highsnr_1, bilateral_highsnr_2, bilateral_general };
std::string to_string(SupportMethod m);

/// Approximate signal and interference bulks of Y Y^H / R.
struct SupportEstimate {
  BulkInterval signal;
  BulkInterval interference;
  SupportMethod method = SupportMethod::unilateral;
  std::string variant;     // distinguishes estimates sharing a method ("rho_zeros", "enclosure")
  bool valid = true;       // false: no usable intervals (see flags); intervals may still hold diagnostics
  bool separable = false;  // valid and signal.lower > interference.upper
  std::vector<std::string> flags;

  bool has_flag(const std::string& f) const;
};

/// Real value with a warning bit (pole proximity, complex branch).
struct FlaggedValue {
  double value = 0.0;
  bool flagged = false;
};

struct ScaleFactors {
  double n_P = 1.0;
  double n_I = 1.0;
  double i_P = 1.0;
  double i_I = 1.0;
};

// ---- unilateral ----------------------------------------------------------

/// Intervals of the isolated signal and interference spectra in units of
/// Y Y^H / (T R): centre kappa P / alpha, half-width 2 P sqrt((kappa^2 + kappa) / alpha),
/// with an extra L under the root for the interference. Negative lower ends are
/// clamped at zero and flagged. `flags` may be null.
std::pair<BulkInterval, BulkInterval> unilateral_intervals(const DerivedParams& dp, double P, double I, int L,
                                                           std::vector<std::string>* flags = nullptr);

/// n_P = (1 + W/(P R))(1 + W/(P C)) and the same with I.
std::pair<double, double> noise_scale_factors(double P, double I, double W, double R, double C);

/// i_P = (1 + (L alpha/kappa)/(P/I - 1))(1 + L alpha/(P/I - 1)) and
/// i_I = (1 + (alpha/kappa)/(I/P - 1))(1 + alpha/(I/P - 1)). Throws DomainError for P = I.
std::pair<double, double> interference_scale_factors(double P, double I, double alpha, double kappa, int L);

/// Scaled unilateral intervals, reported in Y Y^H / R units.
SupportEstimate unilateral_supports(const DerivedParams& dp, double P, double I, double W, int L);

struct UnilateralVerdict {
  bool separable = false;  // at the I/P of `dp`
  double threshold = 0.0;  // boundary I/P
};

/// Solves the threshold inequality for the boundary I/P by scanning (0, 1) on a
/// 1/1000 grid and bisecting the first separable -> non-separable transition to
/// 1e-4. Throws RegimeError when 1 - 2 sqrt(alpha (1 + 1/kappa)) <= 0.
UnilateralVerdict unilateral_separable(const DerivedParams& dp, double P, double W, int L);

// ---- bilateral, high SNR -------------------------------------------------

/// First-order inverse Stieltjes transform (unnormalized Y Y^H units).
/// Flagged within relative distance 1e-6 of a pole.
FlaggedValue s1_inverse(double G, const DerivedParams& dp, int L);

struct QuarticExtremes {
  std::array<double, 4> G{};  // ascending, meaningful only if all_real
  bool all_real = false;
  bool degenerate = false;  // two middle roots closer than 1e-6 relative
};

/// Real roots of the quartic whose solutions are the extremes of s1_inverse.
QuarticExtremes quartic_extremes(const DerivedParams& dp, int L);

/// Poles G_-inf <= G_+inf of the first-order inverse.
std::pair<double, double> first_order_poles(const DerivedParams& dp, int L);

/// phi0(G) and the signed rho0(G); `rho_radicand` is the bracketed quartic.
double phi0(double G, const DerivedParams& dp, int L);
double rho0_radicand(double G, const DerivedParams& dp, int L);
/// rho0 with a flag when the radicand is negative (value then 0).
FlaggedValue rho0(double G, const DerivedParams& dp, int L);

/// Second-order inverse: phi0 + rho0 between the poles, phi0 - rho0 elsewhere.
FlaggedValue s2_inverse_highsnr(double G, const DerivedParams& dp, int L);

/// [s1(G3), s1(G4)] and [s1(G1), s1(G2)] from the quartic extremes.
SupportEstimate first_order_supports(const DerivedParams& dp, int L);

struct HighSnrSupports {
  SupportEstimate rho_zeros;  // [phi0(G3), phi0(G4)], [phi0(G1), phi0(G2)]
  SupportEstimate enclosure;  // closed-form enclosures
};

/// Second-order supports at W = 0: the intervals bounded by the zeros of rho0
/// and the closed-form enclosures of the signal and interference bulks.
HighSnrSupports bilateral_supports_highsnr(const DerivedParams& dp, int L);

/// Endpoints of the closed-form enclosures: signal branch values G_Pl, G_Pu and
/// interference G_Il, G_Iu, with the noise term zeta (zeta = 0 is the high-SNR case).
struct EnclosureRoots {
  double G_Pl = 0.0, G_Pu = 0.0, G_Il = 0.0, G_Iu = 0.0;
  bool signal_real = true;
  bool interference_real = true;
};
EnclosureRoots enclosure_roots(const DerivedParams& dp, int L, double zeta);

/// Second-order local inverses around the signal and interference spikes.
double signal_local_inverse(double G, const DerivedParams& dp, int L, double zeta);
double interference_local_inverse(double G, const DerivedParams& dp, int L, double zeta);

/// Largest admissible alpha/kappa for I/P = beta; 0 for beta >= 1.
/// Throws DomainError for beta < 0 or L < 1.
double separability_boundary(double beta, int L);

/// The beta at which separability_boundary(beta, L) equals `alpha_over_kappa`,
/// by bisection to 1e-4 (the function is decreasing in beta).
double separability_threshold(double alpha_over_kappa, int L);

/// 0 <= alpha/kappa <= (t - r)^2 / (r (t + (L - 1) r)).
bool bilateral_validity(const DerivedParams& dp, int L);

// ---- bilateral, general SNR ----------------------------------------------

/// Enclosures of the signal and interference bulks for noise zeta = W C.
SupportEstimate bilateral_supports_general(const DerivedParams& dp, int L, double zeta);

// ---- eigenvalue repulsion ------------------------------------------------

struct RepulsionReport {
  double G4 = 0.0;
  double s0_at_G4 = 0.0;      // explicit inverse at G4, branch closest to the closed form
  double s0_closed = 0.0;     // closed form (t - r + b r/kappa)(t - r + b r) / (r (t - r)^2)
  double ratio = 0.0;         // s0(G4) / s0(G4)|b=0
  double ratio_formula = 0.0; // (1 + (b/kappa)/(t/r - 1))(1 + b/(t/r - 1))
  double i_P = 0.0;           // interference_scale_factors at P/I = t/r with L alpha = b
  bool minus_branch = true;   // the minus-root branch reproduced the closed form
};

/// Checks the interference scale factor through the explicit alpha = 0 inverse,
/// with interference dimension ratio b (b = L alpha).
RepulsionReport appendixB_scale_verification(const DerivedParams& dp, int L);

/// Noise limit t, b -> infinity with zeta = b/t fixed: (1 + r zeta)(1 + r zeta/kappa).
double noise_repulsion_factor(double r, double zeta, double kappa);

}  // namespace smimo
