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

#include "smimo/bulk_support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smimo/numerics.hpp"

namespace smimo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_interference(const DerivedParams& dp) {
  if (!std::isfinite(dp.t) || !(dp.r > 0.0)) throw DomainError("bilateral formulas need 0 < I and P > 0");
}

SupportEstimate make_estimate(SupportMethod m, BulkInterval sig, BulkInterval intf, std::vector<std::string> flags) {
  SupportEstimate e;
  e.method = m;
  e.signal = sig;
  e.interference = intf;
  e.flags = std::move(flags);
  e.valid = std::isfinite(sig.lower) && std::isfinite(sig.upper) && std::isfinite(intf.lower) &&
            std::isfinite(intf.upper);
  if (e.valid && (sig.lower > sig.upper || intf.lower > intf.upper)) {
    e.valid = false;
    e.flags.push_back("inverted_interval");
  }
  e.separable = e.valid && e.signal.lower > e.interference.upper;
  return e;
}

SupportEstimate invalid_estimate(SupportMethod m, std::string flag) {
  SupportEstimate e;
  e.method = m;
  e.signal = {kNaN, kNaN};
  e.interference = {kNaN, kNaN};
  e.valid = false;
  e.separable = false;
  e.flags.push_back(std::move(flag));
  return e;
}

// Ascending real roots of a quartic, or all_real = false.
numerics::RealRoots quartic_roots(double c0, double c1, double c2, double c3, double c4) {
  return numerics::real_roots(numerics::poly_roots(numerics::Polynomial({c0, c1, c2, c3, c4})));
}

// High-SNR local inverses and their extremes, written out separately from the
// general-SNR versions so the two can be cross-checked at zeta = 0.
double signal_local_inverse_highsnr(double x, double a, double k, double r, double t, double L) {
  const double d = ((1.0 + L) * a - k) * x + k * (t - 2.0 * r);
  return (2.0 * a * k * (L + 1.0) - 2.0 * a * (L + 1.0) + 2.0 * k * (1.0 - k)) / (2.0 * d) +
         (k * (k * (t - 5.0 * r) + a * (t + L * r) + 4.0 * r - 2.0 * t) * x + k * k * r * (t - 3.0 * r)) /
             (2.0 * x * x * d);
}

double interference_local_inverse_highsnr(double x, double a, double k, double r, double t, double L) {
  const double d = (a * (L + 1.0) - k) * x - k * (2.0 * t - r);
  return (2.0 * a * k * (L + 1.0) - 2.0 * k * (k - 1.0) - 2.0 * a * (L + 1.0)) / (2.0 * d) +
         (k * ((4.0 - 5.0 * k) * t + (k - 2.0) * r + a * (t + L * r)) * x + k * k * t * (r - 3.0 * t)) /
             (2.0 * x * x * d);
}

}  // namespace

std::string to_string(SupportMethod m) {
  switch (m) {
    case SupportMethod::unilateral: return "unilateral";
    case SupportMethod::bilateral_highsnr_1: return "bilateral_highSNR_1";
    case SupportMethod::bilateral_highsnr_2: return "bilateral_highSNR_2";
    case SupportMethod::bilateral_general: return "bilateral_general";
  }
  return "unknown";
}

bool SupportEstimate::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

// ---- unilateral ----------------------------------------------------------

std::pair<BulkInterval, BulkInterval> unilateral_intervals(const DerivedParams& dp, double P, double I, int L,
                                                           std::vector<std::string>* flags) {
  if (!(dp.alpha > 0.0 && dp.kappa > 0.0) || L < 0 || !(P >= 0.0) || !(I >= 0.0)) {
    throw DomainError("unilateral_intervals: need alpha, kappa > 0 and non-negative powers");
  }
  const double k = dp.kappa, a = dp.alpha;
  const double spread = std::sqrt((k * k + k) / a);
  BulkInterval sig{k * P / a - 2.0 * P * spread, k * P / a + 2.0 * P * spread};
  BulkInterval intf{k * I / a - 2.0 * I * std::sqrt(static_cast<double>(L)) * spread,
                    k * I / a + 2.0 * I * std::sqrt(static_cast<double>(L)) * spread};
  bool clamped = false;
  for (BulkInterval* b : {&sig, &intf}) {
    if (b->lower < 0.0) {
      b->lower = 0.0;
      clamped = true;
    }
  }
  if (flags) {
    if (clamped) flags->push_back("clamped_lower");
    if (a > 0.1) flags->push_back("alpha_above_0.1");
  }
  return {sig, intf};
}

std::pair<double, double> noise_scale_factors(double P, double I, double W, double R, double C) {
  if (!(P > 0.0 && I > 0.0) || !(W >= 0.0) || !(R > 0.0 && C > 0.0)) {
    throw DomainError("noise_scale_factors: need P, I, R, C > 0 and W >= 0");
  }
  return {(1.0 + W / (P * R)) * (1.0 + W / (P * C)), (1.0 + W / (I * R)) * (1.0 + W / (I * C))};
}

std::pair<double, double> interference_scale_factors(double P, double I, double alpha, double kappa, int L) {
  if (P == I) throw DomainError("interference_scale_factors: singular at P = I");
  if (!(P > 0.0 && I > 0.0 && kappa > 0.0) || !(alpha >= 0.0)) {
    throw DomainError("interference_scale_factors: need positive powers and kappa");
  }
  const double pi = P / I - 1.0;
  const double ip = I / P - 1.0;
  return {(1.0 + (L * alpha / kappa) / pi) * (1.0 + L * alpha / pi),
          (1.0 + (alpha / kappa) / ip) * (1.0 + alpha / ip)};
}

SupportEstimate unilateral_supports(const DerivedParams& dp, double P, double I, double W, int L) {
  std::vector<std::string> flags;
  auto [sig, intf] = unilateral_intervals(dp, P, I, L, &flags);
  const double T = dp.alpha * dp.R;
  const double C = dp.kappa * dp.R;
  if (I > 0.0) {
    const auto [nP, nI] = noise_scale_factors(P, I, W, dp.R, C);
    const auto [iP, iI] = interference_scale_factors(P, I, dp.alpha, dp.kappa, L);
    sig = {sig.lower * nP * iP * T, sig.upper * nP * iP * T};
    intf = {intf.lower * nI * iI * T, intf.upper * nI * iI * T};
    if (P / I < 2.0) flags.push_back("p_over_i_below_2");
  } else {
    const double nP = (1.0 + W / (P * dp.R)) * (1.0 + W / (P * C));
    sig = {sig.lower * nP * T, sig.upper * nP * T};
    intf = {0.0, 0.0};
  }
  return make_estimate(SupportMethod::unilateral, sig, intf, std::move(flags));
}

UnilateralVerdict unilateral_separable(const DerivedParams& dp, double P, double W, int L) {
  const double k = dp.kappa, a = dp.alpha;
  const double denom = 1.0 - 2.0 * std::sqrt(a * (1.0 + 1.0 / k));
  if (denom <= 0.0) throw RegimeError("unilateral_separable: 1 - 2 sqrt(alpha (1 + 1/kappa)) <= 0");
  const double spread = (1.0 + 2.0 * std::sqrt(a * L * (1.0 + 1.0 / k))) / denom;
  const double C = k * dp.R;

  // margin(x) > 0  <=>  separable at I/P = x
  auto margin = [&](double x) {
    const double I = x * P;
    const auto [nP, nI] = noise_scale_factors(P, I, W, dp.R, C);
    const auto [iP, iI] = interference_scale_factors(P, I, a, k, L);
    return 1.0 / x - (nI * iI) / (nP * iP) * spread;
  };

  constexpr int steps = 1000;
  UnilateralVerdict out;
  bool seen_separable = false;
  out.threshold = 0.0;
  bool found = false;
  for (int i = 1; i < steps; ++i) {
    const double x = static_cast<double>(i) / steps;
    const bool sep = margin(x) > 0.0;
    if (sep) {
      seen_separable = true;
    } else if (seen_separable) {
      out.threshold = numerics::bisect(margin, static_cast<double>(i - 1) / steps, x, 1e-10);
      found = true;
      break;
    }
  }
  if (!found && seen_separable) out.threshold = 1.0;
  out.separable = dp.beta_ratio < out.threshold;
  return out;
}

// ---- bilateral, high SNR -------------------------------------------------

FlaggedValue s1_inverse(double G, const DerivedParams& dp, int L) {
  require_interference(dp);
  const double k = dp.kappa, a = dp.alpha, r = dp.r, t = dp.t;
  const bool near_zero = std::abs(G) <= 1e-12 * std::max(r, t);
  if (a == 0.0) return FlaggedValue{-1.0 / G, near_zero};
  const double num = (((L + 1) * (k - 2.0) * a - k) * G + ((L * r + t) * (k - 1.0) * a - k * (r + t))) * G - k * r * t;
  const double q2 = (k + 2.0 * (L + 1) * a) * G * G;
  const double q1 = ((L * r + t) * a + k * (r + t)) * G;
  const double q0 = k * r * t;
  const double den = G * (q2 + q1 + q0);
  const double scale = std::abs(G) * (std::abs(q2) + std::abs(q1) + std::abs(q0));
  FlaggedValue out;
  out.value = num / den;
  out.flagged = !(std::abs(den) > 1e-6 * scale) || near_zero;
  return out;
}

QuarticExtremes quartic_extremes(const DerivedParams& dp, int L) {
  require_interference(dp);
  const double k = dp.kappa, a = dp.alpha, r = dp.r, t = dp.t;
  const double Lr_t = L * r + t;
  const double c4 = 2.0 * (L + 1) * (L + 1) * (k - 2.0) * a * a + (L + 1) * (k - 4.0) * k * a - k * k;
  const double c3 = 2.0 * (2.0 * Lr_t * (L + 1) * (k - 1.0) * a * a +
                           (Lr_t * (k - 1.0) - 2.0 * (L + 1) * (t + r)) * a * k - (t + r) * k * k);
  const double c2 = Lr_t * Lr_t * (k - 1.0) * a * a + (t * t + L * r * r) * (k - 2.0) * k * a -
                    6.0 * (L + 1) * r * t * k * a - ((t + r) * (t + r) + 2.0 * r * t) * k * k;
  const double c1 = -2.0 * r * t * k * (Lr_t * a + (t + r) * k);
  const double c0 = -k * k * r * r * t * t;
  const auto rr = quartic_roots(c0, c1, c2, c3, c4);
  QuarticExtremes out;
  out.all_real = rr.all_real && rr.roots.size() == 4;
  if (out.all_real) {
    std::copy(rr.roots.begin(), rr.roots.end(), out.G.begin());
    const double span = std::max(std::abs(out.G[1]), std::abs(out.G[2]));
    out.degenerate = std::abs(out.G[2] - out.G[1]) <= 1e-6 * span;
  }
  return out;
}

std::pair<double, double> first_order_poles(const DerivedParams& dp, int L) {
  require_interference(dp);
  const double k = dp.kappa, a = dp.alpha, r = dp.r, t = dp.t;
  const double b = k * (r + t) + a * (t + L * r);
  const double disc = k * k * (r - t) * (r - t) + 2.0 * a * k * (L * r * r + t * t - 3.0 * r * t - 3.0 * L * t * r) +
                      a * a * (t + L * r) * (t + L * r);
  const double d = -2.0 * k - 4.0 * a - 4.0 * L * a;
  const double sq = std::sqrt(std::max(disc, 0.0));
  const double g_minus = (b - sq) / d;
  const double g_plus = (b + sq) / d;
  return {std::min(g_minus, g_plus), std::max(g_minus, g_plus)};
}

double phi0(double G, const DerivedParams& dp, int L) {
  require_interference(dp);
  const double k = dp.kappa, a = dp.alpha, r = dp.r, t = dp.t;
  const double num = (2.0 * a * (L + 1) * (k - 1.0) + k * (k - 4.0)) * G * G +
                     k * (a * (t + L * r) + (k - 2.0) * (t + r)) * G + k * k * r * t;
  return num / (2.0 * G * G * ((2.0 * k + (L + 1) * a) * G + k * (t + r)));
}

double rho0_radicand(double G, const DerivedParams& dp, int L) {
  require_interference(dp);
  const double k = dp.kappa, a = dp.alpha, r = dp.r, t = dp.t;
  const double q4 = k * (k - 4.0 * a * (L + 1));
  const double q3 = 2.0 * k * (k * (t + r) - 3.0 * a * (L * r + t));
  const double q2 = (t * t + 4.0 * r * t + r * r) * k * k - 2.0 * a * k * (L * r - t) * (r - t) +
                    a * a * (t + L * r) * (t + L * r);
  const double q1 = 2.0 * k * r * t * (k * (t + r) + a * (t + L * r));
  const double q0 = k * k * t * t * r * r;
  return (((q4 * G + q3) * G + q2) * G + q1) * G + q0;
}

FlaggedValue rho0(double G, const DerivedParams& dp, int L) {
  const double k = dp.kappa, a = dp.alpha, r = dp.r, t = dp.t;
  const double q = rho0_radicand(G, dp, L);
  FlaggedValue out;
  out.flagged = q < 0.0;
  const double den = 2.0 * G * G * ((2.0 * k + (L + 1) * a) * G + k * (t + r));
  out.value = out.flagged ? 0.0 : k * std::sqrt(q) / den;
  return out;
}

FlaggedValue s2_inverse_highsnr(double G, const DerivedParams& dp, int L) {
  const auto [lo, hi] = first_order_poles(dp, L);
  const FlaggedValue rho = rho0(G, dp, L);
  const double phi = phi0(G, dp, L);
  const bool inside = G >= lo && G <= hi;
  return {inside ? phi + rho.value : phi - rho.value, rho.flagged};
}

SupportEstimate first_order_supports(const DerivedParams& dp, int L) {
  const QuarticExtremes q = quartic_extremes(dp, L);
  if (!q.all_real) return invalid_estimate(SupportMethod::bilateral_highsnr_1, "complex_extremes");
  const double R = dp.R;
  std::array<double, 4> s{};
  bool pole = false;
  for (int i = 0; i < 4; ++i) {
    const FlaggedValue v = s1_inverse(q.G[static_cast<std::size_t>(i)], dp, L);
    s[static_cast<std::size_t>(i)] = v.value / R;
    pole = pole || v.flagged;
  }
  std::vector<std::string> flags;
  if (q.degenerate) flags.push_back("degenerate_extremes");
  if (pole) flags.push_back("pole_proximity");
  if (!(s[1] < s[2])) {
    auto e = invalid_estimate(SupportMethod::bilateral_highsnr_1, "bulks_merged");
    e.flags.insert(e.flags.end(), flags.begin(), flags.end());
    return e;
  }
  return make_estimate(SupportMethod::bilateral_highsnr_1, {s[2], s[3]}, {s[0], s[1]}, std::move(flags));
}

EnclosureRoots enclosure_roots(const DerivedParams& dp, int L, double zeta) {
  require_interference(dp);
  if (!(zeta >= 0.0)) throw DomainError("enclosure_roots: zeta must be non-negative");
  const double k = dp.kappa, a = dp.alpha, r = dp.r, t = dp.t, z = zeta;
  EnclosureRoots out;

  const double radP = a * k * (t - r) * (t - r) - a * a * r * (t + (L - 1) * r);
  const double dP = std::pow(r * (t - r) * z + (a - k) * t + (a * L + k) * r, 2) +
                    4.0 * r * z * ((a + k) * r * r - (a + 2.0 * k) * t * r + k * t * t) + 4.0 * a * k * L * r * (t - r);
  const double bP = z * r * (t - r) + k * (t - r) + a * (t + (L - 2) * r);
  out.signal_real = radP >= 0.0;
  const double sqP = std::sqrt(std::max(radP, 0.0));
  out.G_Pl = -k * r * (t - r) * (bP + 2.0 * sqP) / dP;
  out.G_Pu = -k * r * (t - r) * (bP - 2.0 * sqP) / dP;

  const double radI = a * k * L * (t - r) * (t - r) + a * a * L * t * ((L - 1) * t - L * r);
  const double dI = std::pow(a * t + L * a * r - t * k + r * k + t * (t - r) * z, 2) +
                    4.0 * (t - r) * (t * ((k + a * L - a) * t - (a * L + k) * r) * z + a * k * L * r);
  const double bI = k * (t - r) + a * (2 * L - 1) * t - a * L * r + t * (t - r) * z;
  out.interference_real = radI >= 0.0;
  const double sqI = std::sqrt(std::max(radI, 0.0));
  out.G_Il = -k * t * (t - r) * (bI + 2.0 * sqI) / dI;
  out.G_Iu = -k * t * (t - r) * (bI - 2.0 * sqI) / dI;
  return out;
}

double signal_local_inverse(double x, const DerivedParams& dp, int L, double zeta) {
  require_interference(dp);
  const double k = dp.kappa, a = dp.alpha, r = dp.r, t = dp.t, z = zeta;
  const double d = ((1 + L) * a - k + z * (t - 2.0 * r)) * x + k * (t - 2.0 * r);
  return (a * k * (L + 1) - a * (L + 1) + k * (1.0 - k) + z * (k - 1.0) * (t - 2.0 * r)) / d +
         k / (2.0 * x * x) *
             ((k * (t - 5.0 * r) + a * (t + L * r) + 4.0 * r - 2.0 * t + z * r * (t - 3.0 * r)) * x +
              k * r * (t - 3.0 * r)) /
             d;
}

double interference_local_inverse(double x, const DerivedParams& dp, int L, double zeta) {
  require_interference(dp);
  const double k = dp.kappa, a = dp.alpha, r = dp.r, t = dp.t, z = zeta;
  const double d = (a * (L + 1) - k - z * (2.0 * t - r)) * x - k * (2.0 * t - r);
  return (a * k * (L + 1) - k * (k - 1.0) - a * (L + 1) - (k - 1.0) * (2.0 * t - r) * z) / d +
         (k * ((4.0 - 5.0 * k) * t + (k - 2.0) * r + a * (t + L * r) - z * t * (3.0 * t - r)) * x +
          k * k * t * (r - 3.0 * t)) /
             (2.0 * x * x * d);
}

HighSnrSupports bilateral_supports_highsnr(const DerivedParams& dp, int L) {
  require_interference(dp);
  const double k = dp.kappa, a = dp.alpha, r = dp.r, t = dp.t, R = dp.R;
  HighSnrSupports out;

  // Zeros of rho0.
  {
    const double q4 = k * (k - 4.0 * a * (L + 1));
    const double q3 = 2.0 * k * (k * (t + r) - 3.0 * a * (L * r + t));
    const double q2 = (t * t + 4.0 * r * t + r * r) * k * k - 2.0 * a * k * (L * r - t) * (r - t) +
                      a * a * (t + L * r) * (t + L * r);
    const double q1 = 2.0 * k * r * t * (k * (t + r) + a * (t + L * r));
    const double q0 = k * k * t * t * r * r;
    const auto rr = quartic_roots(q0, q1, q2, q3, q4);
    if (!(rr.all_real && rr.roots.size() == 4)) {
      out.rho_zeros = invalid_estimate(SupportMethod::bilateral_highsnr_2, "complex_extremes");
    } else {
      std::array<double, 4> s{};
      for (std::size_t i = 0; i < 4; ++i) s[i] = phi0(rr.roots[i], dp, L) / R;
      if (!(s[1] < s[2])) {
        out.rho_zeros = invalid_estimate(SupportMethod::bilateral_highsnr_2, "bulks_merged");
      } else {
        out.rho_zeros = make_estimate(SupportMethod::bilateral_highsnr_2, {s[2], s[3]}, {s[0], s[1]}, {});
      }
    }
  }

  // Closed-form enclosures.
  {
    const double D = std::pow(a * t + a * L * r - k * t + k * r, 2) + 4.0 * a * k * L * r * (t - r);
    const double radP = a * k * (t - r) * (t - r) - a * a * r * (t + (L - 1) * r);
    const double radI = a * k * L * (t - r) * (t - r) + a * a * L * t * ((L - 1) * t - L * r);
    if (radP < 0.0 || radI < 0.0 || !(t > r)) {
      out.enclosure = invalid_estimate(SupportMethod::bilateral_highsnr_2, "bulks_merged");
    } else {
      const double bP = k * (t - r) + a * (t + (L - 2) * r);
      const double bI = k * (t - r) + a * ((2 * L - 1) * t - L * r);
      const double GPl = -k * r * (t - r) * (bP + 2.0 * std::sqrt(radP)) / D;
      const double GPu = -k * r * (t - r) * (bP - 2.0 * std::sqrt(radP)) / D;
      const double GIl = -k * t * (t - r) * (bI + 2.0 * std::sqrt(radI)) / D;
      const double GIu = -k * t * (t - r) * (bI - 2.0 * std::sqrt(radI)) / D;
      const BulkInterval sig{signal_local_inverse_highsnr(GPl, a, k, r, t, L) / R,
                             signal_local_inverse_highsnr(GPu, a, k, r, t, L) / R};
      const BulkInterval intf{interference_local_inverse_highsnr(GIl, a, k, r, t, L) / R,
                              interference_local_inverse_highsnr(GIu, a, k, r, t, L) / R};
      std::vector<std::string> flags;
      if (!bilateral_validity(dp, L)) flags.push_back("outside_validity");
      out.enclosure = make_estimate(SupportMethod::bilateral_highsnr_2, sig, intf, std::move(flags));
    }
  }
  out.rho_zeros.variant = "rho_zeros";
  out.enclosure.variant = "enclosure";
  return out;
}

double separability_boundary(double beta, int L) {
  if (!(beta >= 0.0)) throw DomainError("separability_boundary: beta must be non-negative");
  if (L < 1) throw DomainError("separability_boundary: L must be at least 1");
  if (beta >= 1.0) return 0.0;
  const double b = beta;
  const double num = (1.0 - b) * (1.0 - b) * (L * b * b + 3.0 * (L + 1) * b + 1.0 - 2.0 * (1.0 + b) * std::sqrt(3.0 * L * b));
  const double den = (L * b * b - 1.0) * (L * b * b + 6.0 * (L - 1) * b - 1.0) + (9.0 * L * L - 2.0 * L + 9.0) * b * b;
  return num / den;
}

double separability_threshold(double alpha_over_kappa, int L) {
  if (!(alpha_over_kappa > 0.0 && alpha_over_kappa < 1.0)) {
    throw DomainError("separability_threshold: alpha/kappa must lie in (0, 1)");
  }
  return numerics::bisect([&](double b) { return separability_boundary(b, L) - alpha_over_kappa; }, 0.0, 1.0, 1e-12);
}

bool bilateral_validity(const DerivedParams& dp, int L) {
  if (!std::isfinite(dp.t)) return true;
  if (!(dp.t >= dp.r && dp.r >= 0.0)) throw DomainError("bilateral_validity: needs t >= r >= 0");
  const double lhs = dp.alpha / dp.kappa;
  const double rhs = (dp.t - dp.r) * (dp.t - dp.r) / (dp.r * (dp.t + (L - 1) * dp.r));
  return lhs >= 0.0 && lhs <= rhs;
}

// ---- bilateral, general SNR ----------------------------------------------

SupportEstimate bilateral_supports_general(const DerivedParams& dp, int L, double zeta) {
  const EnclosureRoots g = enclosure_roots(dp, L, zeta);
  if (!g.signal_real || !g.interference_real || !(dp.t > dp.r)) {
    return invalid_estimate(SupportMethod::bilateral_general, "bulks_merged");
  }
  const double R = dp.R;
  const BulkInterval sig{signal_local_inverse(g.G_Pl, dp, L, zeta) / R, signal_local_inverse(g.G_Pu, dp, L, zeta) / R};
  const BulkInterval intf{interference_local_inverse(g.G_Il, dp, L, zeta) / R,
                          interference_local_inverse(g.G_Iu, dp, L, zeta) / R};
  std::vector<std::string> flags;
  if (!bilateral_validity(dp, L)) flags.push_back("outside_validity");
  return make_estimate(SupportMethod::bilateral_general, sig, intf, std::move(flags));
}

// ---- eigenvalue repulsion ------------------------------------------------

RepulsionReport appendixB_scale_verification(const DerivedParams& dp, int L) {
  require_interference(dp);
  const double k = dp.kappa, r = dp.r, t = dp.t;
  const double b = L * dp.alpha;
  RepulsionReport rep;
  rep.G4 = r * k * (t - r) / (k * (r - t) - b * r);
  const double G = rep.G4;
  const double centre = (G * k - 2.0 * G + G * b + t * k) / (2.0 * G * G);
  const double root =
      std::sqrt(b * b * G * G + 2.0 * b * G * t * k - 2.0 * b * G * G * k + k * k * (G + t) * (G + t)) / (2.0 * G * G);
  rep.s0_closed = (t - r + b * r / k) * (t - r + b * r) / (r * (t - r) * (t - r));
  const double minus = centre - root;
  const double plus = centre + root;
  rep.minus_branch = std::abs(minus - rep.s0_closed) <= std::abs(plus - rep.s0_closed);
  rep.s0_at_G4 = rep.minus_branch ? minus : plus;
  rep.ratio = rep.s0_at_G4 * r;
  const double q = t / r - 1.0;
  rep.ratio_formula = (1.0 + (b / k) / q) * (1.0 + b / q);
  rep.i_P = interference_scale_factors(t / r, 1.0, dp.alpha, k, L).first;
  return rep;
}

double noise_repulsion_factor(double r, double zeta, double kappa) {
  if (!(kappa > 0.0)) throw DomainError("noise_repulsion_factor: kappa must be positive");
  return (1.0 + r * zeta) * (1.0 + r * zeta / kappa);
}

}  // namespace smimo
