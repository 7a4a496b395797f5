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

#include "smimo/rmt_spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>

namespace smimo {

using cd = std::complex<double>;

void FixedPointParams::validate() const {
  if (!(kappa > 0.0) || !(R > 0.0)) throw DomainError("FixedPointParams: kappa and R must be positive");
  if (!(noise_a2 >= 0.0)) throw DomainError("FixedPointParams: noise power must be non-negative");
  for (const auto& term : terms) {
    if (!(term.multiplicity >= 0.0 && term.rho > 0.0 && term.a2 >= 0.0)) {
      throw DomainError("FixedPointParams: term weights must be non-negative with rho > 0");
    }
  }
}

FixedPointParams FixedPointParams::from_system(const SystemParams& sys) {
  sys.validate();
  const double C = sys.C;
  FixedPointParams fp;
  fp.kappa = C / sys.R;
  fp.R = sys.R;
  fp.terms.push_back({1.0, static_cast<double>(sys.T) / C, sys.P * sys.T * C});
  std::map<double, int> classes;
  for (double I : sys.interference_powers) ++classes[I];
  for (const auto& [I, count] : classes) fp.terms.push_back({static_cast<double>(count), 1.0 / C, I * C});
  fp.noise_a2 = sys.W * C;
  return fp;
}

FixedPointParams FixedPointParams::noise_only(double kappa, double R, double W) {
  FixedPointParams fp;
  fp.kappa = kappa;
  fp.R = R;
  fp.noise_a2 = W * kappa * R;
  fp.validate();
  return fp;
}

double FixedPointParams::atom_at_zero() const {
  double share = 1.0;
  if (noise_a2 <= 0.0) {
    share = 0.0;
    for (const auto& term : terms) {
      if (term.a2 > 0.0) share += term.multiplicity * term.rho * kappa;
    }
  }
  return 1.0 - std::min({1.0, kappa, share});
}

double FixedPointParams::support_upper_hint() const {
  const double C = kappa * R;
  double p_max = 0.0;
  double users = 0.0;
  for (const auto& term : terms) {
    if (term.a2 <= 0.0 || term.multiplicity <= 0.0) continue;
    p_max = std::max(p_max, term.a2 / (term.rho * C * C));
    users += term.multiplicity * term.rho * C;
  }
  const double spread = std::pow(1.0 + std::sqrt(users / R), 2) * std::pow(1.0 + std::sqrt(users / C), 2);
  const double noise_edge = noise_level() * std::pow(1.0 + std::sqrt(kappa), 2);
  const double hint = C * p_max * spread + noise_edge;
  return hint > 0.0 ? hint : 1.0;
}

cd FixedPointParams::kernel(cd v) const {
  cd acc = noise_level();
  for (const auto& term : terms) {
    if (term.a2 <= 0.0 || term.multiplicity <= 0.0) continue;
    acc += term.multiplicity * term.rho * kappa * term.a2 / (R * kappa * kappa * term.rho - term.a2 * v);
  }
  return acc;
}

cd FixedPointParams::kernel_derivative(cd v) const {
  cd acc = 0.0;
  for (const auto& term : terms) {
    if (term.a2 <= 0.0 || term.multiplicity <= 0.0) continue;
    const cd d = R * kappa * kappa * term.rho - term.a2 * v;
    acc += term.multiplicity * term.rho * kappa * term.a2 * term.a2 / (d * d);
  }
  return acc;
}

cd fixed_point_residual(cd z, cd g, const FixedPointParams& fp) {
  const cd u = z * g + 1.0 - fp.kappa;
  return g * (z + u * fp.kernel(u * g)) + 1.0;
}

cd fixed_point_map(cd z, cd g, const FixedPointParams& fp) {
  const cd u = z * g + 1.0 - fp.kappa;
  return -1.0 / (z + u * fp.kernel(u * g));
}

namespace {

struct LocalSolve {
  cd g;
  double residual;
  int iterations;
  bool ok;
};

double scaled_residual(cd z, cd g, const FixedPointParams& fp) {
  return std::abs(fixed_point_residual(z, g, fp)) / (1.0 + std::abs(z * g));
}

// Newton with backtracking; a damped fixed-point step when Newton cannot
// reduce the residual without leaving the upper half plane.
LocalSolve hybrid_solve(cd z, cd g, const FixedPointParams& fp, const numerics::FixedPointOptions& opt,
                        int max_iter) {
  double res = scaled_residual(z, g, fp);
  for (int it = 0; it < max_iter; ++it) {
    if (res <= opt.tol) return {g, res, it, true};
    const cd u = z * g + 1.0 - fp.kappa;
    const cd v = u * g;
    const cd K = fp.kernel(v);
    const cd F = g * (z + u * K) + 1.0;
    const cd dF = z + (K + v * fp.kernel_derivative(v)) * (u + z * g);
    bool moved = false;
    if (std::abs(dF) > 0.0 && std::isfinite(std::abs(dF))) {
      const cd step = F / dF;
      double lam = 1.0;
      for (int k = 0; k < 12; ++k, lam *= 0.5) {
        const cd g1 = g - lam * step;
        if (!(g1.imag() > 0.0)) continue;
        const double r1 = scaled_residual(z, g1, fp);
        if (r1 < res) {
          g = g1;
          res = r1;
          moved = true;
          break;
        }
      }
    }
    if (!moved) {
      const cd g1 = (1.0 - opt.damping) * g + opt.damping * fixed_point_map(z, g, fp);
      if (!(g1.imag() > 0.0) || !std::isfinite(std::abs(g1))) return {g, res, it, false};
      g = g1;
      res = scaled_residual(z, g, fp);
    }
  }
  return {g, res, max_iter, res <= opt.tol};
}

}  // namespace

StieltjesValue stieltjes_solve(cd s, const FixedPointParams& fp, const StieltjesOptions& opt) {
  if (!(s.imag() > 0.0)) throw DomainError("stieltjes_solve: Im(s) must be positive");
  fp.validate();
  const auto& fpo = opt.fixed_point;
  if (!(fpo.damping > 0.0 && fpo.damping <= 1.0)) throw DomainError("stieltjes_solve: damping must lie in (0, 1]");

  const double x = s.real();
  const double y_target = s.imag();
  const double y_auto = 10.0 * (fp.support_upper_hint() + std::abs(x) + 1.0);
  double y = std::max(y_target, opt.y_start > 0.0 ? opt.y_start : y_auto);

  int total = 0;
  cd z(x, y);
  LocalSolve ls = hybrid_solve(z, -1.0 / z, fp, fpo, fpo.max_iter);
  total += ls.iterations;
  if (!ls.ok) throw SolverError("stieltjes_solve: no convergence at the starting height", ls.residual);
  cd g = ls.g;

  double factor = 0.25;
  while (y > y_target) {
    if (total > fpo.max_iter) throw SolverError("stieltjes_solve: iteration budget exhausted", ls.residual);
    const double y_next = std::max(y_target, y * factor);
    z = cd(x, y_next);
    const LocalSolve next = hybrid_solve(z, g, fp, fpo, 60);
    total += next.iterations;
    const bool herglotz = next.g.imag() > 0.0 && std::abs(next.g) <= (1.0 + 1e-8) / y_next;
    if (next.ok && herglotz) {
      y = y_next;
      g = next.g;
      ls = next;
      factor = std::max(0.01, factor * factor);
    } else {
      factor = std::sqrt(factor);
      if (factor > 0.999) throw SolverError("stieltjes_solve: continuation stalled", next.residual);
    }
  }
  return {s, g, ls.residual, total};
}

std::vector<std::pair<double, double>> SpectralDensity::components(double rel_threshold) const {
  std::vector<std::pair<double, double>> out;
  if (values.empty()) return out;
  const double thr = rel_threshold * *std::max_element(values.begin(), values.end());
  std::size_t i = 0;
  while (i < values.size()) {
    if (values[i] > thr) {
      std::size_t j = i;
      while (j + 1 < values.size() && values[j + 1] > thr) ++j;
      out.emplace_back(grid[i], grid[j]);
      i = j + 1;
    } else {
      ++i;
    }
  }
  return out;
}

SpectralDensity density_from_stieltjes(const std::vector<double>& grid, const FixedPointParams& fp, double y_offset,
                                       int threads) {
  if (!(y_offset > 0.0)) throw DomainError("density_from_stieltjes: y_offset must be positive");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw DomainError("density_from_stieltjes: grid must be increasing");
  }
  fp.validate();

  SpectralDensity out;
  out.grid = grid;
  out.values.assign(grid.size(), 0.0);
  out.atom_at_zero = fp.atom_at_zero();

  const std::size_t n = grid.size();
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));

  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&](std::size_t w) {
    try {
      for (std::size_t i = w; i < n; i += workers) {
        const cd z(grid[i], y_offset);
        const cd g = stieltjes_solve(z, fp).G + out.atom_at_zero / z;
        out.values[i] = std::max(0.0, g.imag() / std::numbers::pi);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<double> default_grid(const FixedPointParams& fp, int points) {
  if (points < 2) throw DomainError("default_grid: need at least two points");
  return numerics::linspace(0.0, 2.0 * fp.support_upper_hint(), points);
}

std::vector<double> empirical_spectrum(const CMatrix& Y) {
  const Eigen::Index R = Y.rows();
  const CMatrix gram = Y.rows() <= Y.cols() ? CMatrix(Y * Y.adjoint()) : CMatrix(Y.adjoint() * Y);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
  std::vector<double> ev(static_cast<std::size_t>(R), 0.0);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    ev[static_cast<std::size_t>(i)] = std::max(0.0, es.eigenvalues()(i) / static_cast<double>(R));
  }
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

double MpDensity::operator()(double x) const {
  if (!(x > lower && x < upper)) return 0.0;
  const double xs = x / scale;
  const double d = 4.0 / kappa - std::pow(xs - 1.0 - 1.0 / kappa, 2);
  if (d <= 0.0) return 0.0;
  return kappa * std::sqrt(d) / (2.0 * std::numbers::pi * xs) / scale;
}

MpDensity mp_density(double kappa, double scale) {
  if (!(kappa > 0.0) || !(scale > 0.0)) throw DomainError("mp_density: kappa and scale must be positive");
  MpDensity d;
  d.kappa = kappa;
  d.scale = scale;
  d.lower = scale * std::pow(1.0 - 1.0 / std::sqrt(kappa), 2);
  d.upper = scale * std::pow(1.0 + 1.0 / std::sqrt(kappa), 2);
  d.atom = std::max(0.0, 1.0 - kappa);
  return d;
}

double noise_bulk_max_power(double T, double C, double W, double kappa) {
  if (!(T > 0.0 && C > 0.0 && W > 0.0 && kappa > 0.0)) throw DomainError("noise_bulk_max_power: inputs must be positive");
  return T * C * W * std::pow(1.0 + 1.0 / std::sqrt(kappa), 2);
}

SnrBounds snr_lower_bound(double P, double W, double R, double C, double kappa) {
  if (!(P > 0.0 && W > 0.0 && R > 0.0 && C > 0.0 && kappa > 0.0)) {
    throw DomainError("snr_lower_bound: inputs must be positive");
  }
  return {P / W * R / std::pow(1.0 + 1.0 / std::sqrt(kappa), 2), P / W * std::min(R, C) / 4.0};
}

std::vector<double> normalized_cdf(const SpectralDensity& d) {
  std::vector<double> cdf = numerics::cumulative_trapezoid(d.grid, d.values);
  const double total = cdf.empty() ? 0.0 : cdf.back();
  if (!(total > 0.0)) throw DomainError("normalized_cdf: density has no mass on the grid");
  for (double& c : cdf) c /= total;
  return cdf;
}

double kolmogorov_distance(std::vector<double> samples, const std::vector<double>& grid,
                           const std::vector<double>& cdf) {
  if (samples.empty() || grid.size() != cdf.size() || grid.empty()) {
    throw DomainError("kolmogorov_distance: empty sample or mismatched table");
  }
  std::sort(samples.begin(), samples.end());
  auto F = [&](double x) {
    if (x <= grid.front()) return cdf.front();
    if (x >= grid.back()) return cdf.back();
    const auto it = std::upper_bound(grid.begin(), grid.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - grid.begin());
    const double w = (x - grid[j - 1]) / (grid[j] - grid[j - 1]);
    return (1.0 - w) * cdf[j - 1] + w * cdf[j];
  };
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = F(samples[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(i + 1) / n)});
  }
  return d;
}

}  // namespace smimo
