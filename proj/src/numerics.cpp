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

#include "smimo/numerics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <limits>

namespace smimo::numerics {

Polynomial::Polynomial(std::vector<double> ascending) : coeffs_(std::move(ascending)) {
  while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

cd Polynomial::operator()(cd x) const {
  cd acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double Polynomial::coefficient_norm() const {
  double s = 0.0;
  for (double c : coeffs_) s += c * c;
  return std::sqrt(s);
}

namespace {

// Parlett-Reinsch balancing with radix 2 (exact in floating point).
void balance(Eigen::MatrixXd& a) {
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  const Eigen::Index n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

cd derivative_at(const std::vector<double>& c, cd x) {
  cd acc = 0.0;
  for (std::size_t k = c.size() - 1; k >= 1; --k) {
    acc = acc * x + static_cast<double>(k) * c[k];
  }
  return acc;
}

}  // namespace

std::vector<cd> poly_roots(const Polynomial& p) {
  if (p.degree() < 1) throw DomainError("poly_roots: polynomial degree must be >= 1");
  const auto& c = p.coefficients();

  std::vector<cd> roots;
  std::size_t low = 0;
  while (c[low] == 0.0) {
    roots.emplace_back(0.0);
    ++low;
  }
  const std::size_t n = c.size() - 1 - low;
  if (n == 0) return roots;

  // Rescale x = sigma * y so that the constant and leading terms have equal magnitude.
  const double lead = c.back();
  const double sigma = std::pow(std::abs(c[low] / lead), 1.0 / static_cast<double>(n));
  std::vector<double> q(n + 1);
  double sp = 1.0;
  for (std::size_t i = 0; i <= n; ++i) {
    q[i] = c[low + i] * sp / (lead * std::pow(sigma, static_cast<double>(n)));
    sp *= sigma;
  }

  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 1; i < n; ++i) comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < n; ++i) comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) = -q[i] / q[n];
  balance(comp);

  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw SolverError("poly_roots: companion eigenvalue solver failed", 0.0);

  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    cd x = sigma * es.eigenvalues()(i);
    // Newton polish on the unscaled polynomial; keep only improvements.
    double fx = std::abs(p(x));
    for (int it = 0; it < 4 && fx > 0.0; ++it) {
      const cd d = derivative_at(c, x);
      if (d == 0.0) break;
      const cd xn = x - p(x) / d;
      const double fn = std::abs(p(xn));
      if (!(fn < fx)) break;
      x = xn;
      fx = fn;
    }
    roots.push_back(x);
  }
  return roots;
}

RealRoots real_roots(const std::vector<cd>& roots, double rel_tol) {
  RealRoots out;
  for (const cd& z : roots) {
    const double scale = std::max(std::abs(z), std::numeric_limits<double>::min());
    if (std::abs(z.imag()) <= rel_tol * scale) {
      out.roots.push_back(z.real());
    } else {
      out.all_real = false;
    }
  }
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol, int max_iter) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!(flo * fhi < 0.0)) throw DomainError("bisect: no sign change on the bracket");
  for (int it = 0; it < max_iter && (hi - lo) > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
  return s;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t i = 1; i < x.size(); ++i) out[i] = out[i - 1] + 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
  return out;
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                    double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol, int max_depth) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(static_cast<std::size_t>(std::max(n, 0)));
  if (n == 1) {
    out[0] = a;
    return out;
  }
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return out;
}

}  // namespace smimo::numerics
