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

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "smimo/errors.hpp"

namespace smimo::numerics {

using cd = std::complex<double>;

/// Real polynomial with coefficients in ascending degree.
class Polynomial {
 public:
  Polynomial() = default;
  /// Trailing (highest-degree) zero coefficients are trimmed.
  explicit Polynomial(std::vector<double> ascending);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<double>& coefficients() const { return coeffs_; }

  double operator()(double x) const;
  cd operator()(cd x) const;

  /// Euclidean norm of the coefficient vector.
  double coefficient_norm() const;

 private:
  std::vector<double> coeffs_;
};

/// All complex roots of `p`, via eigenvalues of the balanced companion
/// matrix followed by a Newton polish on the original coefficients.
/// Throws DomainError for degree < 1.
std::vector<cd> poly_roots(const Polynomial& p);

/// Roots whose imaginary part is below `rel_tol * max(|root|, tiny)`, sorted
/// ascending. `all_real` reports whether no complex pair was found.
struct RealRoots {
  std::vector<double> roots;
  bool all_real = true;
};
RealRoots real_roots(const std::vector<cd>& roots, double rel_tol = 1e-9);

struct FixedPointOptions {
  double damping = 0.5;
  double tol = 1e-10;
  int max_iter = 10000;
};

template <typename T>
struct FixedPointResult {
  T value;
  int iterations;
  double residual;
};

/// Iterates x <- (1 - d) x + d map(x) until |x - map(x)| <= tol.
/// Throws SolverError with the last residual after max_iter steps.
template <typename T, typename Map>
FixedPointResult<T> damped_fixed_point(Map&& map, T init, const FixedPointOptions& opt = {}) {
  if (!(opt.damping > 0.0 && opt.damping <= 1.0)) {
    throw DomainError("damped_fixed_point: damping must lie in (0, 1]");
  }
  T x = init;
  double residual = 0.0;
  for (int it = 0; it < opt.max_iter; ++it) {
    const T mx = map(x);
    residual = std::abs(x - mx);
    if (!std::isfinite(residual)) break;
    if (residual <= opt.tol) return {x, it, residual};
    x = (1.0 - opt.damping) * x + opt.damping * mx;
  }
  throw SolverError("damped_fixed_point: no convergence", residual);
}

/// Bisection for a sign change of `f` on [lo, hi]; stops when the bracket is
/// narrower than `tol` or f hits zero. Throws DomainError without a sign change.
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12,
              int max_iter = 200);

/// Trapezoidal integral of tabulated values.
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

/// Running trapezoidal integral; out[0] = 0.
std::vector<double> cumulative_trapezoid(const std::vector<double>& x, const std::vector<double>& y);

/// Adaptive Simpson quadrature on [a, b].
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int max_depth = 50);

/// Evenly spaced grid including both ends.
std::vector<double> linspace(double a, double b, int n);

}  // namespace smimo::numerics
