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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "smimo/bulk_support.hpp"
#include "smimo/numerics.hpp"

using namespace smimo;
using namespace smimo::numerics;

namespace {

std::vector<double> sorted_real_parts(const std::vector<cd>& roots) {
  std::vector<double> re;
  for (const auto& z : roots) re.push_back(z.real());
  std::sort(re.begin(), re.end());
  return re;
}

// Ascending coefficients of prod (x - r_i).
std::vector<double> from_roots(const std::vector<double>& roots) {
  std::vector<double> c{1.0};
  for (double r : roots) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = next;
  }
  return c;
}

}  // namespace

TEST_CASE("polynomial trims trailing zeros and evaluates") {
  Polynomial p({1.0, -3.0, 2.0, 0.0, 0.0});
  CHECK(p.degree() == 2);
  CHECK(p(1.0) == doctest::Approx(0.0));
  CHECK(p(3.0) == doctest::Approx(10.0));
  CHECK(std::abs(p(cd(0.0, 1.0)) - cd(-1.0, -3.0)) < 1e-15);
}

TEST_CASE("x^2 - 1 has roots -1 and +1") {
  const auto re = sorted_real_parts(poly_roots(Polynomial({-1.0, 0.0, 1.0})));
  REQUIRE(re.size() == 2);
  CHECK(re[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(re[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("expanded (x-1)(x-2)(x-3)(x-4) gives 1..4") {
  const auto rr = real_roots(poly_roots(Polynomial(from_roots({1, 2, 3, 4}))));
  REQUIRE(rr.all_real);
  REQUIRE(rr.roots.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(rr.roots[static_cast<std::size_t>(i)] - (i + 1)) < 1e-9);
}

TEST_CASE("double root of (x-1)^2 (x-2) is recovered to 1e-4") {
  const auto roots = poly_roots(Polynomial(from_roots({1, 1, 2})));
  auto re = sorted_real_parts(roots);
  REQUIRE(re.size() == 3);
  int near_one = 0;
  for (const auto& z : roots) near_one += std::abs(z - 1.0) < 1e-4;
  CHECK(near_one == 2);
  CHECK(re[2] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("complex pairs are reported as not all real") {
  const auto rr = real_roots(poly_roots(Polynomial({1.0, 0.0, 1.0, 0.0})));
  CHECK_FALSE(rr.all_real);
  CHECK(rr.roots.empty());
}

TEST_CASE("degree zero polynomial is a domain error") {
  CHECK_THROWS_AS(poly_roots(Polynomial({3.0})), DomainError);
  CHECK_THROWS_AS(poly_roots(Polynomial({0.0, 0.0})), DomainError);
}

TEST_CASE("roots satisfy the residual bound and are scale invariant") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_real_distribution<double> mag(-6.0, 6.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> c(5);
    for (auto& x : c) x = u(rng);
    c[4] = std::copysign(std::max(std::abs(c[4]), 0.1), c[4]);
    const Polynomial p(c);
    const auto roots = poly_roots(p);
    REQUIRE(roots.size() == 4);
    for (const auto& z : roots) CHECK(std::abs(p(z)) <= 1e-8 * p.coefficient_norm());

    const double s = std::pow(10.0, mag(rng));
    std::vector<double> scaled = c;
    for (auto& x : scaled) x *= s;
    const auto roots2 = poly_roots(Polynomial(scaled));
    for (const auto& z : roots) {
      double best = 1e300;
      for (const auto& w : roots2) best = std::min(best, std::abs(z - w));
      CHECK(best <= 1e-7 * std::max(1.0, std::abs(z)));
    }
  }
}

TEST_CASE("roots of badly scaled quartics") {
  // Same magnitudes as the bulk-support quartics (roots ~ 1e-5 .. 1e-4).
  const std::vector<double> want{-1.5e-4, -1.2e-4, -3.7e-5, -3.0e-5};
  const auto rr = real_roots(poly_roots(Polynomial(from_roots(want))));
  REQUIRE(rr.all_real);
  REQUIRE(rr.roots.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(rr.roots[i] - want[i]) <= 1e-9 * std::abs(want[i]));
}

TEST_CASE("damped fixed point") {
  SUBCASE("x/2 from 1 goes to 0") {
    const auto res = damped_fixed_point([](double x) { return x / 2.0; }, 1.0);
    CHECK(std::abs(res.value) <= 1e-9);
    CHECK(res.residual <= 1e-10);
  }
  SUBCASE("cos has the Dottie number as fixed point") {
    double ref = 1.0;
    for (int i = 0; i < 200; ++i) ref = std::cos(ref);
    const auto res = damped_fixed_point([](double x) { return std::cos(x); }, 1.0);
    CHECK(res.value == doctest::Approx(ref).epsilon(1e-9));
    CHECK(res.value == doctest::Approx(0.739085).epsilon(1e-6));
    CHECK(std::abs(res.value - std::cos(res.value)) <= 1e-10);
  }
  SUBCASE("damping 1 is the plain iteration") {
    FixedPointOptions opt;
    opt.damping = 1.0;
    opt.tol = 1e-300;
    opt.max_iter = 5;
    try {
      damped_fixed_point([](double v) { return std::cos(v); }, 0.3, opt);
      FAIL("expected non-convergence");
    } catch (const SolverError& e) {
      CHECK(e.residual() > 0.0);
    }
    opt.tol = 1e-6;
    opt.max_iter = 10000;
    const auto res = damped_fixed_point([](double v) { return std::cos(v); }, 0.3, opt);
    double y = 0.3;
    for (int i = 0; i < res.iterations; ++i) y = std::cos(y);
    CHECK(res.value == y);
  }
  SUBCASE("invalid damping and divergence") {
    FixedPointOptions opt;
    opt.damping = 0.0;
    CHECK_THROWS_AS(damped_fixed_point([](double v) { return v; }, 0.0, opt), DomainError);
    opt.damping = 1.0;
    opt.max_iter = 50;
    CHECK_THROWS_AS(damped_fixed_point([](double v) { return 3.0 * v + 1.0; }, 0.0, opt), SolverError);
  }
  SUBCASE("complex maps") {
    const auto res = damped_fixed_point([](cd z) { return 0.5 * z + cd(1.0, 1.0); }, cd(0.0, 0.0));
    CHECK(std::abs(res.value - cd(2.0, 2.0)) <= 1e-9);
  }
}

TEST_CASE("returned fixed points always satisfy the tolerance") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (int i = 0; i < 200; ++i) {
    const double a = u(rng), b = u(rng) * 10.0;
    FixedPointOptions opt;
    opt.tol = 1e-12;
    const auto res = damped_fixed_point([&](double x) { return a * x + b; }, 0.0, opt);
    CHECK(std::abs(res.value - (a * res.value + b)) <= opt.tol);
  }
}

TEST_CASE("bisection") {
  CHECK(bisect([](double x) { return x - 0.5; }, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(bisect([](double x) { return x * x - 2.0; }, 1.0, 2.0) - std::sqrt(2.0)) <= 1e-5);
  CHECK_THROWS_AS(bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0), DomainError);
  CHECK(bisect([](double x) { return x - 1.0; }, 1.0, 2.0) == 1.0);
}

TEST_CASE("bisection inverts the separability boundary") {
  for (double target : {0.001, 0.003, 0.01, 0.1}) {
    const double beta = bisect([&](double b) { return separability_boundary(b, 2) - target; }, 0.0, 1.0 - 1e-15, 1e-12);
    CHECK(std::abs(separability_boundary(beta, 2) - target) <= 1e-4 * target);
  }
}

TEST_CASE("quadrature against Gauss-Kronrod") {
  auto f = [](double x) { return std::exp(-x) * std::sin(3.0 * x) + std::sqrt(x); };
  const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 2.0, 15, 1e-14);
  CHECK(adaptive_simpson(f, 0.0, 2.0, 1e-12) == doctest::Approx(ref).epsilon(1e-9));
  const auto x = linspace(0.0, 2.0, 20001);
  std::vector<double> y;
  for (double v : x) y.push_back(f(v));
  CHECK(trapezoid(x, y) == doctest::Approx(ref).epsilon(1e-6));
  const auto cum = cumulative_trapezoid(x, y);
  CHECK(cum.front() == 0.0);
  CHECK(cum.back() == doctest::Approx(trapezoid(x, y)).epsilon(1e-14));
  CHECK(std::is_sorted(cum.begin(), cum.end()));
}

TEST_CASE("linspace") {
  const auto g = linspace(-1.0, 1.0, 5);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == -1.0);
  CHECK(g.back() == 1.0);
  CHECK(g[2] == doctest::Approx(0.0));
}
