// Copyright 2026 The pdo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>

#include <gtest/gtest.h>

#include "pdo/pullback.hpp"

namespace pdo {
namespace {

double chi(double x) { return 0.5 + 0.25 * std::cos(x); }

TEST(TransitionMap, SineInverse) {
  const TransitionMap m = sine_map(0.3);
  for (double x : {-3.0, -0.4, 0.0, 1.1, 2.9, 7.0}) {
    EXPECT_NEAR(m.kappa(m.inverse(x)), x, 1e-14);
    EXPECT_NEAR(m.inverse(m.kappa(x)), x, 1e-14);
  }
  EXPECT_THROW(sine_map(1.0), Error);
}

TEST(TransitionMap, KappaTildeLimitAndSecant) {
  const TransitionMap m = sine_map(0.3);
  const double x = 1.2;
  // L'(x) = 1 / kappa'(L(x)).
  EXPECT_NEAR(kappa_tilde(m, x, x), 1.0 / (1.0 + 0.3 * std::cos(m.inverse(x))), 1e-15);
  // Close points use the derivative at the midpoint.
  const double mid = x + 0.5e-8;
  EXPECT_NEAR(kappa_tilde(m, x, x + 1e-8), 1.0 / m.dkappa(m.inverse(mid)), 1e-15);
  EXPECT_NEAR(kappa_tilde(m, x, x + 1e-8), kappa_tilde(m, x, x), 1e-8);
  EXPECT_NEAR(kappa_tilde(m, 0.5, 2.0), (m.inverse(0.5) - m.inverse(2.0)) / (0.5 - 2.0), 1e-15);
  const TransitionMap a = affine_map(2.0, 0.4);
  EXPECT_NEAR(kappa_tilde(a, 0.1, 3.0), 0.5, 1e-15);
  TransitionMap bounded = m;
  bounded.lo = 0.0;
  bounded.hi = 1.0;
  EXPECT_THROW(kappa_tilde(bounded, 2.0, 0.5), Error);
}

// kappa' constant: the first-order correction vanishes and alpha_0 is
// chi(L)^2 b(L, kappa' xi).
TEST(PullbackSymbol, AffineMapsHaveNoCorrection) {
  const SymbolFunction b = curved_symbol();
  for (const TransitionMap& m : {identity_map(), affine_map(1.0, 0.4), affine_map(2.0, -0.3)}) {
    const SymbolFunction a0 = pullback_symbol(m, b, chi, 0);
    const SymbolFunction a1 = pullback_symbol(m, b, chi, 1);
    for (double x : {0.2, 1.7, 4.0})
      for (double xi : {-3.0, 0.5, 9.0}) {
        const double l = m.inverse(x);
        const double k = m.dkappa(l) * xi;
        const cplx expect = chi(l) * chi(l) * b(0.0, &l, &k);
        EXPECT_NEAR(std::abs(a0(0.0, &x, &xi) - expect), 0.0, 1e-13);
        EXPECT_NEAR(std::abs(a1(0.0, &x, &xi) - expect), 0.0, 1e-13);
      }
  }
}

// b = xi^2: alpha_1 - alpha_0 = (i/2) chi(L)^2 (kappa''(L) / kappa'(L)) 2 kappa'(L) xi.
TEST(PullbackSymbol, SineMapFirstOrderTerm) {
  const TransitionMap m = sine_map(0.3);
  const SymbolFunction b = heat_symbol(1);
  const SymbolFunction a0 = pullback_symbol(m, b, chi, 0);
  const SymbolFunction a1 = pullback_symbol(m, b, chi, 1);
  for (double x : {0.2, 1.7, 4.0})
    for (double xi : {-3.0, 0.5, 9.0}) {
      const double l = m.inverse(x);
      const double kp = m.dkappa(l);
      const double c2 = chi(l) * chi(l);
      EXPECT_NEAR(std::abs(a0(0.0, &x, &xi) - c2 * kp * kp * xi * xi), 0.0, 1e-12);
      const cplx corr = cplx(0.0, 0.5) * c2 * (m.d2kappa(l) / kp) * 2.0 * kp * xi;
      EXPECT_NEAR(std::abs(a1(0.0, &x, &xi) - a0(0.0, &x, &xi) - corr), 0.0, 1e-12);
    }
}

TEST(PullbackCutoff, SupportAndPeak) {
  EXPECT_EQ(pullback_cutoff(0.0), 0.0);
  EXPECT_EQ(pullback_cutoff(0.3), 0.0);
  EXPECT_EQ(pullback_cutoff(kTwoPi - 0.2), 0.0);
  EXPECT_NEAR(pullback_cutoff(kPi), 1.0, 1e-15);
  EXPECT_NEAR(pullback_cutoff(kPi + kTwoPi), 1.0, 1e-14);
  EXPECT_GT(pullback_cutoff(1.0), 0.0);
}

TEST(PullbackResidual, IdentityMapShrinksWithH) {
  const PeriodicGrid g(1, 64);
  const PullbackResult r = check_pullback_residual(identity_map(), curved_operator(64),
                                                   pullback_cutoff, {0.1, 0.05, 0.025, 0.0125},
                                                   g, 1);
  ASSERT_EQ(r.points.size(), 4u);
  for (std::size_t i = 1; i < r.points.size(); ++i)
    EXPECT_LT(r.points[i].error, r.points[i - 1].error);
  EXPECT_GT(r.fit.slope, 0.5);
}

}  // namespace
}  // namespace pdo
