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

#include "pdo/sweeps.hpp"

namespace pdo {
namespace {

const std::vector<double> kH{0.1, 0.05, 0.025, 0.0125};

TEST(SharpNorm, HeatPropagatorIsContraction) {
  const PeriodicGrid g(1, 32);
  for (double s : {0.0, 1.0}) {
    const SharpNormResult r = sharp_norm_sweep(heat_symbol(1), 0.0, s, kH, g);
    ASSERT_EQ(r.rows.size(), kH.size());
    for (const auto& row : r.rows) EXPECT_NEAR(row.norm, 1.0, 1e-12);
    EXPECT_LE(r.c_fit, 1e-9);
    EXPECT_TRUE(r.bounded);
  }
}

TEST(SharpNorm, PowerMatchesDense) {
  const PeriodicGrid g(1, 32);
  const auto d = sharp_norm_sweep(curved_symbol(), 0.0, 0.0, kH, g, NormMethod::kDense);
  const auto p = sharp_norm_sweep(curved_symbol(), 0.0, 0.0, kH, g, NormMethod::kPower);
  for (std::size_t i = 0; i < kH.size(); ++i)
    EXPECT_NEAR(d.rows[i].norm, p.rows[i].norm, 1e-6);
  EXPECT_GT(d.c_fit, 0.0);
  EXPECT_TRUE(std::isfinite(d.c_fit));
}

TEST(Stability, HeatSupNormIsOne) {
  const PeriodicGrid g(1, 16);
  const StabilityResult r = stability_sweep(heat_symbol(1), 0.5, 0.0, {1, 2, 4, 8}, g, 0.0);
  ASSERT_EQ(r.rows.size(), 4u);
  for (const auto& row : r.rows) EXPECT_NEAR(row.sup_norm, 1.0, 1e-12);
  EXPECT_TRUE(r.bounded);
  EXPECT_NEAR(r.bound, 1.0, 1e-15);
}

TEST(Consistency, TimeIndependentXIndependentIsExact) {
  const PeriodicGrid g(1, 32);
  const ConsistencyResult r = consistency_sweep(heat_symbol(1), 0.0, 0.0, kH, g);
  for (const auto& p : r.points) EXPECT_LE(p.error, 1e-12);
}

TEST(Convergence, HeatMultiProductIsExact) {
  const PeriodicGrid g(1, 16);
  const ConvergenceResult r = convergence_sweep(heat_symbol(1), 0.5, 0.0, 0.0, {1, 2, 4, 8}, g);
  ASSERT_EQ(r.rows.size(), 4u);
  for (const auto& row : r.rows) {
    EXPECT_LE(row.final_operator, 1e-12);
    EXPECT_LE(row.strong, 1e-12);
  }
  EXPECT_LE(r.reference_agreement, 1e-9);
}

TEST(BandNorm, IdentityAndDiagonalWeights) {
  const int n = 64;
  const CyclicBandMatrix id = CyclicBandMatrix::identity(n);
  EXPECT_NEAR(band_norm(id, kTwoPi, 0.0, 0.0).value, 1.0, 1e-9);
  // H^1 -> L2 norm of the identity is max <xi>^-1 = 1 (at xi = 0);
  // L2 -> H^-1 likewise.
  EXPECT_NEAR(band_norm(id, kTwoPi, 1.0, 0.0).value, 1.0, 1e-9);
  // L2 -> H^1: largest <xi>, xi = -n/2.
  EXPECT_NEAR(band_norm(id, kTwoPi, 0.0, 1.0).value, std::sqrt(1.0 + 32.0 * 32.0), 1e-6);
}

TEST(Remainders, XIndependentSymbolsCommute) {
  RemainderOptions opts;
  opts.points = 64;
  const auto r = generator_composition_remainder(heat_symbol(1), 0.0, kH, opts);
  for (const auto& p : r.points) EXPECT_LE(p.error, 1e-10);
  const auto w = weight_splitting_remainder(heat_symbol(1), 1.0, kH, opts);
  for (const auto& p : w.points) EXPECT_LE(p.error, 1e-10);
}

TEST(Remainders, CurvedSymbolGivesPositiveShrinkingRemainder) {
  RemainderOptions opts;
  opts.points = 128;
  const auto r = cutoff_conjugation_remainder(
      curved_symbol(), [](double x) { return std::exp(std::cos(x)) / 3.0; }, kH, opts);
  ASSERT_EQ(r.points.size(), kH.size());
  EXPECT_GT(r.points.front().error, 0.0);
  EXPECT_LT(r.points.back().error, r.points.front().error);
}

}  // namespace
}  // namespace pdo
