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

#include "pdo/manifold.hpp"
#include "pdo/weyl.hpp"

namespace pdo {
namespace {

TEST(LaplaceBeltrami, FlatIsMinusSecondDerivative) {
  const DiffOperator a = build_laplace_beltrami(flat_metric(), 0.0, 64);
  EXPECT_LT((a.c2.samples().array() + 1.0).abs().maxCoeff(), 1e-15);
  EXPECT_LT(a.c1.max_abs(), 1e-15);
  EXPECT_LT(a.c0.max_abs(), 1e-15);
}

TEST(LaplaceBeltrami, CurvedCoefficientsClosedForm) {
  const MetricField m = curved_metric(TimeProfile{});
  const DiffOperator a = build_laplace_beltrami(m, 0.0, 64);
  for (int j = 0; j < 64; ++j) {
    const double x = a.c2.point(j);
    const double g = 1.0 + 0.3 * std::sin(x);
    EXPECT_NEAR(std::abs(a.c2.samples()[j] + 1.0 / g), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(a.c1.samples()[j] - 0.3 * std::cos(x) / (2.0 * g * g)), 0.0, 1e-12);
  }
}

TEST(LaplaceBeltrami, TimeDependenceIsRateScaling) {
  const MetricField m = curved_metric(smooth_profile());
  const DiffOperator a0 = build_laplace_beltrami(m, 0.0, 64);
  const double t = 0.3;
  const DiffOperator at = build_laplace_beltrami(m, t, 64);
  EXPECT_LT((at - a0 * m.rate(t)).max_abs(), 1e-12);
  EXPECT_NEAR(m.integrated_rate(t), t + smooth_profile().F(t), 1e-15);
}

TEST(BuildQ, SingleChartReproducesA) {
  const ChartAtlas atlas = single_chart_atlas();
  const DiffOperator a = build_laplace_beltrami(curved_metric(TimeProfile{}), 0.0);
  const ManifoldOperatorQ q = build_Q(a, atlas);
  EXPECT_LT((q.q2 - a).max_abs(), 1e-13);
  EXPECT_LT(q.q1.max_abs(), 1e-12);
  EXPECT_LT(q.q0.max_abs(), 1e-12);
  EXPECT_LT(q.identity_residual, 1e-10);
}

TEST(BuildQ, TwoChartIdentityResidual) {
  const ChartAtlas atlas = two_chart_atlas();
  for (const MetricField& m : {flat_metric(), curved_metric(TimeProfile{})}) {
    const DiffOperator a = build_laplace_beltrami(m, 0.0);
    const ManifoldOperatorQ q = build_Q(a, atlas);
    EXPECT_LT(q.identity_residual, 1e-8);
    EXPECT_EQ(q.chart_symbols.size(), 2u);
    EXPECT_LT(probe_identity_residual(q.total(), a, atlas), 1e-8);
  }
}

TEST(Steps, ZeroTimeStepIsPartition) {
  const ChartAtlas atlas = two_chart_atlas();
  const DiffOperator a = build_laplace_beltrami(curved_metric(TimeProfile{}), 0.0);
  const ManifoldOperatorQ q = build_Q(a, atlas);
  const int n = atlas.global_grid().points(0);
  for (int i = 0; i < 2; ++i) {
    const CMat l = local_step(q, atlas, i, 0.0);
    const RVec p2 = atlas.phi_global(i).cwiseAbs2();
    EXPECT_LT((l - CMat(p2.cast<cplx>().asDiagonal())).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_LT((global_step(q, atlas, 0.0) - CMat::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Reference, FlatMetricIsHeatMultiplier) {
  const PeriodicGrid g(1, 32);
  const double T = 0.2;
  const CMat f = to_fourier_basis(g, manifold_reference(flat_metric(), g, T));
  for (int k = 0; k < 32; ++k) {
    if (k == 16) continue;
    const double w = g.frequency(0, k);
    EXPECT_NEAR(std::abs(f(k, k) - std::exp(-T * w * w)), 0.0, 1e-12);
  }
  CMat off = f;
  off.diagonal().setZero();
  EXPECT_LT(off.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(WeightedNorm, IdentityHasUnitNorm) {
  const PeriodicGrid g(1, 32);
  const MetricField m = curved_metric(TimeProfile{});
  EXPECT_NEAR(weighted_l2_norm(m, g, CMat::Identity(32, 32)), 1.0, 1e-13);
  // The reference flow contracts L^2(dv).
  EXPECT_LE(weighted_l2_norm(m, g, manifold_reference(m, g, 0.1)), 1.0 + 1e-12);
}

}  // namespace
}  // namespace pdo
