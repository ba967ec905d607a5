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
#include <random>

#include <gtest/gtest.h>

#include "pdo/grid.hpp"

namespace pdo {
namespace {

CVec random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  CVec v(n);
  for (auto& x : v) {
    const double re = nd(rng);
    x = cplx(re, nd(rng));
  }
  return v;
}

TEST(PeriodicGrid, RejectsBadSizes) {
  EXPECT_THROW(PeriodicGrid(1, 0), Error);
  EXPECT_THROW(PeriodicGrid(1, 9), Error);
  EXPECT_THROW(PeriodicGrid(1, 8, -1.0), Error);
  EXPECT_THROW(PeriodicGrid(std::vector<int>{8, 8}, std::vector<double>{1.0}), Error);
}

TEST(PeriodicGrid, RavelRoundTrip) {
  const PeriodicGrid g(std::vector<int>{8, 10}, std::vector<double>{1.0, 2.0});
  EXPECT_EQ(g.size(), 80u);
  int idx[2];
  for (std::size_t p = 0; p < g.size(); ++p) {
    g.unravel(p, idx);
    EXPECT_EQ(g.ravel(idx), p);
  }
  g.unravel(11, idx);
  EXPECT_EQ(idx[0], 1);  // axis 0 slowest
  EXPECT_EQ(idx[1], 1);
  EXPECT_DOUBLE_EQ(g.cell_volume(), (1.0 / 8) * (2.0 / 10));
}

TEST(PeriodicGrid, SignedWavenumbers) {
  const PeriodicGrid g(1, 8);
  EXPECT_EQ(g.wavenumber(0, 3), 3);
  EXPECT_EQ(g.wavenumber(0, 4), -4);
  EXPECT_EQ(g.wavenumber(0, 7), -1);
  const PeriodicGrid h(1, 8, 4.0);
  EXPECT_NEAR(h.frequency(0, 1), kTwoPi / 4.0, 1e-15);
}

TEST(Fft, ForwardInverseRoundTrip) {
  for (int dim : {1, 2}) {
    const PeriodicGrid g(dim, dim == 1 ? 64 : 16);
    const CVec u = random_vector(g.size(), 7 + dim);
    const CVec back = fft_inverse(g, fft_forward(g, u));
    EXPECT_LT((back - u).norm() / u.norm(), 1e-12);
  }
}

TEST(Fft, UnitaryPlaneWave) {
  // e^{i k x} has a single coefficient sqrt(N) under the unitary DFT.
  const PeriodicGrid g(1, 32);
  const int k = 5;
  CVec u(32);
  for (int j = 0; j < 32; ++j) u[j] = std::polar(1.0, k * g.point(0, j));
  const CVec c = fft_forward(g, u);
  for (int i = 0; i < 32; ++i)
    EXPECT_NEAR(std::abs(c[i]), i == k ? std::sqrt(32.0) : 0.0, 1e-12);
  EXPECT_NEAR(c.norm(), u.norm(), 1e-12);
}

TEST(Sobolev, WeightsMatchJapaneseBracket) {
  const PeriodicGrid g(1, 16, 2.0);
  const RVec w = sobolev_weights(g, 1.5);
  for (int i = 0; i < 16; ++i) {
    const double xi = kTwoPi * g.wavenumber(0, i) / 2.0;
    EXPECT_NEAR(w[i], std::pow(1.0 + xi * xi, 0.75), 1e-12 * w[i]);
  }
  EXPECT_TRUE(sobolev_weights(g, 0.0).isOnes());
}

TEST(Sobolev, ApplyThenInverseIsIdentity) {
  const PeriodicGrid g(2, 16);
  const CVec u = random_vector(g.size(), 3);
  for (double s : {0.5, 1.0, 2.0}) {
    const CVec v = apply_sobolev_weight(g, apply_sobolev_weight(g, u, s), -s);
    EXPECT_LT((v - u).norm() / u.norm(), 1e-12);
  }
  EXPECT_EQ(apply_sobolev_weight(g, u, 0.0), u);
}

TEST(Sobolev, NormOfPlaneWave) {
  const PeriodicGrid g(1, 32);
  const GridField f = sample_field(g, [](const double* x) { return std::polar(1.0, 3.0 * x[0]); });
  // ||e^{3ix}||_{L^2(0, 2pi)} = sqrt(2 pi).
  EXPECT_NEAR(sobolev_norm(f, 0.0), std::sqrt(kTwoPi), 1e-12);
  EXPECT_NEAR(sobolev_norm(f, 2.0) / sobolev_norm(f, 0.0), 10.0, 1e-12);
  const GridField c = fourier_forward(f);
  EXPECT_EQ(c.domain, Domain::kFrequency);
  EXPECT_NEAR(sobolev_norm(c, 1.0), sobolev_norm(f, 1.0), 1e-12);
}

TEST(Inner, QuadratureAndWeights) {
  const PeriodicGrid g(1, 32);
  const GridField u = sample_field(g, [](const double* x) { return cplx(std::cos(x[0])); });
  EXPECT_NEAR(l2_inner(u, u).real(), kPi, 1e-12);
  const GridField m = sample_field(g, [](const double*) { return cplx(4.0); });
  EXPECT_NEAR(weighted_l2_norm(u, m), 2.0 * std::sqrt(kPi), 1e-12);
  const GridField bad = sample_field(g, [](const double*) { return cplx(-1.0); });
  EXPECT_THROW(weighted_l2_norm(u, bad), Error);
}

}  // namespace
}  // namespace pdo
