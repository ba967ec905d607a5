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

#include "pdo/weyl.hpp"

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

SymbolFunction constant_symbol(int dim, cplx c) {
  return trig_poly_symbol(dim, {{std::vector<int>(dim, 0), std::vector<int>(dim, 0), c}},
                          std::vector<double>(dim, kTwoPi), 0.0);
}

TEST(Weyl, ConstantOneIsIdentity) {
  for (int dim : {1, 2}) {
    const PeriodicGrid g(dim, dim == 1 ? 16 : 8);
    const QuantizedOperator op = quantize(sample(constant_symbol(dim, 1.0), 0.0, g));
    const CVec u = random_vector(g.size(), 1);
    EXPECT_LT((op.apply_fft(u) - u).norm(), 1e-12 * u.norm());
    EXPECT_LT((op.apply_dense(u) - u).norm(), 1e-12 * u.norm());
    EXPECT_LT((op.fourier_matrix() - CMat::Identity(g.size(), g.size())).norm(), 1e-12);
  }
}

TEST(Weyl, FunctionOfXIsPointwiseMultiplication) {
  const PeriodicGrid g(1, 16);
  const SymbolFunction a = multiplier_x(1, {{{0}, {}, 1.0}, {{2}, {}, 0.5}, {{-3}, {}, 0.25}},
                                        {kTwoPi});
  const CMat k = quantize(sample(a, 0.0, g)).dense_kernel();
  for (int j = 0; j < 16; ++j)
    for (int l = 0; l < 16; ++l) {
      const double x = g.point(0, j);
      const cplx expect = j == l ? a(0.0, &x, &x) : cplx(0.0);
      EXPECT_NEAR(std::abs(k(j, l) - expect), 0.0, 1e-12);
    }
}

TEST(Weyl, HeatMultiplierIsDiagonalDecay) {
  const PeriodicGrid g(1, 32);
  const double h = 0.1;
  const QuantizedOperator op = quantize(exp_symbol(heat_symbol(1), 0.0, h, g));
  const CMat f = op.fourier_matrix();
  for (int i = 0; i < 32; ++i) {
    const double k = g.frequency(0, i);
    EXPECT_NEAR(std::abs(f(i, i) - std::exp(-h * k * k)), 0.0, 1e-14);
  }
  EXPECT_NEAR((f - CMat(f.diagonal().asDiagonal())).norm(), 0.0, 1e-14);
}

// Weyl matrix elements on L = 2 pi: <e_{k+m}, a^w e_k> = a_m((2k+m)/2), with
// a_m the m-th x-Fourier coefficient.
TEST(Weyl, FourierMatrixMatchesTorusWeylFormula) {
  const int n = 32;
  const PeriodicGrid g(1, n);
  const std::vector<TrigTerm> terms = {{{0}, {2}, 1.0}, {{1}, {1}, cplx(0.5, 0.25)},
                                       {{-2}, {0}, 0.75}, {{3}, {2}, cplx(0.0, 0.1)}};
  const CMat f = quantize(sample(trig_poly_symbol(1, terms, {kTwoPi}, 2.0), 0.0, g)).fourier_matrix();
  auto idx = [n](int k) { return ((k % n) + n) % n; };
  for (int k = -n / 2 + 4; k < n / 2 - 4; ++k)
    for (int m = -3; m <= 3; ++m) {
      if (k + m < -n / 2 || k + m >= n / 2) continue;
      const double xi = 0.5 * (2 * k + m);
      cplx expect = 0.0;
      for (const auto& t : terms)
        if (t.k[0] == m) expect += t.c * std::pow(xi, t.p[0]);
      EXPECT_NEAR(std::abs(f(idx(k + m), idx(k)) - expect), 0.0, 1e-11) << k << " " << m;
    }
}

TEST(Weyl, DenseAndFftPathsAgree) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> kd(-3, 3);
  std::normal_distribution<double> nd;
  for (int dim : {1, 2}) {
    const PeriodicGrid g(dim, dim == 1 ? 32 : 8);
    std::vector<TrigTerm> terms;
    for (int j = 0; j < 5; ++j) {
      TrigTerm t{std::vector<int>(dim), std::vector<int>(dim, 0), 0.0};
      for (auto& k : t.k) k = kd(rng);
      t.p[j % dim] = j % 3;
      const double re = nd(rng);
      t.c = cplx(re, nd(rng));
      terms.push_back(t);
    }
    const QuantizedOperator op =
        quantize(sample(trig_poly_symbol(dim, terms, std::vector<double>(dim, kTwoPi), 2.0), 0.0, g));
    const CVec u = random_vector(g.size(), 5);
    const CVec d = op.apply_dense(u);
    EXPECT_LT((d - op.apply_fft(u)).norm() / d.norm(), 1e-12);
    const CMat phys = to_physical_basis(g, op.fourier_matrix());
    EXPECT_LT((phys - op.dense_kernel()).norm() / phys.norm(), 1e-12);
  }
}

TEST(Weyl, RealSymbolIsSelfAdjoint) {
  const PeriodicGrid g(1, 32);
  const QuantizedOperator op = quantize(sample(curved_symbol(), 0.0, g));
  // curved is not real; its q2 part (1 + cos/2) xi^2 is.
  const SymbolFunction real = trig_poly_symbol(1, {{{0}, {2}, 1.0}, {{1}, {2}, 0.25}, {{-1}, {2}, 0.25}},
                                               {kTwoPi}, 2.0);
  const CMat f = quantize(sample(real, 0.0, g)).fourier_matrix();
  EXPECT_LT((f - f.adjoint()).norm(), 1e-12 * f.norm());
  const CMat s = quantize(sample(trig_poly_symbol(1, {{{0}, {1}, cplx(0, 1)}}, {kTwoPi}, 1.0), 0.0, g))
                     .fourier_matrix();
  EXPECT_LT((s + s.adjoint()).norm(), 1e-12 * s.norm());
  (void)op;
}

TEST(Weyl, AdjointApplyIsTheAdjoint) {
  const PeriodicGrid g(1, 32);
  const QuantizedOperator op = quantize(sample(curved_symbol(), 0.0, g));
  for (unsigned seed = 0; seed < 4; ++seed) {
    const CVec u = random_vector(32, seed), v = random_vector(32, seed + 100);
    const cplx lhs = v.dot(op.apply(u));
    const cplx rhs = op.adjoint_apply(v).dot(u);
    EXPECT_LT(std::abs(lhs - rhs), 1e-10 * std::abs(lhs));
    EXPECT_LT((op.adjoint_apply_dense(v) - op.adjoint_apply_fft(v)).norm(), 1e-10 * v.norm() * 100);
  }
}

TEST(Weyl, PhysicalFourierBasisRoundTrip) {
  const PeriodicGrid g(1, 16);
  const CMat m = CMat::Random(16, 16);
  EXPECT_LT((to_physical_basis(g, to_fourier_basis(g, m)) - m).norm(), 1e-12);
  const CMat f = dft_matrix(g);
  EXPECT_LT((f.adjoint() * f - CMat::Identity(16, 16)).norm(), 1e-12);
}

TEST(Norms, DenseNormMatchesSvd) {
  const CMat m = CMat::Random(20, 14);
  const double svd = Eigen::JacobiSVD<CMat>(m).singularValues()(0);
  EXPECT_NEAR(dense_operator_norm(m), svd, 1e-10 * svd);
  const OperatorNormEstimate p = power_norm(as_linear_operator(m));
  EXPECT_NEAR(p.value, svd, 1e-6 * svd);
  const OperatorNormEstimate l = lanczos_norm(as_linear_operator(m));
  EXPECT_TRUE(l.converged);
  EXPECT_NEAR(l.value, svd, 1e-8 * svd);
}

TEST(Norms, SobolevLevels) {
  const PeriodicGrid g(1, 32);
  const QuantizedOperator id = quantize(sample(constant_symbol(1, 1.0), 0.0, g));
  const OperatorNormEstimate e = operator_norm(g, {ChainStep::apply(id)}, 1.0, 1.0);
  EXPECT_NEAR(e.value, 1.0, 1e-8);
  // <xi>^-2 is an isometry from H^0 to H^2.
  CMat d = CMat::Zero(32, 32);
  const RVec w = sobolev_weights(g, -2.0);
  for (int i = 0; i < 32; ++i) d(i, i) = w[i];
  EXPECT_NEAR(fourier_operator_norm(g, d, 0.0, 2.0), 1.0, 1e-12);
}

TEST(Band, DenseRoundTripAndProduct) {
  const PeriodicGrid g(1, 32);
  const CMat a = quantize(sample(curved_symbol(), 0.0, g)).fourier_matrix();
  const CMat b = quantize(exp_symbol(curved_symbol(), 0.0, 0.05, g)).fourier_matrix();
  const CyclicBandMatrix ab = CyclicBandMatrix::from_dense(a), bb = CyclicBandMatrix::from_dense(b);
  EXPECT_LT((ab.to_dense() - a).norm(), 1e-12 * a.norm());
  EXPECT_LT(((ab * bb).to_dense() - a * b).norm(), 1e-10 * (a * b).norm());
  EXPECT_LT((ab.adjoint().to_dense() - a.adjoint()).norm(), 1e-12 * a.norm());
  const CVec u = random_vector(32, 9);
  EXPECT_LT((ab.apply(u) - a * u).norm(), 1e-12 * (a * u).norm());
}

TEST(Band, WeylBandMatchesGridQuantization) {
  const int n = 64;
  const PeriodicGrid g(1, n);
  const SymbolFunction q = curved_symbol();
  const CMat f = quantize(sample(q, 0.0, g)).fourier_matrix();
  const CyclicBandMatrix band =
      weyl_band([&](double x, double xi) { return q(0.0, &x, &xi); }, n, kTwoPi);
  EXPECT_LT((band.to_dense() - f).norm(), 1e-10 * f.norm());
}

}  // namespace
}  // namespace pdo
