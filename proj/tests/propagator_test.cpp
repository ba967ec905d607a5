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
#include <memory>
#include <random>

#include <gtest/gtest.h>

#include "pdo/propagator.hpp"

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

TEST(Subdivision, RejectsBadKnots) {
  EXPECT_THROW(Subdivision({0.0}), Error);
  EXPECT_THROW(Subdivision({0.1, 1.0}), Error);
  EXPECT_THROW(Subdivision({0.0, 0.5, 0.5, 1.0}), Error);
  EXPECT_THROW(Subdivision({0.0, 0.7, 0.4}), Error);
  EXPECT_THROW(Subdivision::uniform(1.0, 0), Error);
  EXPECT_THROW(Subdivision::uniform(-1.0, 4), Error);
}

TEST(Subdivision, UniformMeshAndLocate) {
  const Subdivision s = Subdivision::uniform(2.0, 8);
  EXPECT_EQ(s.steps(), 8);
  EXPECT_DOUBLE_EQ(s.final_time(), 2.0);
  EXPECT_NEAR(s.mesh(), 0.25, 1e-15);
  EXPECT_EQ(s.locate(0.0), 0);
  EXPECT_EQ(s.locate(0.3), 1);
  EXPECT_EQ(s.locate(2.0), 7);
  EXPECT_THROW(s.locate(2.5), Error);
  EXPECT_THROW(s.locate(-0.1), Error);
  const Subdivision u({0.0, 0.1, 0.5, 1.0});
  EXPECT_NEAR(u.mesh(), 0.5, 1e-15);
}

TEST(Step, EqualTimesGiveIdentity) {
  const PeriodicGrid g(1, 32);
  const QuantizedOperator p = step(curved_symbol(), 0.3, 0.3, g);
  const CVec u = random_vector(32, 3);
  EXPECT_LT((p.apply(u) - u).norm(), 1e-12 * u.norm());
}

TEST(Step, HeatStepIsExactMultiplier) {
  const PeriodicGrid g(1, 32);
  const double dt = 0.07;
  const CMat f = step(heat_symbol(1), 0.0, dt, g).fourier_matrix();
  for (int i = 0; i < 32; ++i) {
    const double k = g.frequency(0, i);
    EXPECT_NEAR(std::abs(f(i, i) - std::exp(-dt * k * k)), 0.0, 1e-14);
  }
}

TEST(MultiProduct, AtZeroIsIdentity) {
  const PeriodicGrid g(1, 32);
  auto q = std::make_shared<const SymbolFunction>(curved_symbol());
  const MultiProduct w(q, Subdivision::uniform(1.0, 4), g);
  const CVec u = random_vector(32, 4);
  EXPECT_LT((w.apply(0.0, u) - u).norm(), 1e-12 * u.norm());
}

TEST(MultiProduct, TelescopesKnotSteps) {
  const PeriodicGrid g(1, 32);
  auto q = std::make_shared<const SymbolFunction>(curved_symbol());
  const Subdivision sub = Subdivision::uniform(0.5, 5);
  const MultiProduct w(q, sub, g);
  const CVec u = random_vector(32, 5);
  CVec v = u;
  for (int j = 0; j < 3; ++j) v = w.knot_step(j).apply(v);
  EXPECT_LT((w.apply(sub.knot(3), u) - v).norm(), 1e-12 * u.norm());
  // Between knots: one partial step from the last knot.
  const double t = 0.5 * (sub.knot(3) + sub.knot(4));
  const CVec tail = step(*q, sub.knot(3), t, g).apply(v);
  EXPECT_LT((w.apply(t, u) - tail).norm(), 1e-12 * u.norm());
  const auto kv = w.knot_values(u);
  ASSERT_EQ(kv.size(), 6u);
  EXPECT_LT((kv[3] - v).norm(), 1e-12 * u.norm());
}

TEST(MultiProduct, KnotMatricesMatchApply) {
  const PeriodicGrid g(1, 16);
  auto q = std::make_shared<const SymbolFunction>(curved_symbol());
  const Subdivision sub = Subdivision::uniform(0.25, 3);
  const MultiProduct w(q, sub, g);
  const auto mats = multiproduct_knot_matrices(*q, sub, g);
  ASSERT_EQ(mats.size(), 4u);
  const CVec u = random_vector(16, 6);
  const CVec lhs = fft_inverse(g, mats.back() * fft_forward(g, u));
  EXPECT_LT((lhs - w.apply(0.25, u)).norm(), 1e-11 * u.norm());
}

TEST(Reference, HeatClosedForm) {
  const PeriodicGrid g(1, 32);
  const GridField u0 = sample_field(g, [](const double* x) { return cplx(std::exp(std::sin(*x))); });
  const double T = 0.4;
  auto [u, info] = reference_solve(heat_symbol(1), T, u0, 1e-11);
  EXPECT_EQ(info.solver, ReferenceMethod::kExactMultiplier);
  const CVec c0 = fft_forward(g, u0.values);
  CVec c = c0;
  for (int i = 0; i < 32; ++i) {
    const double k = g.frequency(0, i);
    c[i] *= std::exp(-T * k * k);
  }
  const CVec expect = fft_inverse(g, c);
  const CVec got = u.domain == Domain::kPhysical ? u.values : fft_inverse(g, u.values);
  EXPECT_LT((got - expect).norm(), 1e-12 * expect.norm());
}

TEST(Reference, EigenAndPadeAgree) {
  const PeriodicGrid g(1, 32);
  const SymbolFunction q = curved_symbol();
  const std::vector<double> times{0.1, 0.5};
  auto [a, ia] = reference_operators(q, times, g, 1e-11, ReferenceMethod::kEigen);
  auto [b, ib] = reference_operators(q, times, g, 1e-11, ReferenceMethod::kPade);
  ASSERT_EQ(a.size(), 2u);
  ASSERT_EQ(b.size(), 2u);
  for (int i = 0; i < 2; ++i) EXPECT_LT((a[i] - b[i]).norm(), 1e-9 * b[i].norm());
}

TEST(Reference, MethodOfLinesMatchesPadeOnFamily) {
  const PeriodicGrid g(1, 16);
  auto qa = std::make_shared<const SymbolFunction>(curved_symbol());
  const SymbolFunction q = family_symbol(qa, qa, smooth_profile());
  EXPECT_TRUE(is_separable_family(q));
  auto [a, ia] = reference_operators(q, {0.3}, g, 1e-10, ReferenceMethod::kMethodOfLines);
  auto [b, ib] = reference_operators(q, {0.3}, g, 1e-11, ReferenceMethod::kPade);
  EXPECT_LT((a[0] - b[0]).norm(), 1e-8 * b[0].norm());
}

TEST(Reference, CurvedIsNotSeparable) {
  EXPECT_FALSE(is_separable_family(curved_symbol()));
}

}  // namespace
}  // namespace pdo
