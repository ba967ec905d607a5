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

#include "pdo/diffop.hpp"

namespace pdo {
namespace {

cplx f0(double x) { return std::cos(2 * x) + 0.5 * std::sin(3 * x); }

TEST(CoefficientField, SpectralDerivatives) {
  const auto f = CoefficientField::sample(32, kTwoPi, f0);
  const auto d1 = f.derivative(1);
  const auto d2 = f.derivative(2);
  for (int j = 0; j < 32; ++j) {
    const double x = f.point(j);
    EXPECT_NEAR(std::abs(d1.samples()[j] - (-2 * std::sin(2 * x) + 1.5 * std::cos(3 * x))), 0,
                1e-12);
    EXPECT_NEAR(std::abs(d2.samples()[j] - (-4 * std::cos(2 * x) - 4.5 * std::sin(3 * x))), 0,
                1e-11);
  }
  EXPECT_THROW(f.derivative(-1), Error);
}

TEST(CoefficientField, InterpolatesTrigPolynomials) {
  const auto f = CoefficientField::sample(16, kTwoPi, f0);
  for (double x : {0.1, 1.234, 3.0, 5.9, -0.7, 7.5})
    EXPECT_NEAR(std::abs(f(x) - f0(x)), 0.0, 1e-13);
  RVec ys(3);
  ys << 0.3, 2.2, 4.9;
  const CVec v = trig_interpolation_matrix(16, kTwoPi, ys) * f.samples();
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(v[i] - f0(ys[i])), 0.0, 1e-13);
}

TEST(CoefficientField, GridMismatchThrows) {
  const auto a = CoefficientField::constant(16, kTwoPi, 1.0);
  const auto b = CoefficientField::constant(32, kTwoPi, 1.0);
  EXPECT_THROW(a + b, Error);
}

TEST(DiffOperator, WeylSymbolOfCurvedOperator) {
  const SymbolFunction from_op = weyl_symbol(curved_operator(64));
  const SymbolFunction direct = curved_symbol();
  for (double x : {0.0, 0.9817477042468103, 2.5, 4.4})
    for (double xi : {-7.0, -0.5, 0.0, 1.0, 12.5}) {
      EXPECT_NEAR(std::abs(from_op(0.0, &x, &xi) - direct(0.0, &x, &xi)), 0.0, 1e-11)
          << x << " " << xi;
    }
  ASSERT_TRUE(from_op.ellipticity().has_value());
  EXPECT_NEAR(from_op.ellipticity()->c, 0.25, 1e-12);
}

TEST(DiffOperator, CommutatorWithConstantVanishes) {
  const DiffOperator op = curved_operator(64);
  const auto c = CoefficientField::constant(64, kTwoPi, 2.5);
  EXPECT_LT(commutator(c, op).max_abs(), 1e-13);
}

TEST(DiffOperator, MultiplyRightIsCompositionWithMultiplication) {
  const DiffOperator op = curved_operator(64);
  const auto phi = CoefficientField::sample(64, kTwoPi, [](double x) { return 2.0 + std::sin(x); });
  const CoefficientField u = CoefficientField::sample(64, kTwoPi, f0);
  const CVec lhs = multiply_right(op, phi).apply(u.samples());
  const CVec rhs = op.apply((phi * u).samples());
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-11);
  const CVec left = commutator(phi, op).apply(u.samples());
  const CVec expect = phi.samples().cwiseProduct(op.apply(u.samples())) - rhs;
  EXPECT_LT((left - expect).cwiseAbs().maxCoeff(), 1e-11);
}

// (L u)(iota(y)) = (L~ (u o iota))(y) for a diffeomorphism of the circle.
TEST(DiffOperator, ChangeOfCoordinatesIntertwines) {
  const int m = 128;
  const DiffOperator op = curved_operator(m);
  auto iota = [](double y) { return y + 0.2 * std::sin(y); };
  auto diota = [](double y) { return 1.0 + 0.2 * std::cos(y); };
  auto d2iota = [](double y) { return -0.2 * std::sin(y); };
  const DiffOperator t = change_coordinates(op, m, kTwoPi, iota, diota, d2iota);
  const auto v = CoefficientField::sample(m, kTwoPi, [&](double y) { return f0(iota(y)); });
  const CoefficientField lu(kTwoPi, op.apply(CoefficientField::sample(m, kTwoPi, f0).samples()));
  const CVec got = t.apply(v.samples());
  for (int j = 0; j < m; ++j) EXPECT_NEAR(std::abs(got[j] - lu(iota(v.point(j)))), 0.0, 1e-9);
}

TEST(DiffOperator, ChangeOfCoordinatesRejectsDegenerateMap) {
  const DiffOperator op = curved_operator(32);
  EXPECT_THROW(change_coordinates(
                   op, 32, kTwoPi, [](double y) { return y; }, [](double) { return 0.0; },
                   [](double) { return 0.0; }),
               Error);
}

}  // namespace
}  // namespace pdo
