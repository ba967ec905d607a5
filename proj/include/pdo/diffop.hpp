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

#ifndef PDO_DIFFOP_HPP_
#define PDO_DIFFOP_HPP_

#include <functional>

#include "pdo/grid.hpp"
#include "pdo/symbols.hpp"

namespace pdo {

// A periodic function sampled at x_j = j L / m, j in [0, m), with spectral
// derivatives and trigonometric interpolation between samples.
class CoefficientField {
 public:
  CoefficientField() = default;
  CoefficientField(double length, CVec samples);
  static CoefficientField sample(int points, double length,
                                 const std::function<cplx(double)>& f);
  static CoefficientField constant(int points, double length, cplx c);

  int points() const { return static_cast<int>(v_.size()); }
  double length() const { return l_; }
  double point(int j) const { return j * l_ / points(); }
  const CVec& samples() const { return v_; }

  // Spectral derivative; the Nyquist mode is dropped for odd orders.
  CoefficientField derivative(int order = 1) const;
  // Exact at sample points, trigonometric interpolation elsewhere.
  cplx operator()(double x) const;
  CVec evaluate(const RVec& xs) const;

  CoefficientField operator+(const CoefficientField& o) const;
  CoefficientField operator-(const CoefficientField& o) const;
  CoefficientField operator*(const CoefficientField& o) const;
  CoefficientField operator*(cplx c) const;
  double max_abs() const { return v_.cwiseAbs().maxCoeff(); }

 private:
  void check(const CoefficientField& o) const;
  double l_ = kTwoPi;
  CVec v_;
};

// Interpolation weights so that (row y) . samples = trig interpolant at y.
// The Nyquist mode is symmetrized (cos only), so real data stays real.
CMat trig_interpolation_matrix(int points, double length, const RVec& ys);

// u -> c2 u'' + c1 u' + c0 u with periodic coefficients on one grid.
struct DiffOperator {
  CoefficientField c2;
  CoefficientField c1;
  CoefficientField c0;

  int points() const { return c2.points(); }
  double length() const { return c2.length(); }
  DiffOperator operator+(const DiffOperator& o) const;
  DiffOperator operator-(const DiffOperator& o) const;
  DiffOperator operator*(cplx s) const;
  // Acting on samples of u on the coefficient grid (spectral derivatives).
  CVec apply(const CVec& u) const;
  double max_abs() const;
};

DiffOperator zero_operator(int points, double length);
// phi o L  (multiply after).
DiffOperator multiply_left(const CoefficientField& phi, const DiffOperator& op);
// L o phi  (multiply before).
DiffOperator multiply_right(const DiffOperator& op, const CoefficientField& phi);
// [phi, L] = phi o L - L o phi.
DiffOperator commutator(const CoefficientField& phi, const DiffOperator& op);

// Coefficients in the coordinate y with x = iota(y): (iota^* o L o (iota^{-1})^*)
// evaluated on the points of `target` grid (points, length). The
// coefficient fields of op are interpolated at iota(y) mod op.length().
DiffOperator change_coordinates(const DiffOperator& op, int points, double length,
                                const std::function<double(double)>& iota,
                                const std::function<double(double)>& diota,
                                const std::function<double(double)>& d2iota);

// Left symbol -c2 xi^2 + i c1 xi + c0 turned into the Weyl symbol by the
// finite amplitude-to-Weyl expansion
//   -c2 xi^2 + i (c1 - c2') xi + c0 - c1'/2 + c2''/4.
// Coefficients are looked up exactly on the grid of op and interpolated off it.
SymbolFunction weyl_symbol(const DiffOperator& op);

DiffOperator sample_operator(int points, double length, const std::function<cplx(double)>& c2,
                             const std::function<cplx(double)>& c1,
                             const std::function<cplx(double)>& c0);
// The differential operator whose Weyl symbol is curved_symbol():
// c2 = -(1 + cos(x)/2), c1 = 3 sin(x)/2, c0 = 5 cos(x)/8.
DiffOperator curved_operator(int points = 2048);

}  // namespace pdo

#endif  // PDO_DIFFOP_HPP_
