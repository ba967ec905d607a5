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

#ifndef PDO_PULLBACK_HPP_
#define PDO_PULLBACK_HPP_

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "pdo/diffop.hpp"
#include "pdo/rate_fit.hpp"
#include "pdo/sweeps.hpp"
#include "pdo/symbols.hpp"

namespace pdo {

// A transition map kappa between chart coordinates (n = 1) with L = kappa^{-1}.
// [lo, hi] is the overlap in the target coordinate.
struct TransitionMap {
  std::string name;
  std::function<double(double)> kappa;
  std::function<double(double)> dkappa;
  std::function<double(double)> d2kappa;
  std::function<double(double)> inverse;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

TransitionMap identity_map();
// slope x + shift.
TransitionMap affine_map(double slope, double shift);
// x + epsilon sin x, |epsilon| < 1; inverse by Newton.
TransitionMap sine_map(double epsilon);

// (L(x) - L(y)) / (x - y), with the limit L'(x) when x = y. Below
// |x - y| < 1e-6 it uses L'((x+y)/2), exact to O(|x - y|^2).
double kappa_tilde(const TransitionMap& map, double x, double y);

// alpha_0 = chi(L)^2 b(L, kappa'(L) xi); order 1 adds
// (i/2) chi(L)^2 f(x) (d_xi b)(L, kappa'(L) xi) with f = d_x [kappa'(L(x))].
// chi is given in the source coordinate. b's xi derivative is analytic when
// available, otherwise a fourth-order central difference.
SymbolFunction pullback_symbol(const TransitionMap& map, const SymbolFunction& b,
                               std::function<double(double)> chi, int order);
// Sampled form; requires an analytic source on b.
SampledSymbol pullback_symbol(const TransitionMap& map, const SampledSymbol& b,
                              std::function<double(double)> chi, int order);

// Smooth cutoff supported in [0.3, 2 pi - 0.3] (mod 2 pi), peak 1.
double pullback_cutoff(double x);

struct PullbackResult {
  std::string map;
  int order = 0;
  std::vector<SweepPoint> points;  // (h, ||B - alpha^w||_2)
  double constant = 0.0;           // max error / h
  RateFit fit;                     // slope >= 0.8
};

// B = (chi o L)^w p_h^w (chi o L)^w with p_h = e^{-h q_kappa}, q_kappa the Weyl
// symbol of (kappa^{-1})^* q kappa^*, against alpha^w with b = e^{-h q}. Dense
// on a 2 pi periodic grid; kappa must commute with 2 pi shifts.
PullbackResult check_pullback_residual(const TransitionMap& map, const DiffOperator& q,
                                       const std::function<double(double)>& chi,
                                       const std::vector<double>& h_list,
                                       const PeriodicGrid& grid, int order);

}  // namespace pdo

#endif  // PDO_PULLBACK_HPP_
