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

#ifndef PDO_MANIFOLD_HPP_
#define PDO_MANIFOLD_HPP_

#include <functional>
#include <vector>

#include "pdo/atlas.hpp"
#include "pdo/diffop.hpp"
#include "pdo/propagator.hpp"
#include "pdo/rate_fit.hpp"
#include "pdo/symbols.hpp"

namespace pdo {

// g(t, x) = g0(x) / (1 + f(t)) on S^1, so A(t) = (1 + f(t)) A(0) and the
// time regularity is that of the profile.
struct MetricField {
  std::function<double(double)> g0;
  TimeProfile profile;  // f empty means time independent

  double g(double t, double x) const { return g0(x) / rate(t); }
  double rate(double t) const { return profile.f ? 1.0 + profile.f(t) : 1.0; }
  // int_0^t rate.
  double integrated_rate(double t) const { return profile.F ? t + profile.F(t) : t; }
  double alpha() const { return profile.f ? profile.alpha : 1.0; }
};

MetricField flat_metric();
// g0 = 1 + 0.3 sin x.
MetricField curved_metric(const TimeProfile& profile);

// A(t) u = -g^{-1/2} (g^{1/2} g^{-1} u')' = -(1/g) u'' + g'/(2 g^2) u'.
DiffOperator build_laplace_beltrami(const MetricField& metric, double t,
                                    int fine_points = 2048);

struct ManifoldOperatorQ {
  double t = 0.0;
  DiffOperator q2;  // A
  DiffOperator q1;  // -sum [phi_i, Q2] phi_i
  DiffOperator q0;  // -sum [phi_i, Q1] phi_i
  std::vector<SymbolFunction> chart_symbols;   // Weyl symbols on the local boxes
  std::vector<SymbolFunction> coarse_symbols;  // Weyl symbols in the coarse coordinates
  double identity_residual = 0.0;  // probe check of sum phi_i Q phi_i = A

  DiffOperator total() const { return q2 + q1 + q0; }
};

// Throws Error("identity", ...) if the probe check exceeds 1e-8.
ManifoldOperatorQ build_Q(const DiffOperator& a, const ChartAtlas& atlas, double t = 0.0);

// Max relative error of sum_i phi_i Q phi_i u - A u over cos kx, sin kx, k <= 8.
double probe_identity_residual(const DiffOperator& q, const DiffOperator& a,
                               const ChartAtlas& atlas);

// Local coefficients of Q in chart i on the 2N-point midpoint grid of the
// local box. Outside |z| < local_half_width they are blended to -d^2 over
// [1, 1.4] local_half_width so the box is periodic.
DiffOperator chart_coefficients(const DiffOperator& q, const ChartAtlas& atlas, int i);
const SymbolFunction& chart_symbol(const ManifoldOperatorQ& q, int i);

// phi_i psi_i^* p^w (psi_i^{-1})^* phi_i with p = e^{-(t' - t) q_i(t)}, as a
// physical-basis matrix on the global grid. t' = t gives phi_i^2 exactly.
CMat local_step(const ManifoldOperatorQ& q, const ChartAtlas& atlas, int i, double t_prime);
// sum_i local_step in chart order.
CMat global_step(const ManifoldOperatorQ& q, const ChartAtlas& atlas, double t_prime);

// Q(t) rebuilt at every knot from the metric.
std::vector<CMat> manifold_knot_matrices(const MetricField& metric, const ChartAtlas& atlas,
                                         const Subdivision& sub);
GridField manifold_multiproduct(const MetricField& metric, const ChartAtlas& atlas,
                                const Subdivision& sub, double t, const GridField& u0);

// ||g0^{1/4} M g0^{-1/4}||_2: the L^2(dv) operator norm, dv = g(0,.)^{1/2} dx.
double weighted_l2_norm(const MetricField& metric, const PeriodicGrid& grid, const CMat& m);

struct StepNormRow {
  double h = 0.0;
  double norm = 0.0;
  double ratio = 0.0;  // (norm - 1) / h
};

struct L2StabilityResult {
  std::vector<StepNormRow> rows;
  double c_fit = 0.0;      // max(0, max ratio)
  double variation = 0.0;  // spread of the three finest ratios over c_fit
  bool bounded = false;    // max ratio on the finer half <= 1.5 x that on the coarser half
};

L2StabilityResult l2_stability_check(const ManifoldOperatorQ& q, const ChartAtlas& atlas,
                                     const MetricField& metric,
                                     const std::vector<double>& h_list);

// Global spectral solution operator exp(-int_0^T rate A(0)) in the physical basis,
// via the symmetric form S = g0^{1/4} A(0) g0^{-1/4} with the Nyquist mode of
// the derivative removed.
CMat manifold_reference(const MetricField& metric, const PeriodicGrid& grid, double final_time);

struct ManifoldConvergenceRow {
  int steps = 0;
  double mesh = 0.0;
  double error = 0.0;  // weighted L^2 norm of Pi (W - U) Pi, Pi drops Nyquist
};

struct ManifoldConvergenceResult {
  double final_time = 0.0;
  double alpha = 0.0;
  std::vector<ManifoldConvergenceRow> rows;
  RateFit fit;  // band alpha +- 0.25
};

ManifoldConvergenceResult manifold_convergence(const MetricField& metric,
                                               const ChartAtlas& atlas, double final_time,
                                               const std::vector<int>& n_list);

}  // namespace pdo

#endif  // PDO_MANIFOLD_HPP_
