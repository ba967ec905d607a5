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

#include "pdo/pullback.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "pdo/weyl.hpp"

namespace pdo {

TransitionMap identity_map() {
  TransitionMap m;
  m.name = "identity";
  m.kappa = [](double x) { return x; };
  m.dkappa = [](double) { return 1.0; };
  m.d2kappa = [](double) { return 0.0; };
  m.inverse = [](double y) { return y; };
  return m;
}

TransitionMap affine_map(double slope, double shift) {
  if (slope == 0.0) throw Error("slope", "must be nonzero");
  TransitionMap m;
  m.name = "affine";
  m.kappa = [=](double x) { return slope * x + shift; };
  m.dkappa = [=](double) { return slope; };
  m.d2kappa = [](double) { return 0.0; };
  m.inverse = [=](double y) { return (y - shift) / slope; };
  return m;
}

TransitionMap sine_map(double epsilon) {
  if (!(std::abs(epsilon) < 1.0)) throw Error("epsilon", "|epsilon| < 1 keeps the map monotone");
  TransitionMap m;
  m.name = "sine";
  m.kappa = [=](double x) { return x + epsilon * std::sin(x); };
  m.dkappa = [=](double x) { return 1.0 + epsilon * std::cos(x); };
  m.d2kappa = [=](double x) { return -epsilon * std::sin(x); };
  m.inverse = [=](double y) {
    double x = y;
    for (int it = 0; it < 60; ++it) {
      const double step = (x + epsilon * std::sin(x) - y) / (1.0 + epsilon * std::cos(x));
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    return x;
  };
  return m;
}

double kappa_tilde(const TransitionMap& map, double x, double y) {
  if (x < map.lo || x > map.hi) throw Error("x", "outside overlap");
  if (y < map.lo || y > map.hi) throw Error("y", "outside overlap");
  if (std::abs(x - y) < 1e-6) return 1.0 / map.dkappa(map.inverse(0.5 * (x + y)));
  return (map.inverse(x) - map.inverse(y)) / (x - y);
}

double pullback_cutoff(double x) {
  const double r = std::fmod(x, kTwoPi);
  const double s = ((r < 0 ? r + kTwoPi : r) - 0.3) / (kTwoPi - 0.6);
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return std::exp(-1.0 / s - 1.0 / (1.0 - s) + 4.0);
}

namespace {

cplx xi_derivative(const SymbolFunction& b, double t, double x, double xi) {
  if (b.has_derivatives()) {
    const int ax = 0, bxi = 1;
    return b.derivative(t, &x, &xi, &ax, &bxi);
  }
  const double d = 1e-3 * std::max(1.0, std::abs(xi));
  auto at = [&](double z) { return b(t, &x, &z); };
  return (8.0 * (at(xi + d) - at(xi - d)) - (at(xi + 2 * d) - at(xi - 2 * d))) / (12.0 * d);
}

}  // namespace

SymbolFunction pullback_symbol(const TransitionMap& map, const SymbolFunction& b,
                               std::function<double(double)> chi, int order) {
  if (b.dim() != 1) throw Error("b", "pullback is implemented for n = 1");
  if (order != 0 && order != 1) throw Error("order", "must be 0 or 1");
  SymbolFunction out(
      1,
      [map, b, chi, order](double t, const double* x, const double* xi) {
        const double l = map.inverse(*x);
        const double k1 = map.dkappa(l);
        const double c = chi(l);
        const double eta = k1 * (*xi);
        cplx v = c * c * b(t, &l, &eta);
        if (order == 1) {
          const double f = map.d2kappa(l) / k1;
          if (f != 0.0) v += cplx(0.0, 0.5) * c * c * f * xi_derivative(b, t, l, eta);
        }
        return v;
      },
      b.order());
  out.with_time_independent(b.time_independent());
  return out;
}

SampledSymbol pullback_symbol(const TransitionMap& map, const SampledSymbol& b,
                              std::function<double(double)> chi, int order) {
  if (!b.source()) throw Error("b", "sampled symbol needs an analytic source");
  const SymbolFunction p = pullback_symbol(map, *b.source(), std::move(chi), order);
  return sample(p, b.time_stamp(), b.grid());
}

PullbackResult check_pullback_residual(const TransitionMap& map, const DiffOperator& q,
                                       const std::function<double(double)>& chi,
                                       const std::vector<double>& h_list,
                                       const PeriodicGrid& grid, int order) {
  if (grid.dim() != 1 || grid.length(0) != kTwoPi) throw Error("grid", "expected 1-D 2 pi grid");
  for (double x : {0.0, 1.0, 2.5})
    if (std::abs(map.kappa(x + kTwoPi) - map.kappa(x) - kTwoPi) > 1e-12)
      throw Error("kappa", "must commute with 2 pi shifts");
  const int n = grid.points(0);
  const SymbolFunction q_src = weyl_symbol(q);
  // q_kappa from the coefficients in the new coordinate X, x = L(X).
  const DiffOperator moved = change_coordinates(
      q, 2 * n, kTwoPi, map.inverse, [&](double y) { return 1.0 / map.dkappa(map.inverse(y)); },
      [&](double y) {
        const double k1 = map.dkappa(map.inverse(y));
        return -map.d2kappa(map.inverse(y)) / (k1 * k1 * k1);
      });
  const SymbolFunction q_kappa = weyl_symbol(moved);
  SymbolFunction cut(
      1, [&](double, const double* x, const double*) { return cplx(chi(map.inverse(*x))); },
      0.0);
  const CMat c = quantize(sample(cut, 0.0, grid)).fourier_matrix();

  PullbackResult res;
  res.map = map.name;
  res.order = order;
  std::vector<std::pair<double, double>> pts;
  for (double h : h_list) {
    if (!(h > 0)) throw Error("h_list", "steps must be positive");
    const CMat p = quantize(exp_symbol(q_kappa, 0.0, h, grid)).fourier_matrix();
    const CMat b = c * p * c;
    const SymbolFunction alpha = pullback_symbol(map, symbol_exp(q_src, 0.0, h), chi, order);
    const CMat a = quantize(sample(alpha, 0.0, grid)).fourier_matrix();
    const double err = dense_operator_norm(b - a);
    res.points.push_back({h, err});
    res.constant = std::max(res.constant, err / h);
    pts.emplace_back(h, err);
  }
  res.fit = fit_rate(pts, 0.8);
  return res;
}

}  // namespace pdo
