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

#include "pdo/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace pdo {

double smoothstep(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / s);
  const double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

double Arc::offset(double x) const {
  double d = std::remainder(x - center, kTwoPi);
  if (d <= -kPi) d += kTwoPi;
  return d;
}

bool Arc::contains(double x) const { return std::abs(offset(x)) < half_width; }

double Chart::iota(double z) const {
  return periodic ? z : arc.center + (z + epsilon * std::sin(z)) / scale;
}
double Chart::diota(double z) const {
  return periodic ? 1.0 : (1.0 + epsilon * std::cos(z)) / scale;
}
double Chart::d2iota(double z) const { return periodic ? 0.0 : -epsilon * std::sin(z) / scale; }

double Chart::psi(double x) const {
  if (periodic) {
    double r = std::fmod(x, kTwoPi);
    return r < 0 ? r + kTwoPi : r;
  }
  const double d = arc.offset(x) * scale;
  double z = d;
  for (int it = 0; it < 60; ++it) {
    const double step = (z + epsilon * std::sin(z) - d) / (1.0 + epsilon * std::cos(z));
    z -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return z;
}

double Chart::box_length() const { return periodic ? kTwoPi : 3.0 * local_half_width; }
double Chart::box_offset() const { return periodic ? 0.0 : 1.5 * local_half_width; }

Chart make_chart(double center, double half_width, double epsilon, double scale) {
  if (!(std::abs(epsilon) < 1.0)) throw Error("epsilon", "|epsilon| < 1 keeps iota monotone");
  if (!(scale > 0)) throw Error("scale", "must be positive");
  if (!(half_width > 0 && half_width < kPi)) throw Error("half_width", "must be in (0, pi)");
  Chart c;
  c.arc = {center, half_width};
  c.epsilon = epsilon;
  c.scale = scale;
  c.periodic = false;
  c.local_half_width = 0.0;
  // psi at both arc ends; the local interval is symmetric, so take the larger.
  const double zp = c.psi(center + half_width * (1 - 1e-15));
  const double zm = c.psi(center - half_width * (1 - 1e-15));
  c.local_half_width = std::max(std::abs(zp), std::abs(zm));
  return c;
}

Chart periodic_chart() {
  Chart c;
  c.arc = {kPi, kPi};
  c.periodic = true;
  c.local_half_width = kPi;
  return c;
}

// ---------------------------------------------------------------------------

ChartAtlas::ChartAtlas(std::vector<Chart> charts, std::vector<double> plateau,
                       std::vector<double> support, std::vector<CoarseChart> coarse,
                       std::vector<int> coarse_of, AtlasOptions opts)
    : charts_(std::move(charts)),
      plateau_(std::move(plateau)),
      support_(std::move(support)),
      coarse_(std::move(coarse)),
      coarse_of_(std::move(coarse_of)),
      opts_(opts) {
  const std::size_t k = charts_.size();
  if (k == 0) throw Error("charts", "empty atlas");
  if (plateau_.size() != k || support_.size() != k || coarse_of_.size() != k)
    throw Error("charts", "per-chart parameter count mismatch");
  if (opts_.global_points < 8 || opts_.global_points % 2)
    throw Error("global_points", "must be even and >= 8");
  if (opts_.local_points < 8 || opts_.local_points % 2)
    throw Error("local_points", "must be even and >= 8");
  for (std::size_t i = 0; i < k; ++i) {
    if (coarse_of_[i] < 0 || coarse_of_[i] >= static_cast<int>(coarse_.size()))
      throw Error("coarse_of", "index out of range");
    const Chart& c = charts_[i];
    if (c.periodic) continue;
    if (!(plateau_[i] < support_[i] && support_[i] < c.arc.half_width))
      throw Error("support", "need plateau < support < half width");
    // supp phi_i must sit at least two cells inside theta_i on both grids.
    const double margin = c.arc.half_width - support_[i];
    const double global_cell = kTwoPi / opts_.global_points;
    if (margin < 2.0 * global_cell) throw Error("support_margin", "below two global cells");
    const double zs = std::max(std::abs(c.psi(c.arc.center + support_[i])),
                               std::abs(c.psi(c.arc.center - support_[i])));
    const double local_cell = c.box_length() / opts_.local_points;
    if (c.local_half_width - zs < 2.0 * local_cell)
      throw Error("support_margin", "below two local cells");
  }

  neighbors_.resize(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      const Arc& a = charts_[i].arc;
      const Arc& b = charts_[l].arc;
      const bool meet = charts_[i].periodic || charts_[l].periodic ||
                        std::abs(a.offset(b.center)) < a.half_width + b.half_width;
      if (meet) neighbors_[i].push_back(static_cast<int>(l));
    }

  const int fp = opts_.fine_points;
  std::vector<RVec> b(k, RVec(fp));
  RVec total = RVec::Zero(fp);
  for (std::size_t i = 0; i < k; ++i)
    for (int j = 0; j < fp; ++j) {
      b[i][j] = bump(static_cast<int>(i), j * kTwoPi / fp);
      total[j] += b[i][j] * b[i][j];
    }
  if (total.minCoeff() <= 1e-300) throw Error("charts", "partition does not cover S^1");
  for (std::size_t i = 0; i < k; ++i) {
    CVec v(fp);
    for (int j = 0; j < fp; ++j) v[j] = b[i][j] / std::sqrt(total[j]);
    phi_fields_.emplace_back(kTwoPi, std::move(v));
  }

  const int ng = opts_.global_points;
  const int nl = opts_.local_points;
  for (std::size_t i = 0; i < k; ++i) {
    const int ii = static_cast<int>(i);
    const Chart& c = charts_[i];
    RVec pg(ng);
    for (int j = 0; j < ng; ++j) pg[j] = phi(ii, j * kTwoPi / ng);
    phi_global_.push_back(pg);
    const PeriodicGrid lg = local_grid(ii);
    const int mid = 2 * lg.points(0);
    RVec ys(mid);
    for (int j = 0; j < mid; ++j) ys[j] = c.iota(j * lg.length(0) / mid - c.box_offset());
    sampling_.push_back(trig_interpolation_matrix(fp, kTwoPi, ys).real());
    if (c.periodic) {
      restriction_.push_back(CMat::Identity(ng, ng));
      extension_.push_back(CMat::Identity(ng, ng));
      continue;
    }
    const double box = c.box_length();
    const double off = c.box_offset();
    CMat r = CMat::Zero(nl, ng);
    for (int l = 0; l < nl; ++l) {
      const double z = l * box / nl - off;
      if (std::abs(z) >= c.local_half_width) continue;
      RVec y(1);
      y[0] = c.iota(z);
      r.row(l) = trig_interpolation_matrix(ng, kTwoPi, y).row(0);
    }
    CMat e = CMat::Zero(ng, nl);
    for (int j = 0; j < ng; ++j) {
      const double x = j * kTwoPi / ng;
      if (!c.arc.contains(x)) continue;
      RVec y(1);
      y[0] = c.psi(x) + off;
      e.row(j) = trig_interpolation_matrix(nl, box, y).row(0);
    }
    restriction_.push_back(std::move(r));
    extension_.push_back(std::move(e));
  }
}

PeriodicGrid ChartAtlas::local_grid(int i) const {
  const Chart& c = chart(i);
  if (c.periodic) return global_grid();
  return PeriodicGrid(1, opts_.local_points, c.box_length());
}

double ChartAtlas::bump(int i, double x) const {
  const Chart& c = charts_[i];
  if (c.periodic) return 1.0;
  const double d = std::abs(c.arc.offset(x));
  return smoothstep((support_[i] - d) / (support_[i] - plateau_[i]));
}

double ChartAtlas::phi(int i, double x) const {
  double total = 0.0;
  for (int l = 0; l < size(); ++l) {
    const double v = bump(l, x);
    total += v * v;
  }
  return bump(i, x) / std::sqrt(total);
}

std::vector<int> ChartAtlas::second_neighbors(int i) const {
  std::set<int> out;
  for (int l : neighbors(i))
    for (int m : neighbors(l)) out.insert(m);
  return {out.begin(), out.end()};
}

InclusionReport ChartAtlas::inclusion() const {
  InclusionReport r;
  r.ok = true;
  bool any_periodic = false;
  for (int i = 0; i < size(); ++i) {
    const CoarseChart& big = coarse_[coarse_of_[i]];
    bool ok = true;
    if (big.periodic) {
      any_periodic = true;
    } else {
      for (int l : second_neighbors(i)) {
        const Chart& c = charts_[l];
        if (c.periodic ||
            std::abs(big.arc.offset(c.arc.center)) + c.arc.half_width >= big.arc.half_width)
          ok = false;
      }
    }
    r.per_chart.push_back(ok);
    r.ok = r.ok && ok;
  }
  if (any_periodic)
    r.note = "coarse chart is the periodic global angle; closures of all second "
             "neighbours lie in it";
  return r;
}

double ChartAtlas::partition_residual() const {
  RVec total = RVec::Zero(opts_.fine_points);
  for (const auto& f : phi_fields_) total += f.samples().cwiseAbs2();
  return (total.array() - 1.0).abs().maxCoeff();
}

double ChartAtlas::support_margin(int i) const {
  const Chart& c = chart(i);
  if (c.periodic) return std::numeric_limits<double>::infinity();
  return c.arc.half_width - support_.at(i);
}

ChartAtlas two_chart_atlas(const AtlasOptions& opts) {
  const double w = 0.92 * kPi;
  const double r = 0.85 * kPi;
  std::vector<Chart> charts{make_chart(0.0, w, 0.2), make_chart(kPi, w, -0.15)};
  const double plateau = kPi - r;
  return ChartAtlas(std::move(charts), {plateau, plateau}, {r, r},
                    {CoarseChart{Arc{0.0, kPi}, true}, CoarseChart{Arc{kPi, kPi}, true}},
                    {0, 1}, opts);
}

ChartAtlas single_chart_atlas(const AtlasOptions& opts) {
  return ChartAtlas({periodic_chart()}, {0.0}, {kPi}, {CoarseChart{Arc{0.0, kPi}, true}}, {0},
                    opts);
}

}  // namespace pdo
