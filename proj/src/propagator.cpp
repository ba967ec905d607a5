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

#include "pdo/propagator.hpp"

#include <algorithm>
#include <cmath>

namespace pdo {

Subdivision::Subdivision(std::vector<double> knots) : knots_(std::move(knots)), mesh_(0.0) {
  if (knots_.size() < 2) throw Error("knots", "need at least two knots");
  if (knots_.front() != 0.0) throw Error("knots", "first knot must be 0");
  for (std::size_t j = 1; j < knots_.size(); ++j) {
    const double d = knots_[j] - knots_[j - 1];
    if (!(d > 0)) throw Error("knots", "must be strictly increasing");
    mesh_ = std::max(mesh_, d);
  }
}

Subdivision Subdivision::uniform(double final_time, int steps) {
  if (steps < 1) throw Error("steps", "must be >= 1");
  if (!(final_time > 0)) throw Error("final_time", "must be positive");
  std::vector<double> k(steps + 1);
  for (int j = 0; j <= steps; ++j) k[j] = final_time * j / steps;
  k.back() = final_time;
  return Subdivision(std::move(k));
}

int Subdivision::locate(double t) const {
  if (t < 0.0 || t > final_time()) throw Error("t", "outside [0, T]");
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  const int k = static_cast<int>(it - knots_.begin()) - 1;
  return std::min(k, steps() - 1);
}

QuantizedOperator step(const SymbolFunction& q, double t, double t_prime,
                       const PeriodicGrid& grid, QuantPath path) {
  if (t_prime < t) throw Error("t_prime", "must be >= t");
  return quantize(exp_symbol(q, t, t_prime - t, grid), path);
}

MultiProduct::MultiProduct(std::shared_ptr<const SymbolFunction> q, Subdivision subdivision,
                           PeriodicGrid grid, QuantPath path)
    : q_(std::move(q)), sub_(std::move(subdivision)), grid_(std::move(grid)), path_(path) {
  if (!q_) throw Error("symbol_family", "null symbol");
  if (q_->dim() != grid_.dim()) throw Error("grid", "dimension mismatch with symbol");
  cache_.resize(sub_.steps());
}

const QuantizedOperator& MultiProduct::knot_step(int j) const {
  if (j < 0 || j >= sub_.steps()) throw Error("j", "knot index out of range");
  std::lock_guard<std::mutex> lock(mu_);
  if (!cache_[j])
    cache_[j] = std::make_unique<QuantizedOperator>(
        step(*q_, sub_.knot(j), sub_.knot(j + 1), grid_, path_));
  return *cache_[j];
}

CVec MultiProduct::apply(double t, const CVec& u0) const {
  if (static_cast<std::size_t>(u0.size()) != grid_.size()) throw Error("u0", "size mismatch");
  const int k = sub_.locate(t);
  CVec v = u0;
  for (int i = 0; i < k; ++i) v = knot_step(i).apply(v);
  if (t == sub_.knot(k + 1)) return knot_step(k).apply(v);
  if (t == sub_.knot(k)) return v;
  return step(*q_, sub_.knot(k), t, grid_, path_).apply(v);
}

GridField MultiProduct::apply(double t, const GridField& u0) const {
  if (u0.grid != grid_) throw Error("u0", "grid mismatch");
  if (u0.domain != Domain::kPhysical) throw Error("u0", "expected physical values");
  return GridField(grid_, apply(t, u0.values));
}

std::vector<CVec> MultiProduct::knot_values(const CVec& u0) const {
  std::vector<CVec> out{u0};
  for (int i = 0; i < sub_.steps(); ++i) out.push_back(knot_step(i).apply(out.back()));
  return out;
}

std::vector<CMat> multiproduct_knot_matrices(const SymbolFunction& q, const Subdivision& sub,
                                             const PeriodicGrid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  std::vector<CMat> out{CMat::Identity(n, n)};
  for (int i = 0; i < sub.steps(); ++i) {
    const CMat p = step(q, sub.knot(i), sub.knot(i + 1), grid).fourier_matrix();
    out.push_back(p * out.back());
  }
  return out;
}

}  // namespace pdo
