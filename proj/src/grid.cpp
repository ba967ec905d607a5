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

#include "pdo/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace pdo {

PeriodicGrid::PeriodicGrid(int dim, int points, double length)
    : PeriodicGrid(std::vector<int>(dim > 0 ? dim : 0, points),
                   std::vector<double>(dim > 0 ? dim : 0, length)) {
  if (dim <= 0) throw Error("dim", "must be positive");
}

PeriodicGrid::PeriodicGrid(std::vector<int> points, std::vector<double> lengths)
    : n_(std::move(points)), l_(std::move(lengths)), size_(1) {
  if (n_.empty()) throw Error("dim", "must be positive");
  if (n_.size() != l_.size()) throw Error("box_length", "one length per axis");
  for (std::size_t a = 0; a < n_.size(); ++a) {
    if (n_[a] < 8 || n_[a] % 2 != 0)
      throw Error("points_per_dim", "must be even and >= 8");
    if (!(l_[a] > 0)) throw Error("box_length", "must be positive");
    size_ *= static_cast<std::size_t>(n_[a]);
  }
}

double PeriodicGrid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim(); ++a) v *= spacing(a);
  return v;
}

void PeriodicGrid::unravel(std::size_t linear, int* idx) const {
  for (int a = dim() - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(linear % n_[a]);
    linear /= n_[a];
  }
}

std::size_t PeriodicGrid::ravel(const int* idx) const {
  std::size_t p = 0;
  for (int a = 0; a < dim(); ++a) p = p * n_[a] + idx[a];
  return p;
}

GridField::GridField(PeriodicGrid g, CVec v, Domain d)
    : grid(std::move(g)), values(std::move(v)), domain(d) {
  if (static_cast<std::size_t>(values.size()) != grid.size())
    throw Error("values", "size does not match grid");
}

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Plan {
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  std::size_t size = 0;
  ~Plan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
    if (buf) fftw_free(buf);
  }
};

Plan& plan_for(const PeriodicGrid& grid) {
  thread_local std::map<std::vector<int>, std::unique_ptr<Plan>> cache;
  std::vector<int> dims(grid.dim());
  for (int a = 0; a < grid.dim(); ++a) dims[a] = grid.points(a);
  auto it = cache.find(dims);
  if (it != cache.end()) return *it->second;
  auto p = std::make_unique<Plan>();
  p->size = grid.size();
  std::lock_guard<std::mutex> lock(planner_mutex());
  p->buf = fftw_alloc_complex(p->size);
  p->fwd = fftw_plan_dft(grid.dim(), dims.data(), p->buf, p->buf,
                         FFTW_FORWARD, FFTW_ESTIMATE);
  p->inv = fftw_plan_dft(grid.dim(), dims.data(), p->buf, p->buf,
                         FFTW_BACKWARD, FFTW_ESTIMATE);
  auto& ref = *p;
  cache.emplace(std::move(dims), std::move(p));
  return ref;
}

CVec run(const PeriodicGrid& grid, const CVec& in, bool forward) {
  if (static_cast<std::size_t>(in.size()) != grid.size())
    throw Error("values", "size mismatch with grid");
  Plan& p = plan_for(grid);
  auto* b = reinterpret_cast<cplx*>(p.buf);
  for (std::size_t i = 0; i < p.size; ++i) b[i] = in[i];
  fftw_execute(forward ? p.fwd : p.inv);
  const double scale = 1.0 / std::sqrt(static_cast<double>(p.size));
  CVec out(in.size());
  for (std::size_t i = 0; i < p.size; ++i) out[i] = b[i] * scale;
  return out;
}

}  // namespace

CVec fft_forward(const PeriodicGrid& grid, const CVec& values) {
  return run(grid, values, true);
}

CVec fft_inverse(const PeriodicGrid& grid, const CVec& coeffs) {
  return run(grid, coeffs, false);
}

GridField fourier_forward(const GridField& f) {
  if (f.domain != Domain::kPhysical)
    throw Error("f", "expected a physical-side field");
  return GridField(f.grid, fft_forward(f.grid, f.values), Domain::kFrequency);
}

GridField fourier_inverse(const GridField& f) {
  if (f.domain != Domain::kFrequency)
    throw Error("f", "expected a frequency-side field");
  return GridField(f.grid, fft_inverse(f.grid, f.values), Domain::kPhysical);
}

RVec sobolev_weights(const PeriodicGrid& grid, double s) {
  RVec w(grid.size());
  std::vector<int> idx(grid.dim());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    grid.unravel(p, idx.data());
    double r2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) {
      const double xi = grid.frequency(a, idx[a]);
      r2 += xi * xi;
    }
    w[p] = std::pow(1.0 + r2, 0.5 * s);
  }
  return w;
}

CVec apply_sobolev_weight(const PeriodicGrid& grid, const CVec& values,
                          double s) {
  if (s == 0.0) return values;
  CVec c = fft_forward(grid, values);
  c.array() *= sobolev_weights(grid, s).array();
  return fft_inverse(grid, c);
}

double sobolev_norm(const PeriodicGrid& grid, const CVec& values, double s) {
  CVec c = fft_forward(grid, values);
  const RVec w = sobolev_weights(grid, s);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) acc += w[i] * w[i] * std::norm(c[i]);
  return std::sqrt(acc * grid.cell_volume());
}

GridField apply_sobolev_weight(const GridField& f, double s) {
  if (f.domain == Domain::kFrequency) {
    CVec c = f.values;
    c.array() *= sobolev_weights(f.grid, s).array();
    return GridField(f.grid, std::move(c), Domain::kFrequency);
  }
  return GridField(f.grid, apply_sobolev_weight(f.grid, f.values, s));
}

double sobolev_norm(const GridField& f, double s) {
  if (f.domain == Domain::kFrequency) {
    const RVec w = sobolev_weights(f.grid, s);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < f.values.size(); ++i)
      acc += w[i] * w[i] * std::norm(f.values[i]);
    return std::sqrt(acc * f.grid.cell_volume());
  }
  return sobolev_norm(f.grid, f.values, s);
}

double weighted_l2_norm(const GridField& f, const GridField& m) {
  if (f.grid != m.grid) throw Error("m", "grid mismatch");
  if (f.domain != Domain::kPhysical || m.domain != Domain::kPhysical)
    throw Error("f", "expected physical-side fields");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < f.values.size(); ++i) {
    const double mi = m.values[i].real();
    if (!(mi > 0.0) || std::abs(m.values[i].imag()) > 0.0)
      throw Error("m", "weight must be real and positive");
    acc += std::norm(f.values[i]) * mi;
  }
  return std::sqrt(acc * f.grid.cell_volume());
}

cplx l2_inner(const GridField& u, const GridField& v) {
  if (u.grid != v.grid || u.domain != v.domain)
    throw Error("v", "grid or domain mismatch");
  // Eigen's dot conjugates the left argument.
  return v.values.dot(u.values) * u.grid.cell_volume();
}

}  // namespace pdo
