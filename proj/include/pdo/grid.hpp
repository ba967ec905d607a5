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

#ifndef PDO_GRID_HPP_
#define PDO_GRID_HPP_

#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pdo {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Raised for violated preconditions. `field` names the offending argument.
class Error : public std::runtime_error {
 public:
  Error(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Uniform periodic grid on the box prod_axis [0, L_axis).
// Linear indices are row-major with axis 0 slowest.
class PeriodicGrid {
 public:
  PeriodicGrid(int dim, int points, double length = kTwoPi);
  PeriodicGrid(std::vector<int> points, std::vector<double> lengths);

  int dim() const { return static_cast<int>(n_.size()); }
  int points(int axis) const { return n_[axis]; }
  double length(int axis) const { return l_[axis]; }
  std::size_t size() const { return size_; }

  double spacing(int axis) const { return l_[axis] / n_[axis]; }
  double point(int axis, int j) const { return j * spacing(axis); }
  // Signed wavenumber in FFT order: idx < N/2 -> idx, else idx - N.
  int wavenumber(int axis, int idx) const {
    return idx < n_[axis] / 2 ? idx : idx - n_[axis];
  }
  double frequency(int axis, int idx) const {
    return kTwoPi * wavenumber(axis, idx) / l_[axis];
  }
  // Quadrature weight prod L/N.
  double cell_volume() const;

  // Splits a linear index into per-axis indices (size dim()).
  void unravel(std::size_t linear, int* idx) const;
  std::size_t ravel(const int* idx) const;

  bool operator==(const PeriodicGrid& o) const {
    return n_ == o.n_ && l_ == o.l_;
  }
  bool operator!=(const PeriodicGrid& o) const { return !(*this == o); }

 private:
  std::vector<int> n_;
  std::vector<double> l_;
  std::size_t size_;
};

enum class Domain { kPhysical, kFrequency };

struct GridField {
  GridField(PeriodicGrid g, CVec v, Domain d = Domain::kPhysical);
  PeriodicGrid grid;
  CVec values;
  Domain domain;
};

// Unitary DFT on the grid (FFTW backed). Inputs are physical/frequency
// coefficient vectors of length grid.size().
CVec fft_forward(const PeriodicGrid& grid, const CVec& values);
CVec fft_inverse(const PeriodicGrid& grid, const CVec& coeffs);

GridField fourier_forward(const GridField& f);
GridField fourier_inverse(const GridField& f);

// <xi>^s on the frequency lattice, FFT order.
RVec sobolev_weights(const PeriodicGrid& grid, double s);

GridField apply_sobolev_weight(const GridField& f, double s);
double sobolev_norm(const GridField& f, double s);
double weighted_l2_norm(const GridField& f, const GridField& m);
// Quadrature inner product sum u conj(v) * cell volume.
cplx l2_inner(const GridField& u, const GridField& v);

// Vector-level forms used by the operator code.
CVec apply_sobolev_weight(const PeriodicGrid& grid, const CVec& values,
                          double s);
double sobolev_norm(const PeriodicGrid& grid, const CVec& values, double s);

// Samples a function on the primal grid.
template <class F>
GridField sample_field(const PeriodicGrid& grid, F&& f) {
  CVec v(grid.size());
  std::vector<int> idx(grid.dim());
  std::vector<double> x(grid.dim());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    grid.unravel(p, idx.data());
    for (int a = 0; a < grid.dim(); ++a) x[a] = grid.point(a, idx[a]);
    v[p] = f(x.data());
  }
  return GridField(grid, std::move(v));
}

}  // namespace pdo

#endif  // PDO_GRID_HPP_
