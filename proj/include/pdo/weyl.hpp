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

#ifndef PDO_WEYL_HPP_
#define PDO_WEYL_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "pdo/grid.hpp"
#include "pdo/symbols.hpp"

namespace pdo {

enum class QuantPath { kDense, kFft };

// Weyl quantization of a sampled symbol on its periodic grid.
//
// With z the midpoint grid and xi_kappa = pi kappa / L the half lattice,
//   K_{jl} = (2N)^-n sum_kappa sum_{s in {0,1}^n} e^{i pi kappa.(j-l+sN)/N}
//            a(z_{j+l+sN}, xi_kappa).
// The fft path stores the offset table a_hat_m(xi_kappa) (DFT of the symbol
// over z) and maps Fourier mode k to k+m with weight a_hat_m(pi(2k+m)/L).
class QuantizedOperator {
 public:
  QuantizedOperator(SampledSymbol symbol, QuantPath path);

  const SampledSymbol& symbol() const { return symbol_; }
  const PeriodicGrid& grid() const { return symbol_.grid(); }
  QuantPath path() const { return path_; }

  CVec apply(const CVec& u) const;
  CVec adjoint_apply(const CVec& u) const;
  CVec apply_fft(const CVec& u) const;
  CVec adjoint_apply_fft(const CVec& u) const;
  CVec apply_dense(const CVec& u) const;
  CVec adjoint_apply_dense(const CVec& u) const;

  // Physical-space kernel from direct lattice sums (n <= 2). Built once.
  const CMat& dense_kernel() const;
  // Matrix in the unitary Fourier basis (FFT order), from the offset table.
  CMat fourier_matrix() const;

 private:
  SampledSymbol symbol_;
  QuantPath path_;
  // rows: offset index (m mod 2N per axis), cols: kappa + N. Row-major: the
  // offset loops walk kappa for a fixed row.
  Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> offsets_;
  struct KernelCache {
    std::once_flag once;
    CMat kernel;
  };
  std::shared_ptr<KernelCache> cache_;
};

QuantizedOperator quantize(const SampledSymbol& symbol, QuantPath path = QuantPath::kFft);
QuantizedOperator quantize(SampledSymbol&& symbol, QuantPath path = QuantPath::kFft);

GridField apply(const QuantizedOperator& op, const GridField& u);
GridField adjoint_apply(const QuantizedOperator& op, const GridField& u);

// Truncated Moyal product through the j = terms power (terms <= 3).
SampledSymbol moyal_compose(const SampledSymbol& a, const SampledSymbol& b, int terms);

// Amplitude a(x, y, xi) for n = 1 on (midpoint x) x (midpoint y) x (half
// lattice xi). values index (Mx * 2N + My) * 2N + (kappa + N).
struct SampledAmplitude {
  PeriodicGrid grid;
  double t = 0.0;
  std::vector<cplx> values;
};
SampledAmplitude sample_amplitude(
    const PeriodicGrid& grid,
    const std::function<cplx(double x, double y, double xi)>& amp);
// sum_{j <= terms} (1/j!) ((i/2)(d_x - d_y) d_xi)^j a |_{y = x}, terms <= 2.
SampledSymbol amplitude_to_weyl(const SampledAmplitude& amp, int terms);

// Left (standard) quantization (A u)(x_j) = sum_k e^{i xi_k x_j} a(x_j, xi_k)
// u_hat_k on the primal lattice, returned in the physical basis (n = 1).
CMat left_quantize(const SymbolFunction& sym, double t, const PeriodicGrid& grid);

// Unitary DFT matrix of a grid, FFT order.
CMat dft_matrix(const PeriodicGrid& grid);
// Converts between physical and Fourier bases.
CMat to_fourier_basis(const PeriodicGrid& grid, const CMat& physical);
CMat to_physical_basis(const PeriodicGrid& grid, const CMat& fourier);

// ---------------------------------------------------------------------------
// Sparse Fourier-basis operators for n = 1.
//
// Diagonal d maps Fourier index i to (i + d) mod N with coefficient c_d[i].
class CyclicBandMatrix {
 public:
  explicit CyclicBandMatrix(int n) : n_(n) {}
  static CyclicBandMatrix identity(int n);
  static CyclicBandMatrix diagonal(const CVec& d);
  static CyclicBandMatrix from_dense(const CMat& fourier, double tol = 0.0);

  int size() const { return n_; }
  std::size_t bandwidth() const { return diags_.size(); }
  const std::map<int, CVec>& diagonals() const { return diags_; }
  CVec& diagonal_at(int d);

  CVec apply(const CVec& v) const;
  CVec adjoint_apply(const CVec& v) const;
  CMat to_dense() const;

  CyclicBandMatrix adjoint() const;
  CyclicBandMatrix scale_rows(const RVec& w) const;
  CyclicBandMatrix scale_cols(const RVec& w) const;
  // Drops diagonals with max |c| <= tol * global max.
  void prune(double tol);

  friend CyclicBandMatrix operator*(const CyclicBandMatrix& a, const CyclicBandMatrix& b);
  friend CyclicBandMatrix operator+(const CyclicBandMatrix& a, const CyclicBandMatrix& b);
  friend CyclicBandMatrix operator-(const CyclicBandMatrix& a, const CyclicBandMatrix& b);

 private:
  int n_;
  std::map<int, CVec> diags_;
};

using Symbol1D = std::function<cplx(double x, double xi)>;
// Weyl quantization of an L-periodic symbol, streamed one xi column at a time.
CyclicBandMatrix weyl_band(const Symbol1D& a, int n, double length, double tol = 1e-15);
// Left quantization in the Fourier basis.
CyclicBandMatrix left_band(const Symbol1D& a, int n, double length, double tol = 1e-15);

// Several symbols sharing one xi sweep. columns(xi, x, cols) fills cols[c][j]
// with symbol c at (x[j], xi); x is the midpoint grid (Weyl) or the primal
// grid (left).
using BandColumns =
    std::function<void(double xi, const RVec& x, std::vector<CVec>& cols)>;
std::vector<CyclicBandMatrix> weyl_bands(const BandColumns& columns, int count, int n,
                                         double length, double tol = 1e-15);
std::vector<CyclicBandMatrix> left_bands(const BandColumns& columns, int count, int n,
                                         double length, double tol = 1e-15);

// ---------------------------------------------------------------------------
// Operator norms.

struct LinearOperator {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::function<CVec(const CVec&)> apply;
  std::function<CVec(const CVec&)> adjoint;
};

LinearOperator as_linear_operator(const CMat& m);
LinearOperator as_linear_operator(const CyclicBandMatrix& m);
LinearOperator as_linear_operator(const QuantizedOperator& op);

struct OperatorNormEstimate {
  double value = 0.0;
  double s_in = 0.0;
  double s_out = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

struct PowerOptions {
  std::uint64_t seed = 20260101;
  int max_iterations = 500;
  double tolerance = 1e-8;
};

// Power iteration on T^* T; residual is the relative Rayleigh residual.
OperatorNormEstimate power_norm(const LinearOperator& t, const PowerOptions& opts = {});

// One link of an operator chain, listed in application order.
struct ChainStep {
  enum class Kind { kOperator, kAdjoint, kWeight, kLinear };
  Kind kind;
  const QuantizedOperator* op = nullptr;
  double s = 0.0;
  LinearOperator linear;

  static ChainStep apply(const QuantizedOperator& q) { return {Kind::kOperator, &q, 0.0, {}}; }
  static ChainStep adjoint(const QuantizedOperator& q) { return {Kind::kAdjoint, &q, 0.0, {}}; }
  static ChainStep weight(double s) { return {Kind::kWeight, nullptr, s, {}}; }
  static ChainStep linear_map(LinearOperator l) { return {Kind::kLinear, nullptr, 0.0, std::move(l)}; }
};

// Norm of weight(s_out) o chain o weight(-s_in) on the grid of the chain.
OperatorNormEstimate operator_norm(const PeriodicGrid& grid,
                                   const std::vector<ChainStep>& chain, double s_in,
                                   double s_out, const PowerOptions& opts = {});

struct LanczosOptions {
  std::uint64_t seed = 20260101;
  int max_iterations = 600;
  double tolerance = 1e-10;
};

// Largest singular value by Lanczos on T^* T with full reorthogonalization.
// residual is the Ritz residual bound relative to the Ritz value.
OperatorNormEstimate lanczos_norm(const LinearOperator& t, const LanczosOptions& opts = {});

// Largest singular value from a Hermitian eigensolve of M^* M (or M M^*).
double dense_operator_norm(const CMat& m);
// ||<xi>^s_out M <xi>^-s_in|| for a Fourier-basis matrix on grid.
double fourier_operator_norm(const PeriodicGrid& grid, const CMat& fourier, double s_in,
                             double s_out);

}  // namespace pdo

#endif  // PDO_WEYL_HPP_
