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

#include "pdo/weyl.hpp"

#include <cmath>
#include <map>
#include <utility>

#include "pdo/parallel.hpp"

namespace pdo {

namespace {

int mod(int a, int m) {
  const int r = a % m;
  return r < 0 ? r + m : r;
}

// Per-axis lookup for the offset form: for offset row M (m = M or M - 2N)
// and input Fourier index i, the lattice index kappa + N and output index.
struct AxisOffsets {
  int n;
  std::vector<int> kappa;  // [M * n + i]
  std::vector<int> out;    // [M * n + i]
};

AxisOffsets axis_offsets(int n) {
  AxisOffsets t{n, std::vector<int>(2 * n * n), std::vector<int>(2 * n * n)};
  for (int M = 0; M < 2 * n; ++M) {
    const int m = M < n ? M : M - 2 * n;
    for (int i = 0; i < n; ++i) {
      // Unique k = i mod n with -n <= 2k + m <= n - 1.
      int k = i;
      while (2 * k + m > n - 1) k -= n;
      while (2 * k + m < -n) k += n;
      t.kappa[M * n + i] = 2 * k + m + n;
      t.out[M * n + i] = mod(k + m, n);
    }
  }
  return t;
}

// Calls fn(row, kappa_lin, in_lin, out_lin) for every entry of the offset form.
template <class F>
void for_each_offset_entry(const PeriodicGrid& g, F&& fn) {
  const int dim = g.dim();
  std::vector<AxisOffsets> ax;
  for (int a = 0; a < dim; ++a) ax.push_back(axis_offsets(g.points(a)));
  const PeriodicGrid mid = midpoint_grid(g);
  std::vector<int> in_idx(g.size() * dim);
  for (std::size_t in = 0; in < g.size(); ++in) g.unravel(in, &in_idx[in * dim]);
  std::vector<int> Mi(dim);
  for (std::size_t row = 0; row < mid.size(); ++row) {
    mid.unravel(row, Mi.data());
    if (dim == 1) {
      const int n = g.points(0);
      const int* kp = &ax[0].kappa[Mi[0] * n];
      const int* op = &ax[0].out[Mi[0] * n];
      for (int i = 0; i < n; ++i) fn(row, kp[i], i, op[i]);
      continue;
    }
    for (std::size_t in = 0; in < g.size(); ++in) {
      const int* ii = &in_idx[in * dim];
      std::size_t kap = 0, out = 0;
      for (int a = 0; a < dim; ++a) {
        const int n = g.points(a);
        const int e = Mi[a] * n + ii[a];
        kap = kap * (2 * n) + ax[a].kappa[e];
        out = out * n + ax[a].out[e];
      }
      fn(row, kap, in, out);
    }
  }
}

}  // namespace

QuantizedOperator::QuantizedOperator(SampledSymbol symbol, QuantPath path)
    : symbol_(std::move(symbol)), path_(path), cache_(std::make_shared<KernelCache>()) {
  const PeriodicGrid mid = midpoint_grid(symbol_.grid());
  const double scale = 1.0 / std::sqrt(static_cast<double>(mid.size()));
  const Eigen::Index rows = symbol_.values().rows(), cols = symbol_.values().cols();
  offsets_.resize(rows, cols);
  // Blocks of columns keep the row-major writes contiguous.
  constexpr Eigen::Index kBlock = 32;
  const Eigen::Index blocks = (cols + kBlock - 1) / kBlock;
  parallel_for(0, blocks, [&](std::size_t b) {
    const Eigen::Index j0 = static_cast<Eigen::Index>(b) * kBlock;
    const Eigen::Index w = std::min(kBlock, cols - j0);
    CMat tmp(rows, w);
    for (Eigen::Index j = 0; j < w; ++j)
      tmp.col(j) = fft_forward(mid, symbol_.values().col(j0 + j)) * scale;
    offsets_.middleCols(j0, w) = tmp;
  });
}

QuantizedOperator quantize(const SampledSymbol& symbol, QuantPath path) {
  return QuantizedOperator(symbol, path);
}

QuantizedOperator quantize(SampledSymbol&& symbol, QuantPath path) {
  return QuantizedOperator(std::move(symbol), path);
}

CVec QuantizedOperator::apply(const CVec& u) const {
  return path_ == QuantPath::kDense ? apply_dense(u) : apply_fft(u);
}

CVec QuantizedOperator::adjoint_apply(const CVec& u) const {
  return path_ == QuantPath::kDense ? adjoint_apply_dense(u) : adjoint_apply_fft(u);
}

CVec QuantizedOperator::apply_fft(const CVec& u) const {
  const PeriodicGrid& g = grid();
  if (static_cast<std::size_t>(u.size()) != g.size()) throw Error("u", "size mismatch");
  const CVec uh = fft_forward(g, u);
  CVec vh = CVec::Zero(uh.size());
  for_each_offset_entry(g, [&](std::size_t row, std::size_t kap, std::size_t in,
                               std::size_t out) { vh[out] += offsets_(row, kap) * uh[in]; });
  return fft_inverse(g, vh);
}

CVec QuantizedOperator::adjoint_apply_fft(const CVec& u) const {
  const PeriodicGrid& g = grid();
  if (static_cast<std::size_t>(u.size()) != g.size()) throw Error("u", "size mismatch");
  const CVec uh = fft_forward(g, u);
  CVec vh = CVec::Zero(uh.size());
  for_each_offset_entry(g, [&](std::size_t row, std::size_t kap, std::size_t in,
                               std::size_t out) {
    vh[in] += std::conj(offsets_(row, kap)) * uh[out];
  });
  return fft_inverse(g, vh);
}

CMat QuantizedOperator::fourier_matrix() const {
  const PeriodicGrid& g = grid();
  CMat a = CMat::Zero(g.size(), g.size());
  for_each_offset_entry(g, [&](std::size_t row, std::size_t kap, std::size_t in,
                               std::size_t out) { a(out, in) += offsets_(row, kap); });
  return a;
}

namespace {

// P[kappa + N][d] = e^{i pi kappa d / N}, d in [0, 2N).
std::vector<cplx> phase_table(int n) {
  std::vector<cplx> p(2 * n * 2 * n);
  for (int k = 0; k < 2 * n; ++k)
    for (int d = 0; d < 2 * n; ++d) {
      const long e = static_cast<long>(k - n) * d % (2L * n);
      p[k * 2 * n + d] = std::polar(1.0, kPi * static_cast<double>(e) / n);
    }
  return p;
}

CMat dense_kernel_1d(const SampledSymbol& s) {
  const int n = s.grid().points(0);
  const int m = 2 * n;
  const std::vector<cplx> ph = phase_table(n);
  const CMat& a = s.values();
  CMat k(n, n);
  parallel_for(0, n, [&](std::size_t jj) {
    const int j = static_cast<int>(jj);
    for (int l = 0; l < n; ++l) {
      cplx acc = 0.0;
      for (int sh = 0; sh < 2; ++sh) {
        const int M = mod(j + l + sh * n, m);
        const int d = mod(j - l + sh * n, m);
        for (int kap = 0; kap < m; ++kap) acc += ph[kap * m + d] * a(M, kap);
      }
      k(j, l) = acc / static_cast<double>(m);
    }
  });
  return k;
}

// Two-stage separable direct sum. Only offsets d with d = M (mod 2) occur.
CMat dense_kernel_2d(const SampledSymbol& s) {
  const int n1 = s.grid().points(0), n2 = s.grid().points(1);
  const int m1 = 2 * n1, m2 = 2 * n2;
  const std::vector<cplx> p1 = phase_table(n1), p2 = phase_table(n2);
  const CMat& a = s.values();  // rows M1 * m2 + M2, cols k1 * m2 + k2
  const Eigen::Index nx = static_cast<Eigen::Index>(m1) * m2;
  // Rows of the midpoint grid split by the parity of M1 and of M2.
  std::vector<Eigen::Index> rows1[2], rows2[2];
  for (Eigen::Index x = 0; x < nx; ++x) {
    rows1[(x / m2) & 1].push_back(x);
    rows2[x & 1].push_back(x);
  }
  // Phase blocks Pp(kappa, dh) = P[kappa][2 dh + p].
  auto phase_block = [](const std::vector<cplx>& p, int n, int parity) {
    CMat out(2 * n, n);
    for (int k = 0; k < 2 * n; ++k)
      for (int dh = 0; dh < n; ++dh) out(k, dh) = p[k * 2 * n + 2 * dh + parity];
    return out;
  };
  const CMat p1b[2] = {phase_block(p1, n1, 0), phase_block(p1, n1, 1)};
  const CMat p2b[2] = {phase_block(p2, n2, 0), phase_block(p2, n2, 1)};
  // B(x, k2 * n1 + d1h) = sum_k1 P1[k1][2 d1h + (M1 & 1)] a(x, k1, k2)
  CMat b(nx, static_cast<Eigen::Index>(m2) * n1);
  parallel_for(0, m2, [&](std::size_t k2) {
    std::vector<Eigen::Index> cols(m1);
    for (int k1 = 0; k1 < m1; ++k1) cols[k1] = static_cast<Eigen::Index>(k1) * m2 + k2;
    const auto blk = static_cast<Eigen::Index>(k2) * n1;
    for (int par = 0; par < 2; ++par)
      b(rows1[par], Eigen::seqN(blk, n1)) = a(rows1[par], cols) * p1b[par];
  });
  // C(x, d1h * n2 + d2h) = sum_k2 P2[k2][2 d2h + (M2 & 1)] B(x, k2, d1h)
  CMat c(nx, static_cast<Eigen::Index>(n1) * n2);
  parallel_for(0, n1, [&](std::size_t d1h) {
    std::vector<Eigen::Index> cols(m2);
    for (int k2 = 0; k2 < m2; ++k2) cols[k2] = static_cast<Eigen::Index>(k2) * n1 + d1h;
    const auto blk = static_cast<Eigen::Index>(d1h) * n2;
    for (int par = 0; par < 2; ++par)
      c(rows2[par], Eigen::seqN(blk, n2)) = b(rows2[par], cols) * p2b[par];
  });
  const Eigen::Index sz = static_cast<Eigen::Index>(n1) * n2;
  CMat k(sz, sz);
  const double norm = 1.0 / (static_cast<double>(m1) * m2);
  parallel_for(0, n1, [&](std::size_t jj1) {
    const int j1 = static_cast<int>(jj1);
    for (int j2 = 0; j2 < n2; ++j2)
      for (int l1 = 0; l1 < n1; ++l1)
        for (int l2 = 0; l2 < n2; ++l2) {
          cplx acc = 0.0;
          for (int s1 = 0; s1 < 2; ++s1)
            for (int s2 = 0; s2 < 2; ++s2) {
              const int M1 = mod(j1 + l1 + s1 * n1, m1), M2 = mod(j2 + l2 + s2 * n2, m2);
              const int d1 = mod(j1 - l1 + s1 * n1, m1), d2 = mod(j2 - l2 + s2 * n2, m2);
              acc += c(static_cast<Eigen::Index>(M1) * m2 + M2, (d1 / 2) * n2 + d2 / 2);
            }
          k(j1 * n2 + j2, l1 * n2 + l2) = acc * norm;
        }
  });
  return k;
}

}  // namespace

const CMat& QuantizedOperator::dense_kernel() const {
  std::call_once(cache_->once, [this] {
    const int dim = grid().dim();
    if (dim == 1) {
      cache_->kernel = dense_kernel_1d(symbol_);
    } else if (dim == 2) {
      cache_->kernel = dense_kernel_2d(symbol_);
    } else {
      throw Error("grid", "dense kernel supports n <= 2");
    }
  });
  return cache_->kernel;
}

CVec QuantizedOperator::apply_dense(const CVec& u) const {
  if (static_cast<std::size_t>(u.size()) != grid().size()) throw Error("u", "size mismatch");
  return dense_kernel() * u;
}

CVec QuantizedOperator::adjoint_apply_dense(const CVec& u) const {
  if (static_cast<std::size_t>(u.size()) != grid().size()) throw Error("u", "size mismatch");
  return dense_kernel().adjoint() * u;
}

GridField apply(const QuantizedOperator& op, const GridField& u) {
  if (u.grid != op.grid()) throw Error("u", "grid mismatch");
  if (u.domain != Domain::kPhysical) throw Error("u", "expected a physical-side field");
  return GridField(u.grid, op.apply(u.values));
}

GridField adjoint_apply(const QuantizedOperator& op, const GridField& u) {
  if (u.grid != op.grid()) throw Error("u", "grid mismatch");
  if (u.domain != Domain::kPhysical) throw Error("u", "expected a physical-side field");
  return GridField(u.grid, op.adjoint_apply(u.values));
}

// ---------------------------------------------------------------------------

namespace {

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

void split_indices(int n, int total, std::vector<int>& cur, int pos,
                   std::vector<std::vector<int>>& out) {
  if (pos == static_cast<int>(cur.size())) {
    int s = 0;
    for (int v : cur) s += v;
    if (s == total) out.push_back(cur);
    return;
  }
  for (int v = 0; v <= total; ++v) {
    cur[pos] = v;
    split_indices(n, total, cur, pos + 1, out);
  }
  cur[pos] = 0;
}

}  // namespace

SampledSymbol moyal_compose(const SampledSymbol& a, const SampledSymbol& b, int terms) {
  if (terms < 0 || terms > 3) throw Error("terms", "must lie in [0, 3]");
  if (a.grid() != b.grid()) throw Error("b", "grid mismatch");
  const int n = a.grid().dim();
  CMat out = a.values().cwiseProduct(b.values());
  for (int j = 1; j <= terms; ++j) {
    // (1/(2i))^j sum_{|p|+|q|=j} (-1)^|q| / (p! q!) (d_xi^p d_x^q a)(d_x^p d_xi^q b)
    std::vector<std::vector<int>> pq;
    std::vector<int> cur(2 * n, 0);
    split_indices(2 * n, j, cur, 0, pq);
    const cplx pref = std::pow(cplx(0.0, -0.5), j);
    for (const auto& v : pq) {
      std::vector<int> p(v.begin(), v.begin() + n), q(v.begin() + n, v.end());
      double c = 1.0;
      int qs = 0;
      for (int i = 0; i < n; ++i) {
        c /= factorial(p[i]) * factorial(q[i]);
        qs += q[i];
      }
      if (qs % 2) c = -c;
      const CMat da = symbol_derivative(a, q.data(), p.data());
      const CMat db = symbol_derivative(b, p.data(), q.data());
      out.array() += (pref * c) * da.array() * db.array();
    }
  }
  return SampledSymbol(a.grid(), a.time_stamp(), std::move(out));
}

SampledAmplitude sample_amplitude(
    const PeriodicGrid& grid, const std::function<cplx(double, double, double)>& amp) {
  if (grid.dim() != 1) throw Error("grid", "amplitudes are supported for n = 1 only");
  const int m = 2 * grid.points(0);
  const double l = grid.length(0);
  SampledAmplitude out{grid, 0.0, std::vector<cplx>(static_cast<std::size_t>(m) * m * m)};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        out.values[(static_cast<std::size_t>(i) * m + j) * m + k] =
            amp(i * l / m, j * l / m, kPi * (k - m / 2) / l);
  return out;
}

SampledSymbol amplitude_to_weyl(const SampledAmplitude& amp, int terms) {
  if (amp.grid.dim() != 1) throw Error("amp", "n > 1 is rejected (dense cost)");
  if (terms < 0 || terms > 2) throw Error("terms", "must lie in [0, 2]");
  const int m = 2 * amp.grid.points(0);
  const double l = amp.grid.length(0);
  if (amp.values.size() != static_cast<std::size_t>(m) * m * m)
    throw Error("amp", "shape must be (2N)^3");
  const PeriodicGrid xy({m, m}, {l, l});
  CMat out = CMat::Zero(m, m);
  for (int j = 0; j <= terms; ++j) {
    for (int r = 0; r <= j; ++r) {
      // Diagonal of d_x^r d_y^(j-r) a, for every kappa.
      CMat diag(m, m);
      for (int k = 0; k < m; ++k) {
        CVec f(static_cast<Eigen::Index>(m) * m);
        for (int i = 0; i < m * m; ++i) f[i] = amp.values[static_cast<std::size_t>(i) * m + k];
        if (j > 0) {
          CVec c = fft_forward(xy, f);
          std::vector<int> idx(2);
          for (std::size_t p = 0; p < xy.size(); ++p) {
            xy.unravel(p, idx.data());
            cplx w = 1.0;
            const int pw[2] = {r, j - r};
            for (int a = 0; a < 2; ++a) {
              if (pw[a] == 0) continue;
              const bool nyq = idx[a] == m / 2;
              if (nyq && pw[a] % 2) {
                w = 0.0;
              } else {
                const double om = xy.frequency(a, idx[a]);
                w *= std::pow(cplx(0.0, nyq ? std::abs(om) : om), pw[a]);
              }
            }
            c[p] *= w;
          }
          f = fft_inverse(xy, c);
        }
        for (int i = 0; i < m; ++i) diag(i, k) = f[static_cast<Eigen::Index>(i) * m + i];
      }
      SampledSymbol tmp(amp.grid, amp.t, std::move(diag));
      const int zero = 0;
      const CMat d = numeric_derivative(tmp, &zero, &j);
      const double sign = ((j - r) % 2) ? -1.0 : 1.0;
      double binom = 1.0;
      for (int i = 1; i <= r; ++i) binom = binom * (j - r + i) / i;
      out += (std::pow(cplx(0.0, 0.5), j) * sign * binom / factorial(j)) * d;
    }
  }
  return SampledSymbol(amp.grid, amp.t, std::move(out));
}

CMat left_quantize(const SymbolFunction& sym, double t, const PeriodicGrid& grid) {
  if (grid.dim() != 1) throw Error("grid", "left quantization is provided for n = 1");
  const int n = grid.points(0);
  CMat k = CMat::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const double xj = grid.point(0, j);
    for (int q = 0; q < n; ++q) {
      const double xi = grid.frequency(0, q);
      const cplx a = sym(t, &xj, &xi) / static_cast<double>(n);
      for (int l = 0; l < n; ++l)
        k(j, l) += a * std::polar(1.0, xi * (xj - grid.point(0, l)));
    }
  }
  return k;
}

CMat dft_matrix(const PeriodicGrid& grid) {
  const Eigen::Index n = static_cast<Eigen::Index>(grid.size());
  CMat f(n, n);
  CVec e = CVec::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    f.col(j) = fft_forward(grid, e);
    e[j] = 0.0;
  }
  return f;
}

CMat to_fourier_basis(const PeriodicGrid& grid, const CMat& physical) {
  const CMat f = dft_matrix(grid);
  return f * physical * f.adjoint();
}

CMat to_physical_basis(const PeriodicGrid& grid, const CMat& fourier) {
  const CMat f = dft_matrix(grid);
  return f.adjoint() * fourier * f;
}

}  // namespace pdo
