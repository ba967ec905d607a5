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

#include <algorithm>
#include <cmath>

#include "pdo/weyl.hpp"

namespace pdo {

namespace {
int wrap(int a, int m) {
  const int r = a % m;
  return r < 0 ? r + m : r;
}
}  // namespace

CyclicBandMatrix CyclicBandMatrix::identity(int n) {
  CyclicBandMatrix m(n);
  m.diags_[0] = CVec::Ones(n);
  return m;
}

CyclicBandMatrix CyclicBandMatrix::diagonal(const CVec& d) {
  CyclicBandMatrix m(static_cast<int>(d.size()));
  m.diags_[0] = d;
  return m;
}

CyclicBandMatrix CyclicBandMatrix::from_dense(const CMat& a, double tol) {
  if (a.rows() != a.cols()) throw Error("fourier", "must be square");
  const int n = static_cast<int>(a.rows());
  CyclicBandMatrix m(n);
  for (int d = 0; d < n; ++d) {
    CVec c(n);
    for (int i = 0; i < n; ++i) c[i] = a((i + d) % n, i);
    m.diags_[d] = std::move(c);
  }
  m.prune(tol);
  return m;
}

CVec& CyclicBandMatrix::diagonal_at(int d) {
  auto it = diags_.find(d);
  if (it == diags_.end()) it = diags_.emplace(d, CVec::Zero(n_)).first;
  return it->second;
}

CVec CyclicBandMatrix::apply(const CVec& v) const {
  if (v.size() != n_) throw Error("v", "size mismatch");
  CVec out = CVec::Zero(n_);
  for (const auto& [d, c] : diags_) {
    const int split = n_ - d;  // i >= split wraps around
    for (int i = 0; i < split; ++i) out[i + d] += c[i] * v[i];
    for (int i = split; i < n_; ++i) out[i + d - n_] += c[i] * v[i];
  }
  return out;
}

CVec CyclicBandMatrix::adjoint_apply(const CVec& v) const {
  if (v.size() != n_) throw Error("v", "size mismatch");
  CVec out = CVec::Zero(n_);
  for (const auto& [d, c] : diags_) {
    const int split = n_ - d;
    for (int i = 0; i < split; ++i) out[i] += std::conj(c[i]) * v[i + d];
    for (int i = split; i < n_; ++i) out[i] += std::conj(c[i]) * v[i + d - n_];
  }
  return out;
}

CMat CyclicBandMatrix::to_dense() const {
  CMat a = CMat::Zero(n_, n_);
  for (const auto& [d, c] : diags_)
    for (int i = 0; i < n_; ++i) a((i + d) % n_, i) += c[i];
  return a;
}

CyclicBandMatrix CyclicBandMatrix::adjoint() const {
  CyclicBandMatrix m(n_);
  for (const auto& [d, c] : diags_) {
    const int da = wrap(-d, n_);
    CVec& dst = m.diagonal_at(da);
    // Entry (i + d) <- i becomes i <- (i + d).
    for (int i = 0; i < n_; ++i) dst[(i + d) % n_] += std::conj(c[i]);
  }
  return m;
}

CyclicBandMatrix CyclicBandMatrix::scale_rows(const RVec& w) const {
  if (w.size() != n_) throw Error("w", "size mismatch");
  CyclicBandMatrix m = *this;
  for (auto& [d, c] : m.diags_)
    for (int i = 0; i < n_; ++i) c[i] *= w[(i + d) % n_];
  return m;
}

CyclicBandMatrix CyclicBandMatrix::scale_cols(const RVec& w) const {
  if (w.size() != n_) throw Error("w", "size mismatch");
  CyclicBandMatrix m = *this;
  for (auto& [d, c] : m.diags_) c.array() *= w.array();
  return m;
}

void CyclicBandMatrix::prune(double tol) {
  double top = 0.0;
  for (const auto& [d, c] : diags_) top = std::max(top, c.cwiseAbs().maxCoeff());
  for (auto it = diags_.begin(); it != diags_.end();) {
    if (it->second.cwiseAbs().maxCoeff() <= tol * top) {
      it = diags_.erase(it);
    } else {
      ++it;
    }
  }
}

CyclicBandMatrix operator*(const CyclicBandMatrix& a, const CyclicBandMatrix& b) {
  if (a.n_ != b.n_) throw Error("b", "size mismatch");
  const int n = a.n_;
  CyclicBandMatrix m(n);
  for (const auto& [da, ca] : a.diags_)
    for (const auto& [db, cb] : b.diags_) {
      CVec& dst = m.diagonal_at((da + db) % n);
      const int split = n - db;
      for (int i = 0; i < split; ++i) dst[i] += ca[i + db] * cb[i];
      for (int i = split; i < n; ++i) dst[i] += ca[i + db - n] * cb[i];
    }
  return m;
}

CyclicBandMatrix operator+(const CyclicBandMatrix& a, const CyclicBandMatrix& b) {
  if (a.n_ != b.n_) throw Error("b", "size mismatch");
  CyclicBandMatrix m = a;
  for (const auto& [d, c] : b.diags_) m.diagonal_at(d) += c;
  return m;
}

CyclicBandMatrix operator-(const CyclicBandMatrix& a, const CyclicBandMatrix& b) {
  if (a.n_ != b.n_) throw Error("b", "size mismatch");
  CyclicBandMatrix m = a;
  for (const auto& [d, c] : b.diags_) m.diagonal_at(d) -= c;
  return m;
}

std::vector<CyclicBandMatrix> weyl_bands(const BandColumns& columns, int count, int n,
                                         double length, double tol) {
  const int m = 2 * n;
  const PeriodicGrid mid(1, m, length);
  RVec z(m);
  for (int j = 0; j < m; ++j) z[j] = j * length / m;
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  std::vector<CMat> acc(count, CMat::Zero(n, n));  // acc(i, d)
  std::vector<CVec> cols(count, CVec(m));
  for (int kap = -n; kap < n; ++kap) {
    columns(kPi * kap / length, z, cols);
    for (int c = 0; c < count; ++c) {
      const CVec ah = fft_forward(mid, cols[c]) * scale;
      // Offset off pairs with input k = (kap - off) / 2 when the parity matches.
      for (int M = (kap % 2 + 2) % 2; M < m; M += 2) {
        const int off = M < n ? M : M - m;
        const int k = (kap - off) / 2;
        acc[c](wrap(k, n), wrap(off, n)) += ah[M];
      }
    }
  }
  std::vector<CyclicBandMatrix> out;
  for (int c = 0; c < count; ++c) {
    CyclicBandMatrix band(n);
    for (int d = 0; d < n; ++d) {
      if (acc[c].col(d).cwiseAbs().maxCoeff() == 0.0) continue;
      band.diagonal_at(d) = acc[c].col(d);
    }
    band.prune(tol);
    out.push_back(std::move(band));
  }
  return out;
}

std::vector<CyclicBandMatrix> left_bands(const BandColumns& columns, int count, int n,
                                         double length, double tol) {
  const PeriodicGrid g(1, n, length);
  RVec x(n);
  for (int j = 0; j < n; ++j) x[j] = g.point(0, j);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<CMat> acc(count, CMat(n, n));  // acc(i, d)
  std::vector<CVec> cols(count, CVec(n));
  for (int i = 0; i < n; ++i) {
    columns(g.frequency(0, i), x, cols);
    for (int c = 0; c < count; ++c) acc[c].row(i) = (fft_forward(g, cols[c]) * scale).transpose();
  }
  std::vector<CyclicBandMatrix> out;
  for (int c = 0; c < count; ++c) {
    CyclicBandMatrix band(n);
    for (int d = 0; d < n; ++d) band.diagonal_at(d) = acc[c].col(d);
    band.prune(tol);
    out.push_back(std::move(band));
  }
  return out;
}

namespace {
BandColumns single(const Symbol1D& a) {
  return [&a](double xi, const RVec& x, std::vector<CVec>& cols) {
    for (Eigen::Index j = 0; j < x.size(); ++j) cols[0][j] = a(x[j], xi);
  };
}
}  // namespace

CyclicBandMatrix weyl_band(const Symbol1D& a, int n, double length, double tol) {
  return std::move(weyl_bands(single(a), 1, n, length, tol)[0]);
}

CyclicBandMatrix left_band(const Symbol1D& a, int n, double length, double tol) {
  return std::move(left_bands(single(a), 1, n, length, tol)[0]);
}

}  // namespace pdo
