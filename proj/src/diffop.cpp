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

#include "pdo/diffop.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace pdo {

namespace {

// Real interpolation weights of sample j at offset d = y - x_j.
double dirichlet_weight(int m, double length, double d) {
  const double theta = kTwoPi * d / length;
  const double half = 0.5 * theta;
  const double s = std::sin(half);
  double core;
  if (m % 2 == 0) {
    const int k = m / 2 - 1;
    core = std::abs(s) < 1e-14 ? 2.0 * k + 1.0 : std::sin((k + 0.5) * theta) / s;
    core += std::cos(0.5 * m * theta);
  } else {
    const int k = (m - 1) / 2;
    core = std::abs(s) < 1e-14 ? 2.0 * k + 1.0 : std::sin((k + 0.5) * theta) / s;
  }
  return core / m;
}

double wrap(double x, double length) {
  double r = std::fmod(x, length);
  if (r < 0) r += length;
  return r;
}

}  // namespace

CoefficientField::CoefficientField(double length, CVec samples)
    : l_(length), v_(std::move(samples)) {
  if (!(length > 0)) throw Error("length", "must be positive");
  if (v_.size() < 2) throw Error("points", "need at least two samples");
}

CoefficientField CoefficientField::sample(int points, double length,
                                          const std::function<cplx(double)>& f) {
  CVec v(points);
  for (int j = 0; j < points; ++j) v[j] = f(j * length / points);
  return CoefficientField(length, std::move(v));
}

CoefficientField CoefficientField::constant(int points, double length, cplx c) {
  return CoefficientField(length, CVec::Constant(points, c));
}

CoefficientField CoefficientField::derivative(int order) const {
  if (order < 0) throw Error("order", "must be nonnegative");
  if (order == 0) return *this;
  const PeriodicGrid g(1, points(), l_);
  CVec c = fft_forward(g, v_);
  const int m = points();
  for (int k = 0; k < m; ++k) {
    if (m % 2 == 0 && k == m / 2 && order % 2 == 1) {
      c[k] = 0.0;
      continue;
    }
    const double w = m % 2 == 0 && k == m / 2 ? kTwoPi * (m / 2) / l_ : g.frequency(0, k);
    c[k] *= std::pow(cplx(0.0, w), order);
  }
  return CoefficientField(l_, fft_inverse(g, c));
}

cplx CoefficientField::operator()(double x) const {
  const int m = points();
  const double h = l_ / m;
  const double y = wrap(x, l_);
  const double r = y / h;
  const double nearest = std::round(r);
  if (std::abs(r - nearest) < 1e-11) return v_[static_cast<int>(nearest) % m];
  cplx acc = 0.0;
  for (int j = 0; j < m; ++j) acc += dirichlet_weight(m, l_, y - j * h) * v_[j];
  return acc;
}

CVec CoefficientField::evaluate(const RVec& xs) const {
  CVec out(xs.size());
  for (Eigen::Index i = 0; i < xs.size(); ++i) out[i] = (*this)(xs[i]);
  return out;
}

void CoefficientField::check(const CoefficientField& o) const {
  if (o.points() != points() || o.l_ != l_) throw Error("field", "grid mismatch");
}

CoefficientField CoefficientField::operator+(const CoefficientField& o) const {
  check(o);
  return CoefficientField(l_, v_ + o.v_);
}
CoefficientField CoefficientField::operator-(const CoefficientField& o) const {
  check(o);
  return CoefficientField(l_, v_ - o.v_);
}
CoefficientField CoefficientField::operator*(const CoefficientField& o) const {
  check(o);
  return CoefficientField(l_, v_.cwiseProduct(o.v_));
}
CoefficientField CoefficientField::operator*(cplx c) const {
  return CoefficientField(l_, v_ * c);
}

CMat trig_interpolation_matrix(int points, double length, const RVec& ys) {
  const double h = length / points;
  CMat m = CMat::Zero(ys.size(), points);
  for (Eigen::Index i = 0; i < ys.size(); ++i) {
    const double y = wrap(ys[i], length);
    const double r = y / h;
    const double nearest = std::round(r);
    if (std::abs(r - nearest) < 1e-11) {
      m(i, static_cast<int>(nearest) % points) = 1.0;
      continue;
    }
    for (int j = 0; j < points; ++j) m(i, j) = dirichlet_weight(points, length, y - j * h);
  }
  return m;
}

// ---------------------------------------------------------------------------

DiffOperator DiffOperator::operator+(const DiffOperator& o) const {
  return {c2 + o.c2, c1 + o.c1, c0 + o.c0};
}
DiffOperator DiffOperator::operator-(const DiffOperator& o) const {
  return {c2 - o.c2, c1 - o.c1, c0 - o.c0};
}
DiffOperator DiffOperator::operator*(cplx s) const { return {c2 * s, c1 * s, c0 * s}; }

CVec DiffOperator::apply(const CVec& u) const {
  if (u.size() != points()) throw Error("u", "size mismatch");
  const CoefficientField f(length(), u);
  const CVec d1 = f.derivative(1).samples();
  const CVec d2 = f.derivative(2).samples();
  return c2.samples().cwiseProduct(d2) + c1.samples().cwiseProduct(d1) +
         c0.samples().cwiseProduct(u);
}

double DiffOperator::max_abs() const {
  return std::max({c2.max_abs(), c1.max_abs(), c0.max_abs()});
}

DiffOperator zero_operator(int points, double length) {
  const auto z = CoefficientField::constant(points, length, 0.0);
  return {z, z, z};
}

DiffOperator multiply_left(const CoefficientField& phi, const DiffOperator& op) {
  return {phi * op.c2, phi * op.c1, phi * op.c0};
}

DiffOperator multiply_right(const DiffOperator& op, const CoefficientField& phi) {
  const auto d1 = phi.derivative(1);
  const auto d2 = phi.derivative(2);
  return {op.c2 * phi, op.c2 * d1 * 2.0 + op.c1 * phi, op.c2 * d2 + op.c1 * d1 + op.c0 * phi};
}

DiffOperator commutator(const CoefficientField& phi, const DiffOperator& op) {
  return multiply_left(phi, op) - multiply_right(op, phi);
}

DiffOperator change_coordinates(const DiffOperator& op, int points, double length,
                                const std::function<double(double)>& iota,
                                const std::function<double(double)>& diota,
                                const std::function<double(double)>& d2iota) {
  CVec t2(points), t1(points), t0(points);
  for (int j = 0; j < points; ++j) {
    const double y = j * length / points;
    const double x = iota(y);
    const double d1 = diota(y);
    const double d2 = d2iota(y);
    if (!(std::abs(d1) > 0)) throw Error("iota", "not a local diffeomorphism");
    const cplx a2 = op.c2(x);
    t2[j] = a2 / (d1 * d1);
    t1[j] = -a2 * d2 / (d1 * d1 * d1) + op.c1(x) / d1;
    t0[j] = op.c0(x);
  }
  return {CoefficientField(length, t2), CoefficientField(length, t1),
          CoefficientField(length, t0)};
}

namespace {

// d_x^d of the xi^k Weyl coefficient, k, d in [0, 2]. Off-grid points are
// memoized: sampling visits few distinct x against many xi.
class WeylTable {
 public:
  using Values = std::array<cplx, 9>;  // index 3 k + d

  explicit WeylTable(const DiffOperator& op) {
    const cplx i(0.0, 1.0);
    std::array<CoefficientField, 3> base{op.c0 - op.c1.derivative(1) * 0.5 +
                                             op.c2.derivative(2) * 0.25,
                                         (op.c1 - op.c2.derivative(1)) * i, op.c2 * -1.0};
    for (int k = 0; k < 3; ++k)
      for (int d = 0; d < 3; ++d) f_[3 * k + d] = base[k].derivative(d);
  }

  const CoefficientField& field(int k, int d) const { return f_[3 * k + d]; }

  Values at(double x) const {
    {
      std::shared_lock lock(mu_);
      auto it = memo_.find(x);
      if (it != memo_.end()) return it->second;
    }
    Values v;
    for (int j = 0; j < 9; ++j) v[j] = f_[j](x);
    std::unique_lock lock(mu_);
    if (memo_.size() > (1u << 16)) memo_.clear();
    memo_.emplace(x, v);
    return v;
  }

 private:
  std::array<CoefficientField, 9> f_;
  mutable std::shared_mutex mu_;
  mutable std::unordered_map<double, Values> memo_;
};

}  // namespace

SymbolFunction weyl_symbol(const DiffOperator& op) {
  auto w = std::make_shared<const WeylTable>(op);
  SymbolFunction sym(
      1,
      [w](double, const double* x, const double* xi) {
        const auto v = w->at(*x);
        const double z = *xi;
        return v[6] * (z * z) + v[3] * z + v[0];
      },
      2.0);
  sym.with_derivatives([w](double, const double* x, const double* xi, const int* ax,
                           const int* bxi) -> cplx {
    if (*ax > 2) throw Error("derivative", "x order above 2 not tabulated");
    const auto v = w->at(*x);
    const double z = *xi;
    const int b = *bxi;
    cplx acc = 0.0;
    for (int k = b; k <= 2; ++k) {
      double fall = 1.0;
      for (int r = 0; r < b; ++r) fall *= (k - r);
      acc += v[3 * k + *ax] * fall * std::pow(z, k - b);
    }
    return acc;
  });
  sym.with_split(
      [w](double, const double* x, const double* xi) {
        return std::real(w->at(*x)[6]) * (*xi) * (*xi);
      },
      [w](double, const double* x, const double* xi) {
        const auto v = w->at(*x);
        return cplx(0.0, std::imag(v[6])) * (*xi) * (*xi) + v[3] * (*xi) + v[0];
      });
  const double c = w->field(2, 0).samples().real().minCoeff();
  if (c > 0) {
    const double b1 = w->field(1, 0).samples().real().cwiseAbs().maxCoeff();
    const double b0 = w->field(0, 0).samples().real().cwiseAbs().maxCoeff();
    // c/2 xi^2 >= b1 |xi| + b0 beyond theta.
    const double theta = (b1 + std::sqrt(b1 * b1 + 2.0 * c * b0)) / c;
    sym.with_ellipticity(0.5 * c, theta);
  }
  return sym;
}

DiffOperator sample_operator(int points, double length, const std::function<cplx(double)>& c2,
                             const std::function<cplx(double)>& c1,
                             const std::function<cplx(double)>& c0) {
  return {CoefficientField::sample(points, length, c2), CoefficientField::sample(points, length, c1),
          CoefficientField::sample(points, length, c0)};
}

DiffOperator curved_operator(int points) {
  return sample_operator(
      points, kTwoPi, [](double x) { return cplx(-1.0 - 0.5 * std::cos(x)); },
      [](double x) { return cplx(1.5 * std::sin(x)); },
      [](double x) { return cplx(0.625 * std::cos(x)); });
}

}  // namespace pdo
