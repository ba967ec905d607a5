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

#include "pdo/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "pdo/parallel.hpp"

namespace pdo {

SymbolFunction::SymbolFunction(int dim, SymbolEval eval, double order)
    : dim_(dim), eval_(std::move(eval)), order_(order) {
  if (dim <= 0) throw Error("dim", "must be positive");
  if (!eval_) throw Error("evaluator", "must be callable");
}

cplx SymbolFunction::derivative(double t, const double* x, const double* xi,
                                const int* ax, const int* bxi) const {
  if (!deriv_) throw Error("symbol", "no analytic derivatives attached");
  return deriv_(t, x, xi, ax, bxi);
}

double SymbolFunction::q2(double t, const double* x, const double* xi) const {
  if (!q2_) throw Error("split", "symbol has no (q2, q1) split");
  return q2_(t, x, xi);
}

cplx SymbolFunction::q1(double t, const double* x, const double* xi) const {
  if (!q1_) throw Error("split", "symbol has no (q2, q1) split");
  return q1_(t, x, xi);
}

SymbolFunction& SymbolFunction::with_derivatives(SymbolDeriv d) {
  deriv_ = std::move(d);
  return *this;
}

SymbolFunction& SymbolFunction::with_split(
    std::function<double(double, const double*, const double*)> q2, SymbolEval q1) {
  q2_ = std::move(q2);
  q1_ = std::move(q1);
  return *this;
}

SymbolFunction& SymbolFunction::with_ellipticity(double c, double theta) {
  if (!(c > 0)) throw Error("ellipticity.c", "must be positive");
  if (theta < 0) throw Error("ellipticity.theta", "must be nonnegative");
  ellip_ = Ellipticity{c, theta};
  return *this;
}

SymbolFunction& SymbolFunction::with_holder(double alpha, double constant) {
  if (!(alpha > 0 && alpha <= 1)) throw Error("holder.alpha", "must lie in (0, 1]");
  holder_ = HolderCertificate{alpha, constant};
  return *this;
}

SymbolFunction& SymbolFunction::with_x_independent(bool v) {
  x_independent_ = v;
  return *this;
}

SymbolFunction& SymbolFunction::with_time_independent(bool v) {
  time_independent_ = v;
  return *this;
}

SymbolFunction& SymbolFunction::with_trig_data(std::shared_ptr<const TrigData> d) {
  trig_ = std::move(d);
  return *this;
}

SymbolFunction& SymbolFunction::with_family(std::shared_ptr<const TimeFamily> fam) {
  family_ = std::move(fam);
  return *this;
}

// ---------------------------------------------------------------------------

PeriodicGrid midpoint_grid(const PeriodicGrid& grid) {
  std::vector<int> n(grid.dim());
  std::vector<double> l(grid.dim());
  for (int a = 0; a < grid.dim(); ++a) {
    n[a] = 2 * grid.points(a);
    l[a] = grid.length(a);
  }
  return PeriodicGrid(n, l);
}

std::size_t half_lattice_size(const PeriodicGrid& g) {
  std::size_t s = 1;
  for (int a = 0; a < g.dim(); ++a) s *= 2 * g.points(a);
  return s;
}

SampledSymbol::SampledSymbol(PeriodicGrid grid, double t, CMat values,
                             std::shared_ptr<const SymbolFunction> source)
    : grid_(std::move(grid)), t_(t), values_(std::move(values)),
      source_(std::move(source)) {
  const std::size_t sx = midpoint_grid(grid_).size();
  if (static_cast<std::size_t>(values_.rows()) != sx ||
      static_cast<std::size_t>(values_.cols()) != half_lattice_size(grid_))
    throw Error("values", "shape must be (2N)^n x (2N)^n");
}

void midpoint_point(const PeriodicGrid& grid, std::size_t ix, double* x) {
  for (int a = grid.dim() - 1; a >= 0; --a) {
    const int m = 2 * grid.points(a);
    x[a] = static_cast<double>(ix % m) * grid.length(a) / m;
    ix /= m;
  }
}

void half_lattice_point(const PeriodicGrid& grid, std::size_t ik, double* xi) {
  for (int a = grid.dim() - 1; a >= 0; --a) {
    const int m = 2 * grid.points(a);
    const int kappa = static_cast<int>(ik % m) - grid.points(a);
    xi[a] = kPi * kappa / grid.length(a);
    ik /= m;
  }
}

void SampledSymbol::x_point(std::size_t ix, double* x) const {
  midpoint_point(grid_, ix, x);
}

void SampledSymbol::xi_point(std::size_t ik, double* xi) const {
  half_lattice_point(grid_, ik, xi);
}

SampledSymbol sample(const SymbolFunction& sym, double t, const PeriodicGrid& grid) {
  if (sym.dim() != grid.dim()) throw Error("grid", "dimension mismatch with symbol");
  const PeriodicGrid mid = midpoint_grid(grid);
  const std::size_t nx = mid.size();
  const std::size_t nk = half_lattice_size(grid);
  const int n = grid.dim();
  if (const auto& td = sym.trig_data()) {
    // One product of (x factors) x (xi factors) over the terms.
    const auto nt = static_cast<Eigen::Index>(td->terms.size());
    CMat ex(nx, nt), px(nk, nt);
    std::vector<double> x(n), xi(n);
    for (Eigen::Index ti = 0; ti < nt; ++ti) {
      const TrigTerm& term = td->terms[ti];
      for (std::size_t ix = 0; ix < nx; ++ix) {
        midpoint_point(grid, ix, x.data());
        double ph = 0.0;
        for (int a = 0; a < n; ++a) ph += kTwoPi * term.k[a] * x[a] / td->lengths[a];
        ex(ix, ti) = std::polar(1.0, ph);
      }
      for (std::size_t ik = 0; ik < nk; ++ik) {
        half_lattice_point(grid, ik, xi.data());
        double v = 1.0;
        for (int a = 0; a < n; ++a)
          for (int r = 0; r < term.p[a]; ++r) v *= xi[a];
        px(ik, ti) = term.c * v;
      }
    }
    CMat vals = ex * px.transpose();
    return SampledSymbol(grid, t, std::move(vals), std::make_shared<SymbolFunction>(sym));
  }
  CMat vals(nx, nk);
  parallel_for(0, nk, [&](std::size_t ik) {
    std::vector<double> x(n), xi(n);
    half_lattice_point(grid, ik, xi.data());
    for (std::size_t ix = 0; ix < nx; ++ix) {
      midpoint_point(grid, ix, x.data());
      const cplx v = sym(t, x.data(), xi.data());
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        std::ostringstream os;
        os << "non-finite value at t=" << t << " x=(";
        for (int a = 0; a < n; ++a) os << (a ? "," : "") << x[a];
        os << ") xi=(";
        for (int a = 0; a < n; ++a) os << (a ? "," : "") << xi[a];
        os << ")";
        throw Error("symbol", os.str());
      }
      vals(ix, ik) = v;
    }
  });
  return SampledSymbol(grid, t, std::move(vals), std::make_shared<SymbolFunction>(sym));
}

EllipticityResult verify_ellipticity(const SymbolFunction& sym, double t,
                                     const PeriodicGrid& grid) {
  if (!sym.has_split()) throw Error("split", "ellipticity check needs (q2, q1)");
  const double theta = sym.ellipticity() ? sym.ellipticity()->theta : 1.0;
  const PeriodicGrid mid = midpoint_grid(grid);
  const int n = grid.dim();
  std::vector<int> ix(n), ik(n);
  std::vector<double> x(n), xi(n);
  double margin = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t pk = 0; pk < grid.size(); ++pk) {
    grid.unravel(pk, ik.data());
    double r2 = 0.0;
    for (int a = 0; a < n; ++a) {
      xi[a] = grid.frequency(a, ik[a]);
      r2 += xi[a] * xi[a];
    }
    if (std::sqrt(r2) < theta || r2 == 0.0) continue;
    any = true;
    for (std::size_t px = 0; px < mid.size(); ++px) {
      mid.unravel(px, ix.data());
      for (int a = 0; a < n; ++a) x[a] = mid.point(a, ix[a]);
      const double v = sym.q2(t, x.data(), xi.data()) + sym.q1(t, x.data(), xi.data()).real();
      margin = std::min(margin, v / r2);
    }
  }
  if (!any) throw Error("grid", "no lattice frequency with |xi| >= theta (grid too coarse)");
  const double c = sym.ellipticity() ? sym.ellipticity()->c : 0.0;
  const bool ok = sym.ellipticity() ? margin >= c : margin > 0.0;
  return {ok, margin};
}

SampledSymbol exp_symbol(const SymbolFunction& sym, double t, double h,
                         const PeriodicGrid& grid) {
  if (h < 0) throw Error("h", "must be nonnegative");
  if (h == 0.0) {
    CMat ones = CMat::Ones(midpoint_grid(grid).size(), half_lattice_size(grid));
    return SampledSymbol(grid, t, std::move(ones),
                         std::make_shared<SymbolFunction>(symbol_exp(sym, t, 0.0)));
  }
  SampledSymbol q = sample(sym, t, grid);
  CMat v = q.values();
  for (Eigen::Index j = 0; j < v.cols(); ++j)
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      const cplx e = -h * v(i, j);
      v(i, j) = e.real() < -745.0 ? cplx(0.0) : std::exp(e);
    }
  return SampledSymbol(grid, t, std::move(v),
                       std::make_shared<SymbolFunction>(symbol_exp(sym, t, h)));
}

// ---------------------------------------------------------------------------
// Derivatives.

namespace {

// Fourth-order first derivative along one xi axis of a column-major table.
void fd_xi_axis(const PeriodicGrid& grid, CMat& v, int axis) {
  const int n = grid.dim();
  const double dk = kPi / grid.length(axis);
  const int m = 2 * grid.points(axis);
  std::size_t stride = 1;
  for (int a = n - 1; a > axis; --a) stride *= 2 * grid.points(a);
  const std::size_t nk = v.cols();
  CMat out(v.rows(), v.cols());
  for (std::size_t ik = 0; ik < nk; ++ik) {
    const int i = static_cast<int>((ik / stride) % m);
    const std::size_t base = ik - static_cast<std::size_t>(i) * stride;
    auto col = [&](int j) { return v.col(static_cast<Eigen::Index>(base + j * stride)); };
    if (i >= 2 && i <= m - 3) {
      out.col(ik) = (col(i - 2) - 8.0 * col(i - 1) + 8.0 * col(i + 1) - col(i + 2)) /
                    (12.0 * dk);
    } else if (i == 0) {
      out.col(ik) = (-25.0 * col(0) + 48.0 * col(1) - 36.0 * col(2) + 16.0 * col(3) -
                     3.0 * col(4)) / (12.0 * dk);
    } else if (i == 1) {
      out.col(ik) = (-3.0 * col(0) - 10.0 * col(1) + 18.0 * col(2) - 6.0 * col(3) +
                     col(4)) / (12.0 * dk);
    } else if (i == m - 2) {
      out.col(ik) = (3.0 * col(m - 1) + 10.0 * col(m - 2) - 18.0 * col(m - 3) +
                     6.0 * col(m - 4) - col(m - 5)) / (12.0 * dk);
    } else {
      out.col(ik) = (25.0 * col(m - 1) - 48.0 * col(m - 2) + 36.0 * col(m - 3) -
                     16.0 * col(m - 4) + 3.0 * col(m - 5)) / (12.0 * dk);
    }
  }
  v = std::move(out);
}

void spectral_x(const PeriodicGrid& grid, CMat& v, const int* ax) {
  bool any = false;
  for (int a = 0; a < grid.dim(); ++a) any = any || ax[a] > 0;
  if (!any) return;
  const PeriodicGrid mid = midpoint_grid(grid);
  const int n = grid.dim();
  CVec mult(mid.size());
  std::vector<int> idx(n);
  for (std::size_t p = 0; p < mid.size(); ++p) {
    mid.unravel(p, idx.data());
    cplx f = 1.0;
    for (int a = 0; a < n; ++a) {
      if (ax[a] == 0) continue;
      const bool nyq = idx[a] == mid.points(a) / 2;
      const double w = mid.frequency(a, idx[a]);
      if (nyq && ax[a] % 2 == 1) {
        f = 0.0;
      } else {
        f *= std::pow(cplx(0.0, nyq ? std::abs(w) : w), ax[a]);
      }
    }
    mult[p] = f;
  }
  parallel_for(0, v.cols(), [&](std::size_t j) {
    CVec c = fft_forward(mid, v.col(j));
    c.array() *= mult.array();
    v.col(j) = fft_inverse(mid, c);
  });
}

}  // namespace

CMat numeric_derivative(const SampledSymbol& a, const int* ax, const int* bxi) {
  CMat v = a.values();
  spectral_x(a.grid(), v, ax);
  for (int d = 0; d < a.grid().dim(); ++d)
    for (int r = 0; r < bxi[d]; ++r) fd_xi_axis(a.grid(), v, d);
  return v;
}

CMat symbol_derivative(const SampledSymbol& a, const int* ax, const int* bxi) {
  const auto& src = a.source();
  if (!src || !src->has_derivatives()) return numeric_derivative(a, ax, bxi);
  const int n = a.grid().dim();
  CMat out(a.x_size(), a.xi_size());
  parallel_for(0, a.xi_size(), [&](std::size_t ik) {
    std::vector<double> x(n), xi(n);
    a.xi_point(ik, xi.data());
    for (std::size_t ix = 0; ix < a.x_size(); ++ix) {
      a.x_point(ix, x.data());
      out(ix, ik) = src->derivative(a.time_stamp(), x.data(), xi.data(), ax, bxi);
    }
  });
  return out;
}

SampledSymbol poisson_bracket(const SampledSymbol& a, const SampledSymbol& b) {
  if (a.grid() != b.grid()) throw Error("b", "grid mismatch");
  if (a.time_stamp() != b.time_stamp()) throw Error("b", "time stamp mismatch");
  const int n = a.grid().dim();
  CMat out = CMat::Zero(a.x_size(), a.xi_size());
  std::vector<int> zero(n, 0), e(n, 0);
  for (int j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), 0);
    e[j] = 1;
    const CMat axi = symbol_derivative(a, zero.data(), e.data());
    const CMat bx = symbol_derivative(b, e.data(), zero.data());
    const CMat ax = symbol_derivative(a, e.data(), zero.data());
    const CMat bxi = symbol_derivative(b, zero.data(), e.data());
    // Written as a difference of matching products so that {a,b} = -{b,a}
    // holds bit for bit.
    out.array() += axi.array() * bx.array() - ax.array() * bxi.array();
  }
  return SampledSymbol(a.grid(), a.time_stamp(), std::move(out));
}

double SeminormReport::get(const std::vector<int>& ax, const std::vector<int>& bxi) const {
  for (const auto& e : entries)
    if (e.ax == ax && e.bxi == bxi) return e.value;
  throw Error("multi_index", "not present in report");
}

double SeminormReport::max_value() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.value);
  return m;
}

namespace {

void enumerate_indices(int slots, int max_total, std::vector<int>& cur, int pos,
                       int used, std::vector<std::vector<int>>& out) {
  if (pos == slots) {
    out.push_back(cur);
    return;
  }
  for (int v = 0; v + used <= max_total; ++v) {
    cur[pos] = v;
    enumerate_indices(slots, max_total, cur, pos + 1, used + v, out);
  }
  cur[pos] = 0;
}

}  // namespace

SeminormReport seminorms(const SampledSymbol& a, double m, int max_order) {
  if (max_order < 0 || max_order > 4) throw Error("max_order", "must lie in [0, 4]");
  const int n = a.grid().dim();
  std::vector<std::vector<int>> idx;
  std::vector<int> cur(2 * n, 0);
  enumerate_indices(2 * n, max_order, cur, 0, 0, idx);
  SeminormReport rep{m, {}};
  std::vector<double> xi(n);
  for (const auto& mi : idx) {
    std::vector<int> ax(mi.begin(), mi.begin() + n), bxi(mi.begin() + n, mi.end());
    int b = 0;
    for (int v : bxi) b += v;
    const CMat d = symbol_derivative(a, ax.data(), bxi.data());
    double sup = 0.0;
    for (std::size_t ik = 0; ik < a.xi_size(); ++ik) {
      a.xi_point(ik, xi.data());
      double r2 = 0.0;
      for (double v : xi) r2 += v * v;
      const double w = std::pow(1.0 + r2, 0.5 * (-m + b));
      sup = std::max(sup, w * d.col(ik).cwiseAbs().maxCoeff());
    }
    rep.entries.push_back({std::move(ax), std::move(bxi), sup});
  }
  return rep;
}

SampledSymbol sampled_product(const SampledSymbol& a, const SampledSymbol& b) {
  if (a.grid() != b.grid()) throw Error("b", "grid mismatch");
  CMat v = a.values().cwiseProduct(b.values());
  std::shared_ptr<const SymbolFunction> src;
  if (a.source() && b.source() && a.time_stamp() == b.time_stamp())
    src = std::make_shared<SymbolFunction>(symbol_product(*a.source(), *b.source()));
  return SampledSymbol(a.grid(), a.time_stamp(), std::move(v), std::move(src));
}

}  // namespace pdo
