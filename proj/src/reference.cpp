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
#include <array>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include "pdo/propagator.hpp"

namespace pdo {

namespace {

constexpr int kMaxHalvings = 20;
constexpr int kFineSteps = 4096;
// RK4 is stable on [-2.78, 0]; keep a margin for non-normal q^w.
constexpr double kCfl = 2.0;

// t + F(t): the reparametrized time of a separable family; plain t otherwise.
double effective_time(const SymbolFunction& q, double t) {
  if (q.family()) return t + q.family()->F(t);
  return t;
}

const SymbolFunction& base_symbol(const SymbolFunction& q) {
  return q.family() ? *q.family()->qa : q;
}

CMat generator(const SymbolFunction& q, double t, const PeriodicGrid& grid) {
  return quantize(sample(q, t, grid)).fourier_matrix();
}

double sampled_max_abs(const SymbolFunction& q, double t, const PeriodicGrid& grid) {
  return sample(q, t, grid).values().cwiseAbs().maxCoeff();
}

void check_tol(double tol) {
  if (!(tol >= 1e-11)) throw Error("tol", "must be >= 1e-11");
}

// Lattice frequencies of the grid in FFT order, one row per mode.
std::vector<std::vector<double>> lattice(const PeriodicGrid& grid) {
  std::vector<std::vector<double>> out(grid.size(), std::vector<double>(grid.dim()));
  std::vector<int> idx(grid.dim());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    grid.unravel(p, idx.data());
    for (int a = 0; a < grid.dim(); ++a) out[p][a] = grid.frequency(a, idx[a]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact multiplier: int_0^T q(tau, xi) dtau per mode.

using VecFn = std::function<CVec(double)>;

struct Simpson {
  const VecFn& f;
  double tol;
  int nodes = 0;
  double err = 0.0;

  CVec run(double a, double b, const CVec& fa, const CVec& fm, const CVec& fb,
           const CVec& whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const CVec flm = f(0.5 * (a + m));
    const CVec frm = f(0.5 * (m + b));
    nodes += 2;
    const CVec left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const CVec right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = (left + right - whole).cwiseAbs().maxCoeff();
    if (depth <= 0 || delta <= 15.0 * eps) {
      err += delta / 15.0;
      return left + right + (left + right - whole) / 15.0;
    }
    return run(a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           run(m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
  }
};

std::pair<CVec, ReferenceSolution> multiplier_exponent(const SymbolFunction& q, double t,
                                                      const PeriodicGrid& grid, double tol) {
  const auto xi = lattice(grid);
  const std::vector<double> x0(grid.dim(), 0.0);
  auto eval = [&](double tau) {
    CVec v(static_cast<Eigen::Index>(xi.size()));
    for (std::size_t p = 0; p < xi.size(); ++p) v[p] = q(tau, x0.data(), xi[p].data());
    return v;
  };
  ReferenceSolution info{ReferenceMethod::kExactMultiplier, 0.0, 0};
  if (t == 0.0) return {CVec::Zero(static_cast<Eigen::Index>(xi.size())), info};
  if (q.time_independent()) return {t * eval(0.0), info};
  if (const auto& fam = q.family(); fam && fam->F) {
    // qa, qb are time independent: int q = t qa + F(t) qb in closed form.
    CVec a(static_cast<Eigen::Index>(xi.size())), b(a.size());
    for (std::size_t p = 0; p < xi.size(); ++p) {
      a[p] = (*fam->qa)(0.0, x0.data(), xi[p].data());
      b[p] = (*fam->qb)(0.0, x0.data(), xi[p].data());
    }
    return {t * a + fam->F(t) * b, info};
  }
  VecFn f = eval;
  Simpson s{f, tol};
  const CVec fa = f(0.0), fm = f(0.5 * t), fb = f(t);
  const CVec whole = t / 6.0 * (fa + 4.0 * fm + fb);
  CVec r = s.run(0.0, t, fa, fm, fb, whole, tol, 40);
  info.tolerance = s.err;
  info.steps = s.nodes + 3;
  if (s.err > tol) throw NonConvergenceError("tol", "adaptive quadrature did not reach tol");
  return {r, info};
}

// ---------------------------------------------------------------------------
// Classical RK4 on Y' = -A(s) Y.

class GeneratorCache {
 public:
  using Provider = std::function<CMat(double)>;
  explicit GeneratorCache(Provider p) : p_(std::move(p)) {}
  const CMat& at(double s) {
    for (auto& e : slots_)
      if (e.first == s) return e.second;
    slots_[next_] = {s, p_(s)};
    const CMat& r = slots_[next_].second;
    next_ = (next_ + 1) % slots_.size();
    return r;
  }

 private:
  Provider p_;
  std::array<std::pair<double, CMat>, 3> slots_{
      {{std::numeric_limits<double>::quiet_NaN(), CMat()},
       {std::numeric_limits<double>::quiet_NaN(), CMat()},
       {std::numeric_limits<double>::quiet_NaN(), CMat()}}};
  std::size_t next_ = 0;
};

void rk4(GeneratorCache& a, CMat& y, double s0, double s1, int n) {
  const double dt = (s1 - s0) / n;
  for (int i = 0; i < n; ++i) {
    const double s = s0 + i * dt;
    const CMat k1 = -(a.at(s) * y);
    const CMat& am = a.at(s + 0.5 * dt);
    const CMat k2 = -(am * (y + 0.5 * dt * k1));
    const CMat k3 = -(am * (y + 0.5 * dt * k2));
    const CMat k4 = -(a.at(s + dt) * (y + dt * k3));
    y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
}

// Integrates from 0 through every (reparametrized) output time, halving
// the step until two levels agree to tol / 10 relative to |Y0|.
std::pair<std::vector<CMat>, ReferenceSolution> method_of_lines(
    const SymbolFunction& q, const std::vector<double>& times, const PeriodicGrid& grid,
    const CMat& y0, double tol) {
  const bool separable = is_separable_family(q);
  GeneratorCache::Provider provider;
  std::vector<double> s_times;
  double rho = 0.0;
  const double s_end = times.empty() ? 0.0 : *std::max_element(times.begin(), times.end());
  if (separable || q.time_independent()) {
    const SymbolFunction& base = base_symbol(q);
    auto qa = std::make_shared<CMat>(generator(base, 0.0, grid));
    provider = [qa](double) { return *qa; };
    for (double t : times) s_times.push_back(separable ? effective_time(q, t) : t);
    rho = sampled_max_abs(base, 0.0, grid);
  } else if (const auto& fam = q.family()) {
    auto qa = std::make_shared<CMat>(generator(*fam->qa, 0.0, grid));
    auto qb = std::make_shared<CMat>(generator(*fam->qb, 0.0, grid));
    auto f = fam->f;
    provider = [qa, qb, f](double t) { return CMat(*qa + f(t) * *qb); };
    s_times = times;
    double fmax = 0.0;
    for (int i = 0; i <= 64; ++i) fmax = std::max(fmax, std::abs(f(s_end * i / 64.0)));
    rho = sampled_max_abs(*fam->qa, 0.0, grid) + fmax * sampled_max_abs(*fam->qb, 0.0, grid);
  } else {
    provider = [&q, &grid](double t) { return generator(q, t, grid); };
    s_times = times;
    for (int i = 0; i <= 4; ++i) rho = std::max(rho, sampled_max_abs(q, s_end * i / 4.0, grid));
  }
  std::vector<std::size_t> order(times.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return s_times[a] < s_times[b]; });
  const double s_max = s_times.empty() ? 0.0 : s_times[order.back()];
  const double dt0 = rho > 0 ? kCfl / rho : s_max;
  int n0 = std::max(1, static_cast<int>(std::ceil(s_max / std::max(dt0, 1e-300))));

  auto solve = [&](int n) {
    GeneratorCache cache(provider);
    std::vector<CMat> out(times.size());
    CMat y = y0;
    double s = 0.0;
    for (std::size_t k : order) {
      const double target = s_times[k];
      if (target > s) {
        const int m = std::max(1, static_cast<int>(std::ceil(n * (target - s) / s_max)));
        rk4(cache, y, s, target, m);
        s = target;
      }
      out[k] = y;
    }
    return out;
  };

  const double scale = std::max(y0.norm(), 1e-300);
  std::vector<CMat> prev = solve(n0);
  int n = n0;
  for (int h = 0; h < kMaxHalvings; ++h) {
    n *= 2;
    std::vector<CMat> cur = solve(n);
    double change = 0.0;
    for (std::size_t k = 0; k < cur.size(); ++k)
      change = std::max(change, (cur[k] - prev[k]).norm() / scale);
    if (change < tol / 10.0)
      return {std::move(cur), ReferenceSolution{ReferenceMethod::kMethodOfLines, change, n}};
    prev = std::move(cur);
  }
  throw NonConvergenceError("tol", "method of lines: no self-convergence after 20 halvings");
}

// ---------------------------------------------------------------------------
// Closed forms for commuting families.

void require_commuting(const SymbolFunction& q, const char* what) {
  if (!is_separable_family(q) && !q.time_independent())
    throw Error("method", std::string(what) + " needs a time independent or separable symbol");
}

std::pair<std::vector<CMat>, ReferenceSolution> eigen_reference(
    const SymbolFunction& q, const std::vector<double>& times, const PeriodicGrid& grid) {
  require_commuting(q, "eigen reference");
  const CMat a = generator(base_symbol(q), 0.0, grid);
  Eigen::ComplexEigenSolver<CMat> es(a);
  if (es.info() != Eigen::Success) throw NonConvergenceError("method", "eigensolver failed");
  const CMat& v = es.eigenvectors();
  const CVec& lam = es.eigenvalues();
  const CMat vinv = v.partialPivLu().inverse();
  const double resid = (a * v - v * lam.asDiagonal()).norm() * vinv.norm() /
                       std::max(a.norm(), 1e-300);
  std::vector<CMat> out;
  for (double t : times) {
    const double g = effective_time(q, t);
    CVec e = (-g * lam).array().exp().matrix();
    out.push_back(v * e.asDiagonal() * vinv);
  }
  return {std::move(out), ReferenceSolution{ReferenceMethod::kEigen, resid, 0}};
}

std::pair<std::vector<CMat>, ReferenceSolution> pade_reference(
    const SymbolFunction& q, const std::vector<double>& times, const PeriodicGrid& grid) {
  require_commuting(q, "pade reference");
  const CMat a = generator(base_symbol(q), 0.0, grid);
  std::vector<CMat> out;
  double bound = 0.0;
  for (double t : times) {
    const double g = effective_time(q, t);
    const CMat m = -g * a;
    out.push_back(m.exp());
    bound = std::max(bound, std::numeric_limits<double>::epsilon() *
                                std::max(1.0, m.cwiseAbs().colwise().sum().maxCoeff()));
  }
  return {std::move(out), ReferenceSolution{ReferenceMethod::kPade, bound, 0}};
}

std::pair<std::vector<CMat>, ReferenceSolution> fine_reference(
    const SymbolFunction& q, const std::vector<double>& times, const PeriodicGrid& grid) {
  std::vector<CMat> out;
  double change = 0.0;
  for (double t : times) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    if (t == 0.0) {
      out.push_back(CMat::Identity(n, n));
      continue;
    }
    const auto half = multiproduct_knot_matrices(q, Subdivision::uniform(t, kFineSteps / 2), grid);
    const auto full = multiproduct_knot_matrices(q, Subdivision::uniform(t, kFineSteps), grid);
    change = std::max(change, (full.back() - half.back()).norm() / std::sqrt(double(n)));
    out.push_back(full.back());
  }
  return {std::move(out), ReferenceSolution{ReferenceMethod::kFineMultiproduct, change, kFineSteps}};
}

ReferenceMethod resolve(const SymbolFunction& q, ReferenceMethod m) {
  if (m != ReferenceMethod::kAuto) return m;
  if (q.x_independent()) return ReferenceMethod::kExactMultiplier;
  if (is_separable_family(q) || q.time_independent()) return ReferenceMethod::kEigen;
  return ReferenceMethod::kMethodOfLines;
}

}  // namespace

std::string to_string(ReferenceMethod m) {
  switch (m) {
    case ReferenceMethod::kAuto: return "auto";
    case ReferenceMethod::kExactMultiplier: return "exact_multiplier";
    case ReferenceMethod::kFineMultiproduct: return "fine_multiproduct";
    case ReferenceMethod::kMethodOfLines: return "method_of_lines";
    case ReferenceMethod::kEigen: return "eigendecomposition";
    case ReferenceMethod::kPade: return "pade";
  }
  return "unknown";
}

bool is_separable_family(const SymbolFunction& q) {
  const auto& fam = q.family();
  return fam && fam->qa && fam->qa == fam->qb && static_cast<bool>(fam->F) &&
         fam->qa->time_independent();
}

std::pair<std::vector<CMat>, ReferenceSolution> reference_operators(
    const SymbolFunction& q, const std::vector<double>& times, const PeriodicGrid& grid,
    double tol, ReferenceMethod method) {
  check_tol(tol);
  for (double t : times)
    if (t < 0) throw Error("times", "must be nonnegative");
  const auto n = static_cast<Eigen::Index>(grid.size());
  switch (resolve(q, method)) {
    case ReferenceMethod::kExactMultiplier: {
      if (!q.x_independent()) throw Error("method", "exact multiplier needs x independent q");
      std::vector<CMat> out;
      ReferenceSolution info{ReferenceMethod::kExactMultiplier, 0.0, 0};
      for (double t : times) {
        auto [e, i] = multiplier_exponent(q, t, grid, tol);
        info.tolerance = std::max(info.tolerance, i.tolerance);
        info.steps = std::max(info.steps, i.steps);
        out.push_back(CVec((-e).array().exp().matrix()).asDiagonal());
      }
      return {std::move(out), info};
    }
    case ReferenceMethod::kEigen: return eigen_reference(q, times, grid);
    case ReferenceMethod::kPade: return pade_reference(q, times, grid);
    case ReferenceMethod::kFineMultiproduct: return fine_reference(q, times, grid);
    case ReferenceMethod::kMethodOfLines:
      return method_of_lines(q, times, grid, CMat::Identity(n, n), tol);
    case ReferenceMethod::kAuto: break;
  }
  throw Error("method", "unresolved reference method");
}

std::pair<GridField, ReferenceSolution> reference_solve(const SymbolFunction& q,
                                                        double final_time, const GridField& u0,
                                                        double tol, ReferenceMethod method) {
  check_tol(tol);
  if (final_time < 0) throw Error("T", "must be nonnegative");
  if (u0.domain != Domain::kPhysical) throw Error("u0", "expected physical values");
  const PeriodicGrid& grid = u0.grid;
  const CVec uh = fft_forward(grid, u0.values);
  const ReferenceMethod m = resolve(q, method);
  if (m == ReferenceMethod::kExactMultiplier) {
    if (!q.x_independent()) throw Error("method", "exact multiplier needs x independent q");
    auto [e, info] = multiplier_exponent(q, final_time, grid, tol);
    const CVec vh = ((-e).array().exp() * uh.array()).matrix();
    return {GridField(grid, fft_inverse(grid, vh)), info};
  }
  if (m == ReferenceMethod::kMethodOfLines) {
    auto [ys, info] = method_of_lines(q, {final_time}, grid, CMat(uh), tol);
    return {GridField(grid, fft_inverse(grid, CVec(ys[0].col(0)))), info};
  }
  auto [ops, info] = reference_operators(q, {final_time}, grid, tol, m);
  return {GridField(grid, fft_inverse(grid, CVec(ops[0] * uh))), info};
}

}  // namespace pdo
