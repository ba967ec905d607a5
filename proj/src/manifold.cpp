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

#include "pdo/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Eigenvalues>

#include "pdo/parallel.hpp"
#include "pdo/weyl.hpp"

namespace pdo {

MetricField flat_metric() {
  MetricField m;
  m.g0 = [](double) { return 1.0; };
  return m;
}

MetricField curved_metric(const TimeProfile& profile) {
  MetricField m;
  m.g0 = [](double x) { return 1.0 + 0.3 * std::sin(x); };
  m.profile = profile;
  return m;
}

DiffOperator build_laplace_beltrami(const MetricField& metric, double t, int fine_points) {
  if (!metric.g0) throw Error("metric", "missing g0");
  const auto g = CoefficientField::sample(fine_points, kTwoPi,
                                          [&](double x) { return cplx(metric.g(t, x)); });
  if (!(g.samples().real().minCoeff() > 0)) throw Error("metric", "g must be positive");
  const auto dg = g.derivative(1);
  CVec c2(fine_points), c1(fine_points);
  for (int j = 0; j < fine_points; ++j) {
    const double gj = g.samples()[j].real();
    c2[j] = -1.0 / gj;
    c1[j] = dg.samples()[j].real() / (2.0 * gj * gj);
  }
  return {CoefficientField(kTwoPi, c2), CoefficientField(kTwoPi, c1),
          CoefficientField::constant(fine_points, kTwoPi, 0.0)};
}

double probe_identity_residual(const DiffOperator& q, const DiffOperator& a,
                               const ChartAtlas& atlas) {
  const int m = a.points();
  double worst = 0.0;
  for (int k = 1; k <= 8; ++k)
    for (int parity = 0; parity < 2; ++parity) {
      const auto u = CoefficientField::sample(m, kTwoPi, [&](double x) {
        return cplx(parity ? std::sin(k * x) : std::cos(k * x));
      });
      CVec lhs = CVec::Zero(m);
      for (int i = 0; i < atlas.size(); ++i) {
        const CVec& phi = atlas.phi_field(i).samples();
        lhs += phi.cwiseProduct(q.apply(phi.cwiseProduct(u.samples())));
      }
      const CVec rhs = a.apply(u.samples());
      const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff() / scale);
    }
  return worst;
}

DiffOperator chart_coefficients(const DiffOperator& q, const ChartAtlas& atlas, int i) {
  if (q.points() != atlas.options().fine_points) throw Error("Q", "not on the atlas fine grid");
  const Chart& c = atlas.chart(i);
  const PeriodicGrid lg = atlas.local_grid(i);
  const int m = 2 * lg.points(0);
  const double box = lg.length(0);
  const double off = c.box_offset();
  const Eigen::MatrixXd& s = atlas.chart_sampling(i);
  auto at = [&](const CoefficientField& f) -> CVec {
    return (s * f.samples().real()).cast<cplx>() + cplx(0.0, 1.0) * (s * f.samples().imag());
  };
  const CVec a2 = at(q.c2), a1 = at(q.c1), a0 = at(q.c0);
  CVec c2(m), c1(m), c0(m);
  const double w = c.local_half_width;
  for (int j = 0; j < m; ++j) {
    const double z = j * box / m - off;
    const double d1 = c.diota(z);
    const double d2 = c.d2iota(z);
    c2[j] = a2[j] / (d1 * d1);
    c1[j] = -a2[j] * d2 / (d1 * d1 * d1) + a1[j] / d1;
    c0[j] = a0[j];
    if (c.periodic) continue;
    const double chi = smoothstep((1.4 * w - std::abs(z)) / (0.4 * w));
    c2[j] = chi * c2[j] - (1.0 - chi);
    c1[j] *= chi;
    c0[j] *= chi;
  }
  return {CoefficientField(box, c2), CoefficientField(box, c1), CoefficientField(box, c0)};
}

ManifoldOperatorQ build_Q(const DiffOperator& a, const ChartAtlas& atlas, double t) {
  if (a.points() != atlas.options().fine_points)
    throw Error("A", "coefficients must live on the atlas fine grid");
  if (atlas.partition_residual() > 1e-12) throw Error("atlas", "sum phi_i^2 != 1");
  ManifoldOperatorQ q;
  q.t = t;
  q.q2 = a;
  q.q1 = zero_operator(a.points(), a.length());
  for (int i = 0; i < atlas.size(); ++i) {
    const auto& phi = atlas.phi_field(i);
    q.q1 = q.q1 - multiply_right(commutator(phi, q.q2), phi);
  }
  q.q0 = zero_operator(a.points(), a.length());
  for (int i = 0; i < atlas.size(); ++i) {
    const auto& phi = atlas.phi_field(i);
    q.q0 = q.q0 - multiply_right(commutator(phi, q.q1), phi);
  }
  const DiffOperator total = q.total();
  q.identity_residual = probe_identity_residual(total, a, atlas);
  if (!(q.identity_residual <= 1e-8))
    throw Error("identity", "sum phi_i Q phi_i != A on probes: " +
                                std::to_string(q.identity_residual));
  for (int i = 0; i < atlas.size(); ++i)
    q.chart_symbols.push_back(weyl_symbol(chart_coefficients(total, atlas, i)));
  for (std::size_t k = 0; k < atlas.coarse_charts().size(); ++k) q.coarse_symbols.push_back(
        weyl_symbol(total));
  return q;
}

const SymbolFunction& chart_symbol(const ManifoldOperatorQ& q, int i) {
  return q.chart_symbols.at(i);
}

CMat local_step(const ManifoldOperatorQ& q, const ChartAtlas& atlas, int i, double t_prime) {
  if (t_prime < q.t) throw Error("t_prime", "must be >= t");
  const RVec& phi = atlas.phi_global(i);
  if (t_prime == q.t) return phi.cwiseAbs2().cast<cplx>().asDiagonal();
  const PeriodicGrid lg = atlas.local_grid(i);
  const CMat l = to_physical_basis(
      lg, quantize(exp_symbol(chart_symbol(q, i), q.t, t_prime - q.t, lg)).fourier_matrix());
  CMat out = atlas.extension(i) * (l * (atlas.restriction(i) * phi.cast<cplx>().asDiagonal()));
  return phi.cast<cplx>().asDiagonal() * out;
}

CMat global_step(const ManifoldOperatorQ& q, const ChartAtlas& atlas, double t_prime) {
  std::vector<CMat> parts(atlas.size());
  parallel_for(0, parts.size(), [&](std::size_t i) {
    parts[i] = local_step(q, atlas, static_cast<int>(i), t_prime);
  });
  CMat sum = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) sum += parts[i];
  return sum;
}

namespace {

CMat knot_step(const MetricField& metric, const ChartAtlas& atlas, double t, double t_prime) {
  const auto a = build_laplace_beltrami(metric, t, atlas.options().fine_points);
  return global_step(build_Q(a, atlas, t), atlas, t_prime);
}

}  // namespace

std::vector<CMat> manifold_knot_matrices(const MetricField& metric, const ChartAtlas& atlas,
                                         const Subdivision& sub) {
  const int n = atlas.options().global_points;
  std::vector<CMat> out{CMat::Identity(n, n)};
  for (int k = 0; k < sub.steps(); ++k)
    out.push_back(knot_step(metric, atlas, sub.knot(k), sub.knot(k + 1)) * out.back());
  return out;
}

GridField manifold_multiproduct(const MetricField& metric, const ChartAtlas& atlas,
                                const Subdivision& sub, double t, const GridField& u0) {
  if (u0.grid != atlas.global_grid()) throw Error("u0", "grid mismatch");
  if (u0.domain != Domain::kPhysical) throw Error("u0", "expected physical values");
  const int k = sub.locate(t);
  CVec v = u0.values;
  for (int j = 0; j < k; ++j) v = knot_step(metric, atlas, sub.knot(j), sub.knot(j + 1)) * v;
  if (t > sub.knot(k)) v = knot_step(metric, atlas, sub.knot(k), t) * v;
  return GridField(u0.grid, v);
}

double weighted_l2_norm(const MetricField& metric, const PeriodicGrid& grid, const CMat& m) {
  const int n = grid.points(0);
  RVec w(n);
  for (int j = 0; j < n; ++j) w[j] = std::pow(metric.g(0.0, grid.point(0, j)), 0.25);
  const CMat s = w.cast<cplx>().asDiagonal() * m * w.cwiseInverse().cast<cplx>().asDiagonal();
  return dense_operator_norm(s);
}

L2StabilityResult l2_stability_check(const ManifoldOperatorQ& q, const ChartAtlas& atlas,
                                     const MetricField& metric,
                                     const std::vector<double>& h_list) {
  if (h_list.empty()) throw Error("h_list", "empty");
  L2StabilityResult res;
  std::vector<double> hs = h_list;
  std::sort(hs.begin(), hs.end(), std::greater<>());
  for (double h : hs) {
    if (h < 0) throw Error("h_list", "negative step");
    StepNormRow row;
    row.h = h;
    row.norm = weighted_l2_norm(metric, atlas.global_grid(), global_step(q, atlas, q.t + h));
    row.ratio = h > 0 ? (row.norm - 1.0) / h : 0.0;
    res.c_fit = std::max(res.c_fit, row.ratio);
    res.rows.push_back(row);
  }
  // Bounded: the ratios over the finer half do not outgrow the coarser half.
  const std::size_t n = res.rows.size();
  const std::size_t half = n / 2;
  double coarse = 0.0, fine = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    (j < half ? coarse : fine) = std::max(j < half ? coarse : fine, res.rows[j].ratio);
  const std::size_t tail = std::min<std::size_t>(3, n);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t j = n - tail; j < n; ++j) {
    lo = std::min(lo, res.rows[j].ratio);
    hi = std::max(hi, res.rows[j].ratio);
  }
  res.variation = res.c_fit > 0 ? (hi - lo) / res.c_fit : 0.0;
  res.bounded = std::isfinite(res.c_fit) && fine <= 1.5 * coarse + 1e-9;
  return res;
}

CMat manifold_reference(const MetricField& metric, const PeriodicGrid& grid, double final_time) {
  if (grid.dim() != 1 || grid.length(0) != kTwoPi) throw Error("grid", "expected S^1 grid");
  const int n = grid.points(0);
  CMat dhat = CMat::Zero(n, n);
  for (int k = 0; k < n; ++k)
    if (!(n % 2 == 0 && k == n / 2)) dhat(k, k) = cplx(0.0, grid.frequency(0, k));
  const Eigen::MatrixXd d = to_physical_basis(grid, dhat).real();
  RVec q(n);  // g0^{-1/4}
  for (int j = 0; j < n; ++j) q[j] = std::pow(metric.g(0.0, grid.point(0, j)), -0.25);
  const Eigen::MatrixXd k = q.asDiagonal() * d * q.asDiagonal();
  const Eigen::MatrixXd s = -(k * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s + s.transpose()));
  const double lam = metric.integrated_rate(final_time) - metric.integrated_rate(0.0);
  const RVec e = (-lam * es.eigenvalues().array()).exp();
  const Eigen::MatrixXd core = es.eigenvectors() * e.asDiagonal() * es.eigenvectors().transpose();
  const Eigen::MatrixXd u = q.asDiagonal() * core * q.cwiseInverse().asDiagonal();
  return u.cast<cplx>();
}

ManifoldConvergenceResult manifold_convergence(const MetricField& metric,
                                               const ChartAtlas& atlas, double final_time,
                                               const std::vector<int>& n_list) {
  if (n_list.size() < 4) throw Error("n_list", "need at least four subdivisions");
  const PeriodicGrid grid = atlas.global_grid();
  const int n = grid.points(0);
  const CMat u = manifold_reference(metric, grid, final_time);
  CMat pi_hat = CMat::Identity(n, n);
  pi_hat(n / 2, n / 2) = 0.0;
  const CMat pi = to_physical_basis(grid, pi_hat);
  ManifoldConvergenceResult res;
  res.final_time = final_time;
  res.alpha = metric.alpha();
  std::vector<ManifoldConvergenceRow> rows(n_list.size());
  parallel_for(0, n_list.size(), [&](std::size_t j) {
    const auto sub = Subdivision::uniform(final_time, n_list[j]);
    const CMat w = manifold_knot_matrices(metric, atlas, sub).back();
    rows[j].steps = n_list[j];
    rows[j].mesh = sub.mesh();
    rows[j].error = weighted_l2_norm(metric, grid, pi * (w - u) * pi);
  });
  res.rows = rows;
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) pts.emplace_back(r.mesh, r.error);
  res.fit = fit_rate(pts, res.alpha - 0.25, res.alpha + 0.25);
  return res;
}

}  // namespace pdo
