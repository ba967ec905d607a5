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

#include "pdo/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "pdo/parallel.hpp"

namespace pdo {

namespace {

CMat weighted(const PeriodicGrid& grid, const CMat& f, double s_in, double s_out) {
  const RVec wo = sobolev_weights(grid, s_out);
  const RVec wi = sobolev_weights(grid, -s_in);
  return wo.asDiagonal() * f * wi.asDiagonal();
}

std::optional<RateFit> try_fit(const std::vector<SweepPoint>& pts, double lo, double hi) {
  if (pts.size() < 4) return std::nullopt;
  std::vector<std::pair<double, double>> v;
  for (const auto& p : pts) v.emplace_back(p.scale, p.error);
  try {
    return fit_rate(v, lo, hi);
  } catch (const Error&) {
    return std::nullopt;  // mixed zero and nonzero errors: no rate
  }
}

double holder_alpha(const SymbolFunction& q) {
  if (q.holder()) return q.holder()->alpha;
  if (q.time_independent()) return 1.0;
  throw Error("symbols", "Hoelder exponent unknown");
}

}  // namespace

// ---------------------------------------------------------------------------

SharpNormResult sharp_norm_sweep(const SymbolFunction& q, double t, double s,
                                 const std::vector<double>& h_list, const PeriodicGrid& grid,
                                 NormMethod method) {
  if (h_list.empty()) throw Error("h_list", "must be nonempty");
  for (double h : h_list)
    if (!(h >= 0)) throw Error("h_list", "steps must be nonnegative");
  SharpNormResult res;
  res.t = t;
  res.s = s;
  res.rows.resize(h_list.size());
  parallel_for(0, h_list.size(), [&](std::size_t i) {
    const double h = h_list[i];
    const QuantizedOperator p = step(q, t, t + h, grid);
    SharpNormRow row;
    row.h = h;
    if (method == NormMethod::kDense) {
      row.norm = fourier_operator_norm(grid, p.fourier_matrix(), s, s);
    } else {
      const OperatorNormEstimate est = operator_norm(grid, {ChainStep::apply(p)}, s, s);
      row.norm = est.value;
      row.iterations = est.iterations;
      row.converged = est.converged;
    }
    row.ratio = h > 0 ? (row.norm - 1.0) / h : 0.0;
    res.rows[i] = row;
  });
  double c = 0.0;
  for (const auto& r : res.rows) {
    c = std::max(c, r.ratio);
    res.converged = res.converged && r.converged;
  }
  res.c_fit = c;
  res.bounded = std::isfinite(c);
  for (const auto& r : res.rows)
    res.bounded = res.bounded && r.norm <= 1.0 + c * r.h + 1e-12;
  // Ratios at the three finest h.
  std::vector<SharpNormRow> sorted = res.rows;
  std::sort(sorted.begin(), sorted.end(),
            [](const SharpNormRow& a, const SharpNormRow& b) { return a.h < b.h; });
  const std::size_t m = std::min<std::size_t>(3, sorted.size());
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < m; ++i) {
    lo = std::min(lo, sorted[i].ratio);
    hi = std::max(hi, sorted[i].ratio);
  }
  res.variation = hi > 1e-9 ? (hi - lo) / hi : 0.0;
  return res;
}

// ---------------------------------------------------------------------------

StabilityResult stability_sweep(const SymbolFunction& q, double final_time, double s,
                                const std::vector<int>& n_list, const PeriodicGrid& grid,
                                double c_fit) {
  if (n_list.empty()) throw Error("n_list", "must be nonempty");
  StabilityResult res;
  res.final_time = final_time;
  res.s = s;
  res.c_fit = c_fit;
  res.bound = std::exp(c_fit * final_time);
  res.rows.resize(n_list.size());
  parallel_for(0, n_list.size(), [&](std::size_t i) {
    const Subdivision sub = Subdivision::uniform(final_time, n_list[i]);
    const auto n = static_cast<Eigen::Index>(grid.size());
    CMat w = CMat::Identity(n, n);
    CMat fixed;
    if (q.time_independent())
      fixed = weighted(grid, step(q, 0.0, sub.knot(1), grid).fourier_matrix(), s, s);
    StabilityRow row;
    row.steps = n_list[i];
    for (int k = 0; k < sub.steps(); ++k) {
      if (q.time_independent()) {
        w = fixed * w;
      } else {
        w = weighted(grid, step(q, sub.knot(k), sub.knot(k + 1), grid).fourier_matrix(), s, s) * w;
      }
      const double nk = dense_operator_norm(w);
      if (nk > row.sup_norm) {
        row.sup_norm = nk;
        row.argmax_knot = k + 1;
      }
    }
    res.rows[i] = row;
  });
  std::vector<double> ns, sups;
  res.bounded = true;
  for (const auto& r : res.rows) {
    ns.push_back(r.steps);
    sups.push_back(r.sup_norm);
    res.bounded = res.bounded && r.sup_norm <= res.bound * (1.0 + 1e-12);
  }
  res.spearman = ns.size() >= 2 ? spearman(ns, sups) : 0.0;
  return res;
}

// ---------------------------------------------------------------------------

ConsistencyResult consistency_sweep(const SymbolFunction& q, double t, double s,
                                    const std::vector<double>& h_list,
                                    const PeriodicGrid& grid) {
  if (h_list.size() < 4) throw Error("h_list", "need at least 4 values");
  ConsistencyResult res;
  res.t = t;
  res.s = s;
  res.alpha = holder_alpha(q);
  res.points.resize(h_list.size());
  const SampledSymbol qt = sample(q, t, grid);
  parallel_for(0, h_list.size(), [&](std::size_t i) {
    const double h = h_list[i];
    if (!(h > 0)) throw Error("h_list", "steps must be positive");
    const SampledSymbol p = exp_symbol(q, t, h, grid);
    const CMat a = quantize(sample(q, t + h, grid)).fourier_matrix();
    const CMat pf = quantize(p).fourier_matrix();
    const CMat r = quantize(sampled_product(qt, p)).fourier_matrix();
    res.points[i] = {h, fourier_operator_norm(grid, a * pf - r, s, s - 2.0)};
  });
  res.fit = fit_rate([&] {
    std::vector<std::pair<double, double>> v;
    for (const auto& p : res.points) v.emplace_back(p.scale, p.error);
    return v;
  }(), res.alpha - 0.15, res.alpha + 0.15);
  return res;
}

// ---------------------------------------------------------------------------

ConvergenceResult convergence_sweep(const SymbolFunction& q, double final_time, double s,
                                    double r, const std::vector<int>& n_list,
                                    const PeriodicGrid& grid, const ConvergenceOptions& opts) {
  if (n_list.empty()) throw Error("n_list", "must be nonempty");
  if (!(r >= 0.0 && r < 1.0)) throw Error("r", "must lie in [0, 1)");
  ConvergenceResult res;
  res.final_time = final_time;
  res.s = s;
  res.r = r;
  res.alpha = holder_alpha(q);
  const auto n = static_cast<Eigen::Index>(grid.size());

  // Initial datum and probes, H^s normalized, in the Fourier basis.
  CVec u0;
  if (opts.u0) {
    u0 = fft_forward(grid, *opts.u0);
  } else {
    GridField f = sample_field(grid, [&](const double* x) {
      double a = 0.0;
      for (int d = 0; d < grid.dim(); ++d) a += std::sin(kTwoPi * x[d] / grid.length(d));
      return cplx(std::exp(a));
    });
    u0 = fft_forward(grid, f.values);
  }
  const RVec ws = sobolev_weights(grid, s);
  const RVec wsr = sobolev_weights(grid, s - 1.0 + r);
  u0 /= (ws.asDiagonal() * u0).norm();
  std::vector<CVec> probes;
  {
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> nd;
    for (int j = 0; j < 8; ++j) {
      CVec v(n);
      for (Eigen::Index i = 0; i < n; ++i) v[i] = cplx(nd(rng), nd(rng)) / ws[i];
      v /= (ws.asDiagonal() * v).norm();
      probes.push_back(v);
    }
  }

  // Cross-solver certification at T and the knots of the coarsest mesh.
  {
    const int n_min = *std::min_element(n_list.begin(), n_list.end());
    std::vector<double> times = Subdivision::uniform(final_time, n_min).knots();
    auto [a, ia] = reference_operators(q, times, grid, opts.reference_tol, opts.primary);
    auto [b, ib] = reference_operators(q, times, grid, opts.reference_tol, opts.secondary);
    double gap = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k)
      gap = std::max(gap, dense_operator_norm(a[k] - b[k]) /
                              std::max(dense_operator_norm(a[k]), 1e-300));
    res.reference = ia;
    res.secondary_reference = ib;
    res.reference_agreement = gap;
  }

  res.rows.resize(n_list.size());
  std::vector<ReferenceSolution> infos(n_list.size());
  parallel_for(0, n_list.size(), [&](std::size_t i) {
    const Subdivision sub = Subdivision::uniform(final_time, n_list[i]);
    const std::vector<CMat> w = multiproduct_knot_matrices(q, sub, grid);
    auto [u, info] = reference_operators(q, sub.knots(), grid, opts.reference_tol, opts.primary);
    infos[i] = info;
    ConvergenceRow row;
    row.steps = n_list[i];
    row.mesh = sub.mesh();
    const CMat e = w.back() - u.back();
    row.final_operator = fourier_operator_norm(grid, e, s, s - 1.0 + r);
    for (const auto& v : probes)
      row.final_probe = std::max(row.final_probe, (wsr.asDiagonal() * (e * v)).norm());
    row.strong = (ws.asDiagonal() * (e * u0)).norm();
    double acc = 0.0, acc_u = 0.0;
    for (int k = 1; k <= sub.steps(); ++k) {
      const double dt = sub.knot(k) - sub.knot(k - 1);
      const CMat ek = w[k] - u[k];
      const double nk = fourier_operator_norm(grid, ek, s, s);
      acc += nk * nk * dt;
      const double uk = (ws.asDiagonal() * (ek * u0)).norm();
      acc_u += uk * uk * dt;
    }
    row.integrated_operator = std::sqrt(acc);
    row.integrated_strong = std::sqrt(acc_u);
    res.rows[i] = row;
  });
  for (const auto& info : infos)
    res.reference.tolerance = std::max(res.reference.tolerance, info.tolerance);

  auto series = [&](double ConvergenceRow::*m) {
    std::vector<SweepPoint> pts;
    for (const auto& row : res.rows) pts.push_back({row.mesh, row.*m});
    return pts;
  };
  const double a1r = res.alpha * (1.0 - r);
  if (auto f = try_fit(series(&ConvergenceRow::final_operator), a1r - 0.25, a1r + 0.25))
    res.final_fit = *f;
  if (auto f = try_fit(series(&ConvergenceRow::final_probe), a1r - 0.25, a1r + 0.25))
    res.probe_fit = *f;
  if (auto f = try_fit(series(&ConvergenceRow::integrated_operator), res.alpha - 0.25,
                       res.alpha + 0.25))
    res.integrated_fit = *f;
  if (auto f = try_fit(series(&ConvergenceRow::strong), -std::numeric_limits<double>::infinity(),
                       std::numeric_limits<double>::infinity()))
    res.strong_fit = *f;
  return res;
}

// ---------------------------------------------------------------------------
// Banded remainders.

namespace {

cplx clipped_exp(cplx e) { return e.real() < -745.0 ? cplx(0.0) : std::exp(e); }

// Fills col with q(t, x_j, xi); trig polynomials take the separable path.
class ColumnEvaluator {
 public:
  ColumnEvaluator(const SymbolFunction& q, double t) : q_(q), t_(t) {
    if (q.dim() != 1) throw Error("symbols", "banded sweeps need n = 1");
  }
  void operator()(double xi, const RVec& x, CVec& col) {
    const auto& td = q_.trig_data();
    if (!td || q_.family()) {
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double xv = x[j];
        col[j] = q_(t_, &xv, &xi);
      }
      return;
    }
    if (phases_.cols() != x.size()) {
      phases_.resize(static_cast<Eigen::Index>(td->terms.size()), x.size());
      for (std::size_t ti = 0; ti < td->terms.size(); ++ti)
        for (Eigen::Index j = 0; j < x.size(); ++j)
          phases_(ti, j) = std::polar(1.0, kTwoPi * td->terms[ti].k[0] * x[j] / td->lengths[0]);
    }
    CVec c(static_cast<Eigen::Index>(td->terms.size()));
    for (std::size_t ti = 0; ti < td->terms.size(); ++ti)
      c[ti] = td->terms[ti].c * std::pow(xi, td->terms[ti].p[0]);
    col = phases_.transpose() * c;
  }

 private:
  const SymbolFunction& q_;
  double t_;
  CMat phases_;
};

RemainderResult run_remainder(
    std::string name, double s, const std::vector<double>& h_list, const RemainderOptions& opts,
    double s_in, double s_out, const std::function<CyclicBandMatrix(double)>& build) {
  if (h_list.size() < 4) throw Error("h_list", "need at least 4 values");
  RemainderResult res;
  res.name = std::move(name);
  res.s = s;
  res.points.resize(h_list.size());
  res.iterations.resize(h_list.size());
  std::vector<char> conv(h_list.size(), 1);
  parallel_for(0, h_list.size(), [&](std::size_t i) {
    if (!(h_list[i] > 0)) throw Error("h_list", "steps must be positive");
    const CyclicBandMatrix d = build(h_list[i]);
    const OperatorNormEstimate est = band_norm(d, opts.length, s_in, s_out, opts.lanczos);
    res.points[i] = {h_list[i], est.value};
    res.iterations[i] = est.iterations;
    conv[i] = est.converged;
  });
  for (char c : conv) res.converged = res.converged && c;
  std::vector<std::pair<double, double>> v;
  for (const auto& p : res.points) v.emplace_back(p.scale, p.error);
  res.fit = fit_rate(v);
  return res;
}

}  // namespace

OperatorNormEstimate band_norm(const CyclicBandMatrix& m, double length, double s_in,
                               double s_out, const LanczosOptions& opts) {
  const PeriodicGrid g(1, m.size(), length);
  const CyclicBandMatrix t =
      m.scale_rows(sobolev_weights(g, s_out)).scale_cols(sobolev_weights(g, -s_in));
  if (t.bandwidth() == 0) return {0.0, s_in, s_out, 0, 0.0, true};
  OperatorNormEstimate est = lanczos_norm(as_linear_operator(t), opts);
  est.s_in = s_in;
  est.s_out = s_out;
  return est;
}

RemainderResult sobolev_conjugation_remainder(const SymbolFunction& q, double s,
                                              const std::vector<double>& h_list,
                                              Quantization quant, const RemainderOptions& opts) {
  const RVec e2 = sobolev_weights(PeriodicGrid(1, opts.points, opts.length), 2.0 * s);
  return run_remainder(
      quant == Quantization::kWeyl ? "sobolev_conjugation_weyl" : "sobolev_conjugation_left", s,
      h_list, opts, s, -s, [&](double h) {
        ColumnEvaluator qcol(q, 0.0);
        CVec qv;
        BandColumns cols = [&](double xi, const RVec& x, std::vector<CVec>& out) {
          qv.resize(x.size());
          qcol(xi, x, qv);
          const double w = std::pow(1.0 + xi * xi, s);
          for (Eigen::Index j = 0; j < x.size(); ++j) {
            const cplx p = clipped_exp(-h * qv[j]);
            out[0][j] = p;
            out[1][j] = std::conj(p);
            out[2][j] = w * std::norm(p);
          }
        };
        const auto b = quant == Quantization::kWeyl
                           ? weyl_bands(cols, 3, opts.points, opts.length)
                           : left_bands(cols, 3, opts.points, opts.length);
        return b[1].scale_cols(e2) * b[0] - b[2];
      });
}

RemainderResult weight_splitting_remainder(const SymbolFunction& q, double s,
                                           const std::vector<double>& h_list,
                                           const RemainderOptions& opts) {
  const RVec e = sobolev_weights(PeriodicGrid(1, opts.points, opts.length), s);
  return run_remainder("weight_splitting", s, h_list, opts, s, -s, [&](double h) {
    ColumnEvaluator qcol(q, 0.0);
    CVec qv;
    BandColumns cols = [&](double xi, const RVec& x, std::vector<CVec>& out) {
      qv.resize(x.size());
      qcol(xi, x, qv);
      const double w = std::pow(1.0 + xi * xi, s);
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double a2 = std::norm(clipped_exp(-h * qv[j]));
        out[0][j] = a2;
        out[1][j] = w * a2;
      }
    };
    const auto b = weyl_bands(cols, 2, opts.points, opts.length);
    return b[0].scale_rows(e).scale_cols(e) - b[1];
  });
}

RemainderResult generator_composition_remainder(const SymbolFunction& q, double s,
                                                const std::vector<double>& h_list,
                                                const RemainderOptions& opts) {
  CyclicBandMatrix qb(opts.points);
  {
    ColumnEvaluator qcol(q, 0.0);
    qb = std::move(weyl_bands([&](double xi, const RVec& x,
                                  std::vector<CVec>& out) { qcol(xi, x, out[0]); },
                              1, opts.points, opts.length)[0]);
  }
  return run_remainder("generator_composition", s, h_list, opts, s, s - 2.0, [&](double h) {
    ColumnEvaluator qcol(q, 0.0);
    CVec qv;
    BandColumns cols = [&](double xi, const RVec& x, std::vector<CVec>& out) {
      qv.resize(x.size());
      qcol(xi, x, qv);
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        const cplx p = clipped_exp(-h * qv[j]);
        out[0][j] = p;
        out[1][j] = qv[j] * p;
      }
    };
    const auto b = weyl_bands(cols, 2, opts.points, opts.length);
    return qb * b[0] - b[1];
  });
}

RemainderResult cutoff_conjugation_remainder(const SymbolFunction& q,
                                             const std::function<double(double)>& phi,
                                             const std::vector<double>& h_list,
                                             const RemainderOptions& opts) {
  const CyclicBandMatrix f =
      weyl_band([&](double x, double) { return cplx(phi(x)); }, opts.points, opts.length);
  return run_remainder("cutoff_conjugation", 0.0, h_list, opts, 0.0, 0.0, [&](double h) {
    ColumnEvaluator qcol(q, 0.0);
    CVec qv, ph;
    BandColumns cols = [&](double xi, const RVec& x, std::vector<CVec>& out) {
      qv.resize(x.size());
      qcol(xi, x, qv);
      if (ph.size() != x.size()) {
        ph.resize(x.size());
        for (Eigen::Index j = 0; j < x.size(); ++j) ph[j] = phi(x[j]);
      }
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        const cplx p = clipped_exp(-h * qv[j]);
        out[0][j] = p;
        out[1][j] = ph[j] * ph[j] * p;
      }
    };
    const auto b = weyl_bands(cols, 2, opts.points, opts.length);
    return f * b[0] * f - b[1];
  });
}

}  // namespace pdo
