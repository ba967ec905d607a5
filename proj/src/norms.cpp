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

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "pdo/weyl.hpp"

namespace pdo {

LinearOperator as_linear_operator(const CMat& m) {
  auto p = std::make_shared<CMat>(m);
  return {m.rows(), m.cols(), [p](const CVec& v) -> CVec { return *p * v; },
          [p](const CVec& v) -> CVec { return p->adjoint() * v; }};
}

LinearOperator as_linear_operator(const CyclicBandMatrix& m) {
  auto p = std::make_shared<CyclicBandMatrix>(m);
  return {m.size(), m.size(), [p](const CVec& v) { return p->apply(v); },
          [p](const CVec& v) { return p->adjoint_apply(v); }};
}

LinearOperator as_linear_operator(const QuantizedOperator& op) {
  auto p = std::make_shared<QuantizedOperator>(op);
  const auto n = static_cast<Eigen::Index>(op.grid().size());
  return {n, n, [p](const CVec& v) { return p->apply(v); },
          [p](const CVec& v) { return p->adjoint_apply(v); }};
}

OperatorNormEstimate power_norm(const LinearOperator& t, const PowerOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> nd;
  CVec v(t.cols);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = cplx(nd(rng), nd(rng));
  v.normalize();
  OperatorNormEstimate est;
  double lam = 0.0;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    const CVec w = t.adjoint(t.apply(v));
    lam = v.dot(w).real();
    est.iterations = it;
    if (lam <= 0.0) {
      // T v = 0: either T = 0 or an unlucky start; both report the value 0.
      est.value = 0.0;
      est.residual = 0.0;
      est.converged = w.norm() == 0.0;
      if (est.converged) return est;
      v = w.normalized();
      continue;
    }
    est.residual = (w - lam * v).norm() / lam;
    est.value = std::sqrt(lam);
    v = w / w.norm();
    if (est.residual < opts.tolerance) {
      est.converged = true;
      return est;
    }
  }
  est.converged = false;
  return est;
}

OperatorNormEstimate operator_norm(const PeriodicGrid& grid,
                                   const std::vector<ChainStep>& chain, double s_in,
                                   double s_out, const PowerOptions& opts) {
  if (chain.empty()) throw Error("op_chain", "must be nonempty");
  for (const auto& st : chain)
    if ((st.kind == ChainStep::Kind::kOperator || st.kind == ChainStep::Kind::kAdjoint) &&
        st.op->grid() != grid)
      throw Error("op_chain", "grid mismatch");
  const auto n = static_cast<Eigen::Index>(grid.size());
  auto fwd = [grid, chain, s_in, s_out](const CVec& u) {
    CVec v = apply_sobolev_weight(grid, u, -s_in);
    for (const auto& st : chain) {
      switch (st.kind) {
        case ChainStep::Kind::kOperator: v = st.op->apply(v); break;
        case ChainStep::Kind::kAdjoint: v = st.op->adjoint_apply(v); break;
        case ChainStep::Kind::kWeight: v = apply_sobolev_weight(grid, v, st.s); break;
        case ChainStep::Kind::kLinear: v = st.linear.apply(v); break;
      }
    }
    return apply_sobolev_weight(grid, v, s_out);
  };
  auto adj = [grid, chain, s_in, s_out](const CVec& u) {
    CVec v = apply_sobolev_weight(grid, u, s_out);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      switch (it->kind) {
        case ChainStep::Kind::kOperator: v = it->op->adjoint_apply(v); break;
        case ChainStep::Kind::kAdjoint: v = it->op->apply(v); break;
        case ChainStep::Kind::kWeight: v = apply_sobolev_weight(grid, v, it->s); break;
        case ChainStep::Kind::kLinear: v = it->linear.adjoint(v); break;
      }
    }
    return apply_sobolev_weight(grid, v, -s_in);
  };
  OperatorNormEstimate est = power_norm({n, n, fwd, adj}, opts);
  est.s_in = s_in;
  est.s_out = s_out;
  return est;
}

OperatorNormEstimate lanczos_norm(const LinearOperator& t, const LanczosOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> nd;
  CVec v(t.cols);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = cplx(nd(rng), nd(rng));
  v.normalize();
  std::vector<CVec> basis{v};
  std::vector<double> alpha, beta;
  OperatorNormEstimate est;
  const int kmax = std::min<int>(opts.max_iterations, static_cast<int>(t.cols));
  for (int k = 0; k < kmax; ++k) {
    CVec w = t.adjoint(t.apply(basis[k]));
    alpha.push_back(basis[k].dot(w).real());
    // Two passes of classical Gram-Schmidt keep the basis orthogonal.
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : basis) w -= u * u.dot(w);
    const double b = w.norm();
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k + 1, k + 1);
    for (int i = 0; i <= k; ++i) {
      tri(i, i) = alpha[i];
      if (i < k) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    const double theta = es.eigenvalues()[k];
    est.iterations = k + 1;
    est.value = std::sqrt(std::max(theta, 0.0));
    est.residual = theta > 0 ? std::abs(b * es.eigenvectors()(k, k)) / theta : 0.0;
    if (theta <= 0.0 || est.residual < opts.tolerance || b == 0.0) {
      est.converged = true;
      return est;
    }
    beta.push_back(b);
    basis.push_back(w / b);
  }
  // A full Krylov space is exact.
  est.converged = kmax == t.cols;
  return est;
}

double dense_operator_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  const CMat g = m.rows() >= m.cols() ? CMat(m.adjoint() * m) : CMat(m * m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double fourier_operator_norm(const PeriodicGrid& grid, const CMat& fourier, double s_in,
                             double s_out) {
  const RVec wo = sobolev_weights(grid, s_out);
  const RVec wi = sobolev_weights(grid, -s_in);
  return dense_operator_norm(wo.asDiagonal() * fourier * wi.asDiagonal());
}

}  // namespace pdo
