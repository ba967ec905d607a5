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

#ifndef PDO_PROPAGATOR_HPP_
#define PDO_PROPAGATOR_HPP_

#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "pdo/grid.hpp"
#include "pdo/symbols.hpp"
#include "pdo/weyl.hpp"

namespace pdo {

// Raised when an iterative numerical procedure fails to reach its tolerance.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(std::string field, const std::string& what)
      : Error(std::move(field), what) {}
};

// Time mesh 0 = t^(0) < ... < t^(N) = T.
class Subdivision {
 public:
  explicit Subdivision(std::vector<double> knots);
  static Subdivision uniform(double final_time, int steps);

  int steps() const { return static_cast<int>(knots_.size()) - 1; }
  double final_time() const { return knots_.back(); }
  double knot(int j) const { return knots_[j]; }
  const std::vector<double>& knots() const { return knots_; }
  double mesh() const { return mesh_; }
  // k in [0, N-1] with t^(k) <= t <= t^(k+1); t outside [0, T] throws.
  int locate(double t) const;

 private:
  std::vector<double> knots_;
  double mesh_;
};

// P_(t', t) = quantize(exp(-(t' - t) q(t))). t' = t gives the identity.
QuantizedOperator step(const SymbolFunction& q, double t, double t_prime,
                       const PeriodicGrid& grid, QuantPath path = QuantPath::kFft);

// W_{P,t} = P_(t, t^(k)) P_(t^(k), t^(k-1)) ... P_(t^(1), 0).
class MultiProduct {
 public:
  MultiProduct(std::shared_ptr<const SymbolFunction> q, Subdivision subdivision,
               PeriodicGrid grid, QuantPath path = QuantPath::kFft);

  const Subdivision& subdivision() const { return sub_; }
  const PeriodicGrid& grid() const { return grid_; }

  CVec apply(double t, const CVec& u0) const;
  GridField apply(double t, const GridField& u0) const;
  // W at every knot t^(0..N), from one sweep.
  std::vector<CVec> knot_values(const CVec& u0) const;
  // Knot step P_(t^(j+1), t^(j)); built on first use.
  const QuantizedOperator& knot_step(int j) const;

 private:
  std::shared_ptr<const SymbolFunction> q_;
  Subdivision sub_;
  PeriodicGrid grid_;
  QuantPath path_;
  mutable std::mutex mu_;
  mutable std::vector<std::unique_ptr<QuantizedOperator>> cache_;
};

// Fourier-basis matrix of W_{P,T}, plus the matrices at every knot when
// requested (index j is W at t^(j)).
std::vector<CMat> multiproduct_knot_matrices(const SymbolFunction& q, const Subdivision& sub,
                                             const PeriodicGrid& grid);

// ---------------------------------------------------------------------------
// Reference solutions of d_t u + q^w(t) u = 0.

enum class ReferenceMethod {
  kAuto,
  kExactMultiplier,   // x independent q: exp(-int q dt) per mode
  kFineMultiproduct,  // multi-product with 4096 uniform steps
  kMethodOfLines,     // classical RK4 with step halving
  kEigen,             // diagonalization of q_a^w, q = g(t) q_a families
  kPade,              // scaling and squaring matrix exponential, same families
};

std::string to_string(ReferenceMethod m);

struct ReferenceSolution {
  ReferenceMethod solver = ReferenceMethod::kAuto;
  double tolerance = 0.0;  // achieved (estimated) error
  int steps = 0;           // time steps, quadrature nodes or 0 for closed forms
};

// Solves to final time T from u0. tol >= 1e-11.
std::pair<GridField, ReferenceSolution> reference_solve(
    const SymbolFunction& q, double final_time, const GridField& u0, double tol,
    ReferenceMethod method = ReferenceMethod::kAuto);

// Fourier-basis solution operators U(t, 0) at each requested time.
std::pair<std::vector<CMat>, ReferenceSolution> reference_operators(
    const SymbolFunction& q, const std::vector<double>& times, const PeriodicGrid& grid,
    double tol, ReferenceMethod method = ReferenceMethod::kAuto);

// True when q = qa + f(t) qa, so all q(t) commute and U(T) = exp(-G(T) qa^w)
// with G(t) = t + F(t).
bool is_separable_family(const SymbolFunction& q);

}  // namespace pdo

#endif  // PDO_PROPAGATOR_HPP_
