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

#ifndef PDO_SYMBOLS_HPP_
#define PDO_SYMBOLS_HPP_

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "pdo/grid.hpp"

namespace pdo {

// q(t, x, xi). x and xi point at dim() doubles.
using SymbolEval = std::function<cplx(double t, const double* x, const double* xi)>;
// d_x^ax d_xi^bxi q(t, x, xi); ax and bxi point at dim() ints.
using SymbolDeriv = std::function<cplx(double t, const double* x, const double* xi,
                                       const int* ax, const int* bxi)>;

struct Ellipticity {
  double c = 0.0;      // lower constant in q2 + Re q1 >= c |xi|^2
  double theta = 0.0;  // threshold radius
};

struct HolderCertificate {
  double alpha = 1.0;
  double constant = 0.0;
};

class SymbolFunction;

// One term c * exp(i k.x 2pi/L) * prod xi_a^p_a.
struct TrigTerm {
  std::vector<int> k;
  std::vector<int> p;
  cplx c;
};


// Separable form sum_t c_t e^{i k_t.x 2pi/L} xi^p_t, kept for fast sampling.
struct TrigData {
  std::vector<TrigTerm> terms;
  std::vector<double> lengths;
};

// q(t) = qa + f(t) qb with qa, qb time independent. F is a primitive of f
// with F(0) = 0, used by exact references.
struct TimeFamily {
  std::shared_ptr<const SymbolFunction> qa;
  std::shared_ptr<const SymbolFunction> qb;
  std::function<double(double)> f;
  std::function<double(double)> F;
};

class SymbolFunction {
 public:
  SymbolFunction(int dim, SymbolEval eval, double order);

  int dim() const { return dim_; }
  double order() const { return order_; }
  cplx operator()(double t, const double* x, const double* xi) const {
    return eval_(t, x, xi);
  }

  bool has_derivatives() const { return static_cast<bool>(deriv_); }
  // Throws if no analytic derivatives were supplied.
  cplx derivative(double t, const double* x, const double* xi, const int* ax,
                  const int* bxi) const;

  bool has_split() const { return static_cast<bool>(q2_); }
  double q2(double t, const double* x, const double* xi) const;
  cplx q1(double t, const double* x, const double* xi) const;

  const std::optional<Ellipticity>& ellipticity() const { return ellip_; }
  const std::optional<HolderCertificate>& holder() const { return holder_; }
  bool x_independent() const { return x_independent_; }
  bool time_independent() const { return time_independent_; }
  const std::shared_ptr<const TimeFamily>& family() const { return family_; }

  SymbolFunction& with_derivatives(SymbolDeriv d);
  SymbolFunction& with_split(std::function<double(double, const double*, const double*)> q2,
                             SymbolEval q1);
  SymbolFunction& with_ellipticity(double c, double theta);
  SymbolFunction& with_holder(double alpha, double constant);
  SymbolFunction& with_x_independent(bool v);
  SymbolFunction& with_time_independent(bool v);
  SymbolFunction& with_family(std::shared_ptr<const TimeFamily> fam);
  SymbolFunction& with_trig_data(std::shared_ptr<const TrigData> d);
  const std::shared_ptr<const TrigData>& trig_data() const { return trig_; }

  const SymbolEval& eval() const { return eval_; }
  const SymbolDeriv& deriv() const { return deriv_; }

 private:
  int dim_;
  SymbolEval eval_;
  double order_;
  SymbolDeriv deriv_;
  std::function<double(double, const double*, const double*)> q2_;
  SymbolEval q1_;
  std::optional<Ellipticity> ellip_;
  std::optional<HolderCertificate> holder_;
  bool x_independent_ = false;
  bool time_independent_ = true;
  std::shared_ptr<const TimeFamily> family_;
  std::shared_ptr<const TrigData> trig_;
};

// ---------------------------------------------------------------------------
// Builders with exact derivatives.

SymbolFunction trig_poly_symbol(int dim, std::vector<TrigTerm> terms,
                                std::vector<double> lengths, double order);
// |xi|^2.
SymbolFunction heat_symbol(int dim);
// (1 + cos(x)/2) xi^2 + i xi sin(x), split and ellipticity attached (n = 1).
SymbolFunction curved_symbol();
// i (1 + sin(x)/2) xi + cos(x)/2 (n = 1).
SymbolFunction first_order_symbol();
// <xi>^(2s) for s a nonnegative integer power of |xi|^2 (exact polynomial).
SymbolFunction japanese_power_symbol(int dim, int s);
// Symbol a(x) only, from a trig polynomial in x with exact derivatives.
SymbolFunction multiplier_x(int dim, std::vector<TrigTerm> terms,
                            std::vector<double> lengths);

SymbolFunction symbol_product(const SymbolFunction& a, const SymbolFunction& b);
SymbolFunction symbol_sum(const SymbolFunction& a, const SymbolFunction& b);
SymbolFunction symbol_scale(const SymbolFunction& a, cplx c);
SymbolFunction symbol_conj(const SymbolFunction& a);
// exp(-h q(t, x, xi)), time frozen at t.
SymbolFunction symbol_exp(const SymbolFunction& q, double t, double h);
// |exp(-h q)|^2 = exp(-2 h Re q).
SymbolFunction symbol_abs2_exp(const SymbolFunction& q, double t, double h);
// Freezes time at t.
SymbolFunction symbol_at(const SymbolFunction& q, double t);
// qa + f(t) qb with the Hoelder exponent alpha recorded.
SymbolFunction family_symbol(std::shared_ptr<const SymbolFunction> qa,
                             std::shared_ptr<const SymbolFunction> qb,
                             std::function<double(double)> f,
                             std::function<double(double)> F, double alpha,
                             double holder_constant);

// Scalar time profiles f(t) with primitive F(0) = 0 for family_symbol.
struct TimeProfile {
  std::function<double(double)> f;
  std::function<double(double)> F;
  double alpha = 1.0;
  double constant = 0.0;  // Hoelder constant certificate
};
// c sum_{j < modes} 2^{-j alpha} (1 - cos(2 pi 2^j t / period)), alpha in (0, 1).
// Hoelder-alpha uniformly in t; vanishing modes j >= m on dyadic knots of
// [0, period] make left-endpoint errors scale exactly like the mesh^alpha.
TimeProfile lacunary_profile(double alpha, double c, double period, int modes = 60);
// sin(2 pi t) / 2 + t.
TimeProfile smooth_profile();
// t^alpha.
TimeProfile power_profile(double alpha);
// qa + f(t) qb from a profile.
SymbolFunction family_symbol(std::shared_ptr<const SymbolFunction> qa,
                             std::shared_ptr<const SymbolFunction> qb,
                             const TimeProfile& profile);

// ---------------------------------------------------------------------------
// Sampled symbols.
//
// x runs over the midpoint grid z_M = M L/(2N), M in [0, 2N)^n, row-major.
// xi runs over the half lattice pi kappa / L, kappa in [-N, N-1]^n, stored
// with index kappa + N, row-major. values(x_index, xi_index).
class SampledSymbol {
 public:
  SampledSymbol(PeriodicGrid grid, double t, CMat values,
                std::shared_ptr<const SymbolFunction> source = nullptr);

  const PeriodicGrid& grid() const { return grid_; }
  double time_stamp() const { return t_; }
  const CMat& values() const { return values_; }
  CMat& mutable_values() { return values_; }
  // Analytic source evaluated at time_stamp(), when known.
  const std::shared_ptr<const SymbolFunction>& source() const { return source_; }

  std::size_t x_size() const { return values_.rows(); }
  std::size_t xi_size() const { return values_.cols(); }
  void x_point(std::size_t ix, double* x) const;
  void xi_point(std::size_t ik, double* xi) const;

 private:
  PeriodicGrid grid_;
  double t_;
  CMat values_;
  std::shared_ptr<const SymbolFunction> source_;
};

// The (2N)^n midpoint grid of a primal grid.
PeriodicGrid midpoint_grid(const PeriodicGrid& grid);
std::size_t half_lattice_size(const PeriodicGrid& grid);
void midpoint_point(const PeriodicGrid& grid, std::size_t ix, double* x);
void half_lattice_point(const PeriodicGrid& grid, std::size_t ik, double* xi);

SampledSymbol sample(const SymbolFunction& sym, double t, const PeriodicGrid& grid);

struct EllipticityResult {
  bool ok;
  double margin;
};
EllipticityResult verify_ellipticity(const SymbolFunction& sym, double t,
                                     const PeriodicGrid& grid);

SampledSymbol exp_symbol(const SymbolFunction& sym, double t, double h,
                         const PeriodicGrid& grid);

// d_x^ax d_xi^bxi of a sampled symbol. Uses the analytic source when present,
// otherwise spectral differentiation in x and fourth-order finite differences
// in xi (one-sided at the lattice edges).
CMat symbol_derivative(const SampledSymbol& a, const int* ax, const int* bxi);
CMat numeric_derivative(const SampledSymbol& a, const int* ax, const int* bxi);

SampledSymbol poisson_bracket(const SampledSymbol& a, const SampledSymbol& b);

struct SeminormEntry {
  std::vector<int> ax;
  std::vector<int> bxi;
  double value;
};
struct SeminormReport {
  double m;
  std::vector<SeminormEntry> entries;
  double get(const std::vector<int>& ax, const std::vector<int>& bxi) const;
  double max_value() const;
};
SeminormReport seminorms(const SampledSymbol& a, double m, int max_order);

// Pointwise operations on sampled symbols sharing the same grid.
SampledSymbol sampled_product(const SampledSymbol& a, const SampledSymbol& b);

}  // namespace pdo

#endif  // PDO_SYMBOLS_HPP_
