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

#ifndef PDO_SWEEPS_HPP_
#define PDO_SWEEPS_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pdo/propagator.hpp"
#include "pdo/rate_fit.hpp"

namespace pdo {

// Dense: exact Hermitian eigensolve. Power: operator_norm's power iteration.
enum class NormMethod { kDense, kPower };

struct SweepPoint {
  double scale = 0.0;
  double error = 0.0;
};

// ---------------------------------------------------------------------------
// ||p_h^w||_(H^s, H^s) <= 1 + C h.

struct SharpNormRow {
  double h = 0.0;
  double norm = 0.0;
  double ratio = 0.0;  // (norm - 1) / h
  int iterations = 0;
  bool converged = true;
};

struct SharpNormResult {
  double t = 0.0;
  double s = 0.0;
  std::vector<SharpNormRow> rows;
  double c_fit = 0.0;      // max(0, max_h (norm - 1) / h)
  double variation = 0.0;  // (max - min) / max of the ratios at the three finest h
  bool bounded = false;    // norm <= 1 + c_fit h at every h, c_fit finite
  bool converged = true;
};

SharpNormResult sharp_norm_sweep(const SymbolFunction& q, double t, double s,
                                 const std::vector<double>& h_list, const PeriodicGrid& grid,
                                 NormMethod method = NormMethod::kDense);

// ---------------------------------------------------------------------------
// sup_t ||W_{P,t}||_(H^s, H^s) over uniform subdivisions.

struct StabilityRow {
  int steps = 0;
  double sup_norm = 0.0;
  int argmax_knot = 0;
};

struct StabilityResult {
  double final_time = 0.0;
  double s = 0.0;
  double c_fit = 0.0;
  double bound = 0.0;  // e^{c_fit T}
  std::vector<StabilityRow> rows;
  double spearman = 0.0;  // of sup_norm against steps
  bool bounded = false;
};

StabilityResult stability_sweep(const SymbolFunction& q, double final_time, double s,
                                const std::vector<int>& n_list, const PeriodicGrid& grid,
                                double c_fit);

// ---------------------------------------------------------------------------
// ||q(t+h)^w p^w - (q(t) p)^w||_(H^s, H^{s-2}) with p = e^{-h q(t)}.

struct ConsistencyResult {
  double t = 0.0;
  double s = 0.0;
  double alpha = 0.0;
  std::vector<SweepPoint> points;
  RateFit fit;  // band alpha +- 0.15
};

ConsistencyResult consistency_sweep(const SymbolFunction& q, double t, double s,
                                    const std::vector<double>& h_list,
                                    const PeriodicGrid& grid);

// ---------------------------------------------------------------------------
// W_{P,t} against U(t, 0).

struct ConvergenceRow {
  int steps = 0;
  double mesh = 0.0;
  double final_operator = 0.0;      // ||W - U||_(H^s, H^{s-1+r}) at T
  double final_probe = 0.0;         // same, max over 8 fixed probes
  double integrated_operator = 0.0; // sqrt(sum_k ||W - U||^2_(H^s,H^s) dt) over knots
  double integrated_strong = 0.0;   // same with (W - U) u0 in H^s
  double strong = 0.0;              // ||(W - U) u0||_{H^s} / ||u0||_{H^s} at T
};

struct ConvergenceOptions {
  ReferenceMethod primary = ReferenceMethod::kAuto;
  ReferenceMethod secondary = ReferenceMethod::kPade;
  double reference_tol = 1e-11;
  std::uint64_t seed = 20260101;
  std::optional<CVec> u0;  // physical values; default exp(sin(2 pi x / L))
};

struct ConvergenceResult {
  double final_time = 0.0;
  double s = 0.0;
  double r = 0.0;
  double alpha = 0.0;
  std::vector<ConvergenceRow> rows;
  RateFit final_fit;       // final_operator, band alpha (1 - r) +- 0.25
  RateFit probe_fit;       // final_probe, same band
  RateFit integrated_fit;  // integrated_operator, band alpha +- 0.25
  RateFit strong_fit;      // strong, reported only
  ReferenceSolution reference;
  ReferenceSolution secondary_reference;
  double reference_agreement = 0.0;  // max relative operator gap of the two solvers
};

ConvergenceResult convergence_sweep(const SymbolFunction& q, double final_time, double s,
                                    double r, const std::vector<int>& n_list,
                                    const PeriodicGrid& grid,
                                    const ConvergenceOptions& opts = {});

// ---------------------------------------------------------------------------
// Composition remainders on large n = 1 grids, in banded Fourier form.
// The symbol is frozen at t = 0.

enum class Quantization { kWeyl, kLeft };

struct RemainderResult {
  std::string name;
  double s = 0.0;
  std::vector<SweepPoint> points;
  std::vector<int> iterations;
  bool converged = true;
  RateFit fit;
};

struct RemainderOptions {
  int points = 2048;
  double length = kTwoPi;
  LanczosOptions lanczos;
};

// || conj(p)^{op} E^{2s} p^{op} - (<xi>^{2s} |p|^2)^{op} ||_(H^s, H^-s).
RemainderResult sobolev_conjugation_remainder(const SymbolFunction& q, double s,
                                              const std::vector<double>& h_list,
                                              Quantization quant,
                                              const RemainderOptions& opts = {});
// || E^s (|p|^2)^w E^s - (<xi>^{2s} |p|^2)^w ||_(H^s, H^-s).
RemainderResult weight_splitting_remainder(const SymbolFunction& q, double s,
                                           const std::vector<double>& h_list,
                                           const RemainderOptions& opts = {});
// || q^w p^w - (q p)^w ||_(H^s, H^{s-2}).
RemainderResult generator_composition_remainder(const SymbolFunction& q, double s,
                                                const std::vector<double>& h_list,
                                                const RemainderOptions& opts = {});
// || phi^w p^w phi^w - (phi^2 p)^w ||_(L2, L2).
RemainderResult cutoff_conjugation_remainder(const SymbolFunction& q,
                                             const std::function<double(double)>& phi,
                                             const std::vector<double>& h_list,
                                             const RemainderOptions& opts = {});

// Norm of a banded Fourier operator between Sobolev levels (Lanczos).
OperatorNormEstimate band_norm(const CyclicBandMatrix& m, double length, double s_in,
                               double s_out, const LanczosOptions& opts = {});

}  // namespace pdo

#endif  // PDO_SWEEPS_HPP_
