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

#ifndef PDO_ATLAS_HPP_
#define PDO_ATLAS_HPP_

#include <string>
#include <vector>

#include "pdo/diffop.hpp"
#include "pdo/grid.hpp"

namespace pdo {

// Open arc (center - half_width, center + half_width) of R / 2 pi Z.
struct Arc {
  double center = 0.0;
  double half_width = kPi;
  // Signed angle x - center in (-pi, pi].
  double offset(double x) const;
  bool contains(double x) const;
};

// A chart of S^1. Non-periodic charts use
//   iota(z) = center + (z + epsilon sin z) / scale,  |z| < local_half_width,
// with psi = iota^{-1} on the arc. The local box is the periodic interval of
// length 3 local_half_width, coordinate y = z + 1.5 local_half_width.
// A periodic chart is the global angle itself on the whole circle.
struct Chart {
  Arc arc;
  double epsilon = 0.0;
  double scale = 1.0;
  bool periodic = false;
  double local_half_width = kPi;

  double iota(double z) const;
  double diota(double z) const;
  double d2iota(double z) const;
  double psi(double x) const;  // x on the arc
  double box_length() const;
  double box_offset() const;
};

Chart make_chart(double center, double half_width, double epsilon, double scale = 1.0);
Chart periodic_chart();

// Coarse charts carry the inclusion diagnostic. A periodic coarse chart is
// the global angle on a neighborhood of the whole circle.
struct CoarseChart {
  Arc arc;
  bool periodic = false;
};

struct InclusionReport {
  bool ok = false;
  std::vector<bool> per_chart;
  std::string note;
};

struct AtlasOptions {
  int global_points = 64;
  int local_points = 128;
  int fine_points = 2048;  // coefficient algebra grid on S^1
};

// Charts with a square partition sum phi_i^2 = 1,
//   phi_i = b_i / sqrt(sum_j b_j^2),
//   b_i = smoothstep((support_i - |x - c_i|) / (support_i - plateau_i)).
class ChartAtlas {
 public:
  ChartAtlas(std::vector<Chart> charts, std::vector<double> plateau,
             std::vector<double> support, std::vector<CoarseChart> coarse,
             std::vector<int> coarse_of, AtlasOptions opts);

  int size() const { return static_cast<int>(charts_.size()); }
  const Chart& chart(int i) const { return charts_.at(i); }
  const AtlasOptions& options() const { return opts_; }
  PeriodicGrid global_grid() const { return PeriodicGrid(1, opts_.global_points); }
  PeriodicGrid local_grid(int i) const;

  double phi(int i, double x) const;
  // phi_i sampled on the fine coefficient grid.
  const CoefficientField& phi_field(int i) const { return phi_fields_.at(i); }
  double support_radius(int i) const { return support_.at(i); }
  // phi_i on the global grid.
  const RVec& phi_global(int i) const { return phi_global_.at(i); }
  // Local box samples of (psi_i^{-1})^* u from global samples, zero off theta~_i.
  const CMat& restriction(int i) const { return restriction_.at(i); }
  // Global samples of psi_i^* v from local box samples, zero off theta_i.
  const CMat& extension(int i) const { return extension_.at(i); }
  // Fine-grid interpolation onto iota_i of the local midpoint grid (2 N_l points).
  const Eigen::MatrixXd& chart_sampling(int i) const { return sampling_.at(i); }

  // J_i: charts whose arcs meet theta_i (including i); J_i^(2) = union over J_i.
  const std::vector<int>& neighbors(int i) const { return neighbors_.at(i); }
  std::vector<int> second_neighbors(int i) const;
  const std::vector<CoarseChart>& coarse_charts() const { return coarse_; }
  int coarse_of(int i) const { return coarse_of_.at(i); }
  InclusionReport inclusion() const;

  // max |sum phi_i^2 - 1| on the fine grid.
  double partition_residual() const;
  // Distance from supp phi_i to the boundary of theta_i (infinite if periodic).
  double support_margin(int i) const;

 private:
  double bump(int i, double x) const;
  std::vector<Chart> charts_;
  std::vector<double> plateau_;
  std::vector<double> support_;
  std::vector<CoarseChart> coarse_;
  std::vector<int> coarse_of_;
  AtlasOptions opts_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<CoefficientField> phi_fields_;
  std::vector<RVec> phi_global_;
  std::vector<CMat> restriction_;
  std::vector<CMat> extension_;
  std::vector<Eigen::MatrixXd> sampling_;
};

// Two perturbed charts centred at 0 and pi (epsilon 0.2 and -0.15), half
// width 0.92 pi, partition supported in |x - c_i| <= 0.85 pi. Each chart is
// assigned its own periodic coarse chart.
ChartAtlas two_chart_atlas(const AtlasOptions& opts = {});
// One periodic chart with phi = 1.
ChartAtlas single_chart_atlas(const AtlasOptions& opts = {});

// e^{-1/s} / (e^{-1/s} + e^{-1/(1-s)}), clamped to [0, 1].
double smoothstep(double s);

}  // namespace pdo

#endif  // PDO_ATLAS_HPP_
