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

#ifndef PDO_RATE_FIT_HPP_
#define PDO_RATE_FIT_HPP_

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace pdo {

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> residuals;  // per input point, log2 units; NaN if dropped
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool pass = false;
  bool exact = false;             // all errors were zero
  bool dropped_largest = false;   // pre-asymptotic guard fired
  std::size_t points_used = 0;
};

// Least squares of log2(error) against log2(scale). Needs >= 4 points.
// All-zero errors give an exact pass. With >= 5 points the largest-scale
// point is dropped when its residual exceeds 3x every other residual.
RateFit fit_rate(const std::vector<std::pair<double, double>>& points,
                 double lo = -std::numeric_limits<double>::infinity(),
                 double hi = std::numeric_limits<double>::infinity());

// Spearman rank correlation (average ranks for ties).
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace pdo

#endif  // PDO_RATE_FIT_HPP_
