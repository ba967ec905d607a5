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

#include "pdo/rate_fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pdo/grid.hpp"

namespace pdo {

namespace {

struct Line {
  double slope, intercept;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw Error("points", "scales must not all coincide");
  const double b = sxy / sxx;
  return {b, my - b * mx};
}

}  // namespace

RateFit fit_rate(const std::vector<std::pair<double, double>>& points, double lo,
                 double hi) {
  if (points.size() < 4) throw Error("points", "need at least 4 points for a rate fit");
  RateFit fit;
  fit.lo = lo;
  fit.hi = hi;
  bool all_zero = true, any_zero = false;
  for (const auto& [s, e] : points) {
    if (!(s > 0)) throw Error("points", "scales must be positive");
    if (e < 0 || !std::isfinite(e)) throw Error("points", "errors must be finite and >= 0");
    all_zero = all_zero && e == 0.0;
    any_zero = any_zero || e == 0.0;
  }
  if (all_zero) {
    fit.exact = true;
    fit.pass = true;
    fit.slope = std::numeric_limits<double>::infinity();
    fit.residuals.assign(points.size(), 0.0);
    fit.points_used = points.size();
    return fit;
  }
  if (any_zero) throw Error("points", "errors must be all positive or all zero");

  std::vector<double> x, y;
  for (const auto& [s, e] : points) {
    x.push_back(std::log2(s));
    y.push_back(std::log2(e));
  }
  Line line = least_squares(x, y);
  fit.residuals.resize(points.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    fit.residuals[i] = y[i] - (line.slope * x[i] + line.intercept);
  fit.points_used = points.size();

  if (points.size() >= 5) {
    const std::size_t big = static_cast<std::size_t>(
        std::max_element(x.begin(), x.end()) - x.begin());
    double rest = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (i != big) rest = std::max(rest, std::abs(fit.residuals[i]));
    const double rb = std::abs(fit.residuals[big]);
    if (rb > 3.0 * rest && rb > 1e-6) {
      std::vector<double> x2, y2;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (i != big) {
          x2.push_back(x[i]);
          y2.push_back(y[i]);
        }
      line = least_squares(x2, y2);
      for (std::size_t i = 0; i < x.size(); ++i)
        fit.residuals[i] = y[i] - (line.slope * x[i] + line.intercept);
      fit.residuals[big] = std::numeric_limits<double>::quiet_NaN();
      fit.dropped_largest = true;
      fit.points_used = x2.size();
    }
  }
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.pass = fit.slope >= lo && fit.slope <= hi;
  return fit;
}

namespace {
std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}
}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw Error("b", "need equal sizes >= 2");
  const std::vector<double> ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace pdo
