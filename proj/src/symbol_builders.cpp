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
#include <cmath>
#include <map>
#include <memory>
#include <utility>

#include "pdo/symbols.hpp"

namespace pdo {

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Calls fn(sub) for every multi-index sub <= full (componentwise).
template <class F>
void for_each_sub(const std::vector<int>& full, F&& fn) {
  std::vector<int> sub(full.size(), 0);
  while (true) {
    fn(sub);
    std::size_t a = 0;
    while (a < full.size()) {
      if (sub[a] < full[a]) {
        ++sub[a];
        break;
      }
      sub[a] = 0;
      ++a;
    }
    if (a == full.size()) return;
  }
}

std::vector<int> joined(int n, const int* ax, const int* bxi) {
  std::vector<int> g(2 * n);
  for (int a = 0; a < n; ++a) {
    g[a] = ax[a];
    g[n + a] = bxi[a];
  }
  return g;
}

bool all_zero(int n, const int* ax, const int* bxi) {
  for (int a = 0; a < n; ++a)
    if (ax[a] != 0 || bxi[a] != 0) return false;
  return true;
}

cplx deriv_or_value(const SymbolFunction& s, double t, const double* x,
                    const double* xi, const std::vector<int>& g) {
  const int n = s.dim();
  if (all_zero(n, g.data(), g.data() + n)) return s(t, x, xi);
  return s.derivative(t, x, xi, g.data(), g.data() + n);
}

void require_same_dim(const SymbolFunction& a, const SymbolFunction& b) {
  if (a.dim() != b.dim()) throw Error("b", "dimension mismatch");
}

}  // namespace

SymbolFunction trig_poly_symbol(int dim, std::vector<TrigTerm> terms,
                                std::vector<double> lengths, double order) {
  if (static_cast<int>(lengths.size()) != dim) throw Error("lengths", "one per axis");
  for (const auto& t : terms)
    if (static_cast<int>(t.k.size()) != dim || static_cast<int>(t.p.size()) != dim)
      throw Error("terms", "k and p need one entry per axis");
  auto data = std::make_shared<std::pair<std::vector<TrigTerm>, std::vector<double>>>(
      std::move(terms), std::move(lengths));
  auto eval = [data, dim](double, const double* x, const double* xi) {
    cplx acc = 0.0;
    for (const auto& t : data->first) {
      double ph = 0.0;
      cplx v = t.c;
      for (int a = 0; a < dim; ++a) {
        ph += kTwoPi * t.k[a] * x[a] / data->second[a];
        v *= std::pow(xi[a], t.p[a]);
      }
      acc += v * std::polar(1.0, ph);
    }
    return acc;
  };
  auto deriv = [data, dim](double, const double* x, const double* xi, const int* ax,
                           const int* bxi) {
    cplx acc = 0.0;
    for (const auto& t : data->first) {
      double ph = 0.0;
      cplx v = t.c;
      for (int a = 0; a < dim; ++a) {
        if (bxi[a] > t.p[a]) {
          v = 0.0;
          break;
        }
        const double w = kTwoPi * t.k[a] / data->second[a];
        ph += w * x[a];
        v *= std::pow(cplx(0.0, w), ax[a]);
        double f = 1.0;
        for (int r = 0; r < bxi[a]; ++r) f *= t.p[a] - r;
        v *= f * std::pow(xi[a], t.p[a] - bxi[a]);
      }
      if (v != 0.0) acc += v * std::polar(1.0, ph);
    }
    return acc;
  };
  bool xind = true;
  for (const auto& t : data->first)
    for (int k : t.k) xind = xind && k == 0;
  SymbolFunction s(dim, eval, order);
  s.with_derivatives(deriv).with_x_independent(xind).with_trig_data(
      std::make_shared<TrigData>(TrigData{data->first, data->second}));
  return s;
}

SymbolFunction heat_symbol(int dim) {
  std::vector<TrigTerm> terms;
  for (int a = 0; a < dim; ++a) {
    TrigTerm t{std::vector<int>(dim, 0), std::vector<int>(dim, 0), 1.0};
    t.p[a] = 2;
    terms.push_back(t);
  }
  SymbolFunction s = trig_poly_symbol(dim, terms, std::vector<double>(dim, kTwoPi), 2.0);
  s.with_split(
       [dim](double, const double*, const double* xi) {
         double r = 0.0;
         for (int a = 0; a < dim; ++a) r += xi[a] * xi[a];
         return r;
       },
       [](double, const double*, const double*) { return cplx(0.0); })
      .with_ellipticity(1.0, 1.0);
  return s;
}

SymbolFunction curved_symbol() {
  const std::vector<TrigTerm> terms = {
      {{0}, {2}, 1.0},   {{1}, {2}, 0.25}, {{-1}, {2}, 0.25},
      {{1}, {1}, 0.5},   {{-1}, {1}, -0.5},
  };
  SymbolFunction s = trig_poly_symbol(1, terms, {kTwoPi}, 2.0);
  s.with_split(
       [](double, const double* x, const double* xi) {
         return (1.0 + 0.5 * std::cos(x[0])) * xi[0] * xi[0];
       },
       [](double, const double* x, const double* xi) {
         return cplx(0.0, xi[0] * std::sin(x[0]));
       })
      .with_ellipticity(0.5, 1.0);
  return s;
}

SymbolFunction first_order_symbol() {
  const std::vector<TrigTerm> terms = {
      {{0}, {1}, cplx(0.0, 1.0)}, {{1}, {1}, 0.25}, {{-1}, {1}, -0.25},
      {{1}, {0}, 0.25},           {{-1}, {0}, 0.25},
  };
  SymbolFunction s = trig_poly_symbol(1, terms, {kTwoPi}, 1.0);
  s.with_split([](double, const double*, const double*) { return 0.0; },
               [](double, const double* x, const double* xi) {
                 return cplx(0.5 * std::cos(x[0]),
                             (1.0 + 0.5 * std::sin(x[0])) * xi[0]);
               });
  return s;
}

SymbolFunction japanese_power_symbol(int dim, int s) {
  if (s < 0) throw Error("s", "must be a nonnegative integer");
  std::vector<TrigTerm> one = {{std::vector<int>(dim, 0), std::vector<int>(dim, 0), 1.0}};
  SymbolFunction base = trig_poly_symbol(dim, one, std::vector<double>(dim, kTwoPi), 0.0);
  SymbolFunction factor = symbol_sum(base, heat_symbol(dim));
  SymbolFunction acc = base;
  for (int i = 0; i < s; ++i) acc = symbol_product(acc, factor);
  return acc;
}

SymbolFunction multiplier_x(int dim, std::vector<TrigTerm> terms,
                            std::vector<double> lengths) {
  for (auto& t : terms) t.p.assign(dim, 0);
  return trig_poly_symbol(dim, std::move(terms), std::move(lengths), 0.0);
}

SymbolFunction symbol_product(const SymbolFunction& a, const SymbolFunction& b) {
  require_same_dim(a, b);
  const int n = a.dim();
  SymbolFunction s(n, [a, b](double t, const double* x, const double* xi) {
    return a(t, x, xi) * b(t, x, xi);
  }, a.order() + b.order());
  if (a.has_derivatives() && b.has_derivatives()) {
    s.with_derivatives([a, b, n](double t, const double* x, const double* xi,
                                 const int* ax, const int* bxi) {
      const std::vector<int> g = joined(n, ax, bxi);
      cplx acc = 0.0;
      std::vector<int> rest(2 * n);
      for_each_sub(g, [&](const std::vector<int>& d) {
        double c = 1.0;
        for (int i = 0; i < 2 * n; ++i) {
          c *= binom(g[i], d[i]);
          rest[i] = g[i] - d[i];
        }
        acc += c * deriv_or_value(a, t, x, xi, d) * deriv_or_value(b, t, x, xi, rest);
      });
      return acc;
    });
  }
  s.with_x_independent(a.x_independent() && b.x_independent())
      .with_time_independent(a.time_independent() && b.time_independent());
  return s;
}

SymbolFunction symbol_sum(const SymbolFunction& a, const SymbolFunction& b) {
  require_same_dim(a, b);
  SymbolFunction s(a.dim(), [a, b](double t, const double* x, const double* xi) {
    return a(t, x, xi) + b(t, x, xi);
  }, std::max(a.order(), b.order()));
  if (a.has_derivatives() && b.has_derivatives()) {
    s.with_derivatives([a, b](double t, const double* x, const double* xi,
                              const int* ax, const int* bxi) {
      return a.derivative(t, x, xi, ax, bxi) + b.derivative(t, x, xi, ax, bxi);
    });
  }
  s.with_x_independent(a.x_independent() && b.x_independent())
      .with_time_independent(a.time_independent() && b.time_independent());
  return s;
}

SymbolFunction symbol_scale(const SymbolFunction& a, cplx c) {
  SymbolFunction s(a.dim(), [a, c](double t, const double* x, const double* xi) {
    return c * a(t, x, xi);
  }, a.order());
  if (a.has_derivatives()) {
    s.with_derivatives([a, c](double t, const double* x, const double* xi,
                              const int* ax, const int* bxi) {
      return c * a.derivative(t, x, xi, ax, bxi);
    });
  }
  s.with_x_independent(a.x_independent()).with_time_independent(a.time_independent());
  return s;
}

SymbolFunction symbol_conj(const SymbolFunction& a) {
  SymbolFunction s(a.dim(), [a](double t, const double* x, const double* xi) {
    return std::conj(a(t, x, xi));
  }, a.order());
  if (a.has_derivatives()) {
    s.with_derivatives([a](double t, const double* x, const double* xi,
                           const int* ax, const int* bxi) {
      return std::conj(a.derivative(t, x, xi, ax, bxi));
    });
  }
  s.with_x_independent(a.x_independent()).with_time_independent(a.time_independent());
  return s;
}

SymbolFunction symbol_exp(const SymbolFunction& q, double t0, double h) {
  const int n = q.dim();
  auto clip = [](cplx e) { return e.real() < -745.0 ? cplx(0.0) : std::exp(e); };
  SymbolFunction s(n, [q, t0, h, clip](double, const double* x, const double* xi) {
    return h == 0.0 ? cplx(1.0) : clip(-h * q(t0, x, xi));
  }, 0.0);
  if (q.has_derivatives()) {
    // d^g E = sum_{d <= g - e} C(g - e, d) d^d E d^{g - d}(-h q), where e is
    // the first nonzero direction of g.
    s.with_derivatives([q, t0, h, n, clip](double, const double* x, const double* xi,
                                           const int* ax, const int* bxi) -> cplx {
      if (h == 0.0) return all_zero(n, ax, bxi) ? cplx(1.0) : cplx(0.0);
      std::map<std::vector<int>, cplx> memo_e, memo_g;
      auto g_of = [&](const std::vector<int>& m) {
        auto it = memo_g.find(m);
        if (it != memo_g.end()) return it->second;
        const cplx v = -h * deriv_or_value(q, t0, x, xi, m);
        memo_g.emplace(m, v);
        return v;
      };
      std::function<cplx(const std::vector<int>&)> e_of = [&](const std::vector<int>& m) {
        auto it = memo_e.find(m);
        if (it != memo_e.end()) return it->second;
        std::size_t first = 0;
        while (first < m.size() && m[first] == 0) ++first;
        cplx v;
        if (first == m.size()) {
          v = clip(g_of(m));
        } else {
          std::vector<int> red = m;
          --red[first];
          v = 0.0;
          std::vector<int> rest(m.size());
          for_each_sub(red, [&](const std::vector<int>& d) {
            double c = 1.0;
            for (std::size_t i = 0; i < m.size(); ++i) {
              c *= binom(red[i], d[i]);
              rest[i] = m[i] - d[i];
            }
            v += c * e_of(d) * g_of(rest);
          });
        }
        memo_e.emplace(m, v);
        return v;
      };
      return e_of(joined(n, ax, bxi));
    });
  }
  s.with_x_independent(q.x_independent());
  return s;
}

SymbolFunction symbol_abs2_exp(const SymbolFunction& q, double t, double h) {
  return symbol_exp(symbol_sum(q, symbol_conj(q)), t, h);
}

SymbolFunction symbol_at(const SymbolFunction& q, double t0) {
  SymbolFunction s(q.dim(), [q, t0](double, const double* x, const double* xi) {
    return q(t0, x, xi);
  }, q.order());
  if (q.has_derivatives()) {
    s.with_derivatives([q, t0](double, const double* x, const double* xi,
                               const int* ax, const int* bxi) {
      return q.derivative(t0, x, xi, ax, bxi);
    });
  }
  if (q.has_split()) {
    s.with_split([q, t0](double, const double* x, const double* xi) {
      return q.q2(t0, x, xi);
    }, [q, t0](double, const double* x, const double* xi) { return q.q1(t0, x, xi); });
  }
  if (q.ellipticity()) s.with_ellipticity(q.ellipticity()->c, q.ellipticity()->theta);
  s.with_x_independent(q.x_independent());
  return s;
}

SymbolFunction family_symbol(std::shared_ptr<const SymbolFunction> qa,
                             std::shared_ptr<const SymbolFunction> qb,
                             std::function<double(double)> f,
                             std::function<double(double)> F, double alpha,
                             double holder_constant) {
  require_same_dim(*qa, *qb);
  SymbolFunction s(qa->dim(), [qa, qb, f](double t, const double* x, const double* xi) {
    return (*qa)(t, x, xi) + f(t) * (*qb)(t, x, xi);
  }, std::max(qa->order(), qb->order()));
  if (qa->has_derivatives() && qb->has_derivatives()) {
    s.with_derivatives([qa, qb, f](double t, const double* x, const double* xi,
                                   const int* ax, const int* bxi) {
      return qa->derivative(t, x, xi, ax, bxi) + f(t) * qb->derivative(t, x, xi, ax, bxi);
    });
  }
  if (qa->has_split()) {
    const bool bsplit = qb->has_split();
    s.with_split(
        [qa, qb, f, bsplit](double t, const double* x, const double* xi) {
          return qa->q2(t, x, xi) + (bsplit ? f(t) * qb->q2(t, x, xi) : 0.0);
        },
        [qa, qb, f, bsplit](double t, const double* x, const double* xi) {
          return qa->q1(t, x, xi) +
                 f(t) * (bsplit ? qb->q1(t, x, xi) : (*qb)(t, x, xi));
        });
  }
  if (qa->ellipticity()) s.with_ellipticity(qa->ellipticity()->c, qa->ellipticity()->theta);
  auto fam = std::make_shared<TimeFamily>(TimeFamily{qa, qb, f, F});
  s.with_holder(alpha, holder_constant)
      .with_x_independent(qa->x_independent() && qb->x_independent())
      .with_time_independent(false)
      .with_family(std::move(fam));
  return s;
}

TimeProfile lacunary_profile(double alpha, double c, double period, int modes) {
  if (!(alpha > 0 && alpha < 1)) throw Error("alpha", "must lie in (0, 1)");
  if (!(period > 0)) throw Error("period", "must be positive");
  auto amp = std::make_shared<std::vector<double>>();
  auto om = std::make_shared<std::vector<double>>();
  for (int j = 0; j < modes; ++j) {
    amp->push_back(c * std::pow(2.0, -j * alpha));
    om->push_back(kTwoPi * std::ldexp(1.0, j) / period);
  }
  TimeProfile p;
  p.f = [amp, om](double t) {
    double v = 0.0;
    for (std::size_t j = 0; j < amp->size(); ++j) v += (*amp)[j] * (1.0 - std::cos((*om)[j] * t));
    return v;
  };
  p.F = [amp, om](double t) {
    double v = 0.0;
    for (std::size_t j = 0; j < amp->size(); ++j)
      v += (*amp)[j] * (t - std::sin((*om)[j] * t) / (*om)[j]);
    return v;
  };
  p.alpha = alpha;
  // Low modes via the derivative bound, high modes via the sup bound.
  p.constant = std::abs(c) * (std::pow(kTwoPi / period, alpha) / (1.0 - std::pow(2.0, alpha - 1.0)) +
                              2.0 / (1.0 - std::pow(2.0, -alpha)));
  return p;
}

TimeProfile smooth_profile() {
  TimeProfile p;
  p.f = [](double t) { return 0.5 * std::sin(kTwoPi * t) + t; };
  p.F = [](double t) { return 0.5 * (1.0 - std::cos(kTwoPi * t)) / kTwoPi + 0.5 * t * t; };
  p.alpha = 1.0;
  p.constant = 0.5 * kTwoPi + 1.0;
  return p;
}

TimeProfile power_profile(double alpha) {
  if (!(alpha > 0 && alpha <= 1)) throw Error("alpha", "must lie in (0, 1]");
  TimeProfile p;
  p.f = [alpha](double t) { return std::pow(std::max(t, 0.0), alpha); };
  p.F = [alpha](double t) { return std::pow(std::max(t, 0.0), alpha + 1.0) / (alpha + 1.0); };
  p.alpha = alpha;
  p.constant = 1.0;
  return p;
}

SymbolFunction family_symbol(std::shared_ptr<const SymbolFunction> qa,
                             std::shared_ptr<const SymbolFunction> qb,
                             const TimeProfile& profile) {
  return family_symbol(std::move(qa), std::move(qb), profile.f, profile.F, profile.alpha,
                       profile.constant);
}

}  // namespace pdo
