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
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include <tomlplusplus/toml.hpp>

#include "pdo/harness.hpp"

namespace pdo {

namespace {

const std::map<std::string, Experiment>& experiment_names() {
  static const std::map<std::string, Experiment> m = {
      {"sharp-norm", Experiment::kSharpNorm},
      {"stability", Experiment::kStability},
      {"consistency", Experiment::kConsistency},
      {"convergence-rn", Experiment::kConvergenceRn},
      {"convergence-manifold", Experiment::kConvergenceManifold},
      {"composition-remainders", Experiment::kCompositionRemainders},
      {"pullback-residual", Experiment::kPullbackResidual},
      {"quantization-oracle", Experiment::kQuantizationOracle},
  };
  return m;
}

std::vector<double> dyadic(int kmin, int kmax) {
  std::vector<double> v;
  for (int k = kmin; k <= kmax; ++k) v.push_back(std::ldexp(1.0, -k));
  return v;
}

std::vector<int> powers_of_two(int lo, int hi) {
  std::vector<int> v;
  for (int n = lo; n <= hi; n *= 2) v.push_back(n);
  return v;
}

const std::set<std::string> kBases = {"curved", "heat", "first-order", "trig"};
const std::set<std::string> kModulations = {"same", "none", "curved", "heat", "first-order"};
const std::set<std::string> kProfiles = {"none", "lacunary", "smooth", "power"};
const std::set<std::string> kRemainders = {"generator-composition", "sobolev-conjugation-weyl",
                                           "sobolev-conjugation-left", "weight-splitting",
                                           "cutoff-conjugation"};
const std::set<std::string> kMaps = {"identity", "affine", "sine"};

// Reads one TOML table, rejecting keys that are never asked for.
class Reader {
 public:
  Reader(const toml::table& t, std::string path) : t_(t), path_(std::move(path)) {}

  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }
  bool has(const std::string& k) const { return t_.contains(k); }

  template <class T>
  void get(const std::string& k, T& out) {
    seen_.insert(k);
    const toml::node* n = t_.get(k);
    if (!n) return;
    if constexpr (std::is_same_v<T, std::string>) {
      if (!n->is_string()) throw ConfigError(key(k), "expected a string");
      out = *n->value<std::string>();
    } else if constexpr (std::is_same_v<T, double>) {
      if (!n->is_number()) throw ConfigError(key(k), "expected a number");
      out = *n->value<double>();
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!n->is_boolean()) throw ConfigError(key(k), "expected a boolean");
      out = *n->value<bool>();
    } else {
      if (!n->is_integer()) throw ConfigError(key(k), "expected an integer");
      const auto v = *n->value<std::int64_t>();
      if (std::is_unsigned_v<T> && v < 0) throw ConfigError(key(k), "must be nonnegative");
      out = static_cast<T>(v);
    }
  }

  template <class T>
  void get_list(const std::string& k, std::vector<T>& out) {
    seen_.insert(k);
    const toml::node* n = t_.get(k);
    if (!n) return;
    std::vector<T> v;
    if (const auto* arr = n->as_array()) {
      for (std::size_t i = 0; i < arr->size(); ++i) {
        const toml::node& e = *arr->get(i);
        const std::string p = key(k) + "[" + std::to_string(i) + "]";
        if constexpr (std::is_same_v<T, std::string>) {
          if (!e.is_string()) throw ConfigError(p, "expected a string");
          v.push_back(*e.value<std::string>());
        } else if constexpr (std::is_same_v<T, double>) {
          if (!e.is_number()) throw ConfigError(p, "expected a number");
          v.push_back(*e.value<double>());
        } else {
          if (!e.is_integer()) throw ConfigError(p, "expected an integer");
          v.push_back(static_cast<T>(*e.value<std::int64_t>()));
        }
      }
    } else if constexpr (std::is_same_v<T, double>) {
      if (!n->is_number()) throw ConfigError(key(k), "expected a number or a list");
      v.push_back(*n->value<double>());
    } else {
      throw ConfigError(key(k), "expected a list");
    }
    out = std::move(v);
  }

  const toml::table* table(const std::string& k) {
    seen_.insert(k);
    const toml::node* n = t_.get(k);
    if (!n) return nullptr;
    if (!n->is_table()) throw ConfigError(key(k), "expected a table");
    return n->as_table();
  }

  const toml::array* array(const std::string& k) {
    seen_.insert(k);
    const toml::node* n = t_.get(k);
    if (!n) return nullptr;
    if (!n->is_array()) throw ConfigError(key(k), "expected an array");
    return n->as_array();
  }

  void finish() const {
    for (auto&& [k, v] : t_) {
      const std::string name(k.str());
      if (!seen_.count(name)) throw ConfigError(key(name), "unknown key");
    }
  }

 private:
  const toml::table& t_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_dyadic(Reader& r, const std::string& range_key, const std::string& list_key,
                 std::vector<double>& out) {
  std::vector<int> range;
  r.get_list(range_key, range);
  if (!range.empty()) {
    if (range.size() != 2 || range[0] > range[1])
      throw ConfigError(r.key(range_key), "expected [kmin, kmax] with kmin <= kmax");
    out = dyadic(range[0], range[1]);
  }
  r.get_list(list_key, out);
}

std::vector<TrigTerm> read_terms(const toml::array& arr, const std::string& path) {
  std::vector<TrigTerm> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const auto* t = arr.get(i)->as_table();
    if (!t) throw ConfigError(p, "expected a table");
    Reader r(*t, p);
    TrigTerm term;
    double re = 0.0, im = 0.0;
    r.get_list("k", term.k);
    r.get_list("p", term.p);
    r.get("re", re);
    r.get("im", im);
    r.finish();
    term.c = cplx(re, im);
    out.push_back(term);
  }
  return out;
}

void apply_table(const toml::table& root, ExperimentConfig& c) {
  Reader r(root, "");
  std::string preset_name;
  r.get("preset", preset_name);
  if (!preset_name.empty()) c = preset(preset_name);
  r.get("name", c.name);
  std::string exp;
  r.get("experiment", exp);
  if (!exp.empty()) c.experiment = parse_experiment(exp);
  r.get("seed", c.seed);
  r.get_list("s", c.s_list);
  r.get_list("r", c.r_list);

  if (const auto* t = r.table("grid")) {
    Reader g(*t, "grid");
    g.get("n", c.grid.n);
    g.get("N", c.grid.points);
    g.get("L", c.grid.length);
    g.finish();
  }
  if (const auto* t = r.table("symbol")) {
    Reader s(*t, "symbol");
    s.get("base", c.symbol.base);
    s.get("modulation", c.symbol.modulation);
    s.get("profile", c.symbol.profile);
    s.get("alpha", c.symbol.alpha);
    s.get("amplitude", c.symbol.amplitude);
    s.get("period", c.symbol.period);
    if (const auto* a = s.array("terms")) c.symbol.terms = read_terms(*a, "symbol.terms");
    s.finish();
  }
  if (const auto* t = r.table("sweep")) {
    Reader s(*t, "sweep");
    read_dyadic(s, "h_range", "h_list", c.sweep.h_list);
    s.get_list("N_list", c.sweep.n_list);
    s.get("final_time", c.sweep.final_time);
    s.get("t", c.sweep.t);
    s.finish();
  }
  if (const auto* t = r.table("output")) {
    Reader o(*t, "output");
    o.get("dir", c.out_dir);
    o.get("format", c.format);
    o.finish();
  }
  if (const auto* t = r.table("stability")) {
    Reader s(*t, "stability");
    s.get("sharp_N", c.sharp_points);
    read_dyadic(s, "sharp_h_range", "sharp_h_list", c.sharp_h_list);
    s.finish();
  }
  if (const auto* t = r.table("remainders")) {
    Reader s(*t, "remainders");
    std::vector<std::string> kinds;
    s.get_list("kinds", kinds);
    std::vector<RemainderRun> runs;
    for (const auto& k : kinds)
      for (double v : c.s_list) runs.push_back({k, v});
    if (const auto* a = s.array("runs")) {
      for (std::size_t i = 0; i < a->size(); ++i) {
        const std::string p = "remainders.runs[" + std::to_string(i) + "]";
        const auto* rt = a->get(i)->as_table();
        if (!rt) throw ConfigError(p, "expected a table");
        Reader rr(*rt, p);
        RemainderRun run;
        rr.get("kind", run.kind);
        rr.get("s", run.s);
        rr.finish();
        runs.push_back(run);
      }
    }
    if (s.has("kinds") || s.has("runs")) c.remainders = std::move(runs);
    s.finish();
  }
  if (const auto* t = r.table("manifold")) {
    Reader s(*t, "manifold");
    s.get("local_points", c.local_points);
    read_dyadic(s, "step_h_range", "step_h_list", c.step_h_list);
    s.finish();
  }
  if (const auto* t = r.table("pullback")) {
    Reader s(*t, "pullback");
    s.get_list("maps", c.maps);
    s.finish();
  }
  if (const auto* t = r.table("oracle")) {
    Reader s(*t, "oracle");
    s.get("count", c.oracle_count);
    s.get_list("N", c.oracle_points);
    s.finish();
  }
  r.finish();
}

struct PresetEntry {
  std::string description;
  ExperimentConfig config;
};

const std::map<std::string, PresetEntry>& presets() {
  static const std::map<std::string, PresetEntry> m = [] {
    std::map<std::string, PresetEntry> out;
    auto add = [&](const std::string& name, const std::string& desc, auto&& fill) {
      ExperimentConfig c;
      c.name = name;
      fill(c);
      out[name] = {desc, c};
    };
    add("oracle", "dense kernel vs FFT application, 20 random trig symbols, n = 1, 2",
        [](ExperimentConfig& c) {
          c.experiment = Experiment::kQuantizationOracle;
          c.symbol.base = "trig";
        });
    add("exactness", "x- and t-independent xi^2: multi-product equals the exact flow",
        [](ExperimentConfig& c) {
          c.experiment = Experiment::kConvergenceRn;
          c.symbol.base = "heat";
          c.symbol.modulation = "none";
          c.sweep.final_time = 0.5;
          c.sweep.n_list = {1, 4, 16, 64};
        });
    add("identity-n8", "heat flow on an 8-point grid: errors vanish to rounding",
        [](ExperimentConfig& c) {
          c.experiment = Experiment::kConvergenceRn;
          c.grid.points = 8;
          c.symbol.base = "heat";
          c.symbol.modulation = "none";
          c.sweep.final_time = 0.5;
          c.sweep.n_list = {1, 2, 4, 8};
        });
    add("curved-1d", "sharp norm of e^{-h q} for the curved symbol, s = 0, 1",
        [](ExperimentConfig& c) {
          c.experiment = Experiment::kSharpNorm;
          c.grid.points = 512;
          c.sweep.h_list = dyadic(4, 10);
          c.s_list = {0.0, 1.0};
        });
    add("stability-curved", "sup of multi-product norms over N = 2..256, T = 1/8",
        [](ExperimentConfig& c) {
          c.experiment = Experiment::kStability;
          c.grid.points = 128;
          c.sweep.final_time = 0.125;
          c.sweep.n_list = powers_of_two(2, 256);
          c.s_list = {0.0, 1.0};
          c.sharp_points = 512;
          c.sharp_h_list = dyadic(4, 10);
        });
    for (double alpha : {0.5, 1.0}) {
      const std::string tag = alpha < 1 ? "half" : "one";
      add("consistency-" + tag, "defect rate for curved + t^alpha first-order family",
          [alpha](ExperimentConfig& c) {
            c.experiment = Experiment::kConsistency;
            c.grid.points = 256;
            c.symbol.modulation = "first-order";
            c.symbol.profile = "power";
            c.symbol.alpha = alpha;
            c.sweep.h_list = dyadic(4, 10);
            c.s_list = {0.0, 1.0};
          });
      add("holder-" + tag,
          alpha < 1 ? "convergence for the lacunary Hoelder-1/2 family, r = 0, 1/2"
                    : "convergence for the smooth family, r = 0, 1/2",
          [alpha](ExperimentConfig& c) {
            c.experiment = Experiment::kConvergenceRn;
            c.symbol.profile = alpha < 1 ? "lacunary" : "smooth";
            c.symbol.alpha = alpha;
            c.sweep.final_time = 1.0;
            c.sweep.n_list = powers_of_two(4, 256);
            c.r_list = {0.0, 0.5};
          });
      add("curved-manifold-" + tag, "two-chart circle, curved metric, step norms and rate",
          [alpha](ExperimentConfig& c) {
            c.experiment = Experiment::kConvergenceManifold;
            c.symbol.profile = alpha < 1 ? "lacunary" : "smooth";
            c.symbol.alpha = alpha;
            c.symbol.period = 1.0 / 16;
            c.sweep.final_time = 1.0 / 16;
            c.sweep.n_list = powers_of_two(4, 256);
            c.step_h_list = dyadic(3, 9);
          });
    }
    add("remainders", "composition remainder sweeps, N = 2048, h = 2^-8..2^-14",
        [](ExperimentConfig& c) {
          c.experiment = Experiment::kCompositionRemainders;
          c.grid.points = 2048;
          c.sweep.h_list = dyadic(8, 14);
          c.remainders = {{"generator-composition", 0.0},
                          {"sobolev-conjugation-weyl", 1.0},
                          {"sobolev-conjugation-left", 1.0},
                          {"weight-splitting", 1.0},
                          {"cutoff-conjugation", 0.0}};
        });
    add("pullback", "change-of-variables residual for identity, affine and sine maps",
        [](ExperimentConfig& c) {
          c.experiment = Experiment::kPullbackResidual;
          c.grid.points = 256;
          c.sweep.h_list = dyadic(3, 9);
          c.maps = {"identity", "affine", "sine"};
        });
    return out;
  }();
  return m;
}

std::shared_ptr<const SymbolFunction> named_symbol(const std::string& name) {
  if (name == "curved") return std::make_shared<const SymbolFunction>(curved_symbol());
  if (name == "heat") return std::make_shared<const SymbolFunction>(heat_symbol(1));
  if (name == "first-order") return std::make_shared<const SymbolFunction>(first_order_symbol());
  throw ConfigError("symbol.base", "unknown symbol '" + name + "'");
}

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& [k, v] : experiment_names())
    if (v == e) return k;
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  auto it = experiment_names().find(name);
  if (it == experiment_names().end()) throw ConfigError("experiment", "unknown '" + name + "'");
  return it->second;
}

ExperimentConfig parse_config(const std::string& text) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << e.description() << " at line " << e.source().begin.line;
    throw ConfigError("toml", os.str());
  }
  ExperimentConfig c;
  apply_table(root, c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

std::vector<PresetInfo> list_presets() {
  std::vector<PresetInfo> out;
  for (const auto& [k, v] : presets()) out.push_back({k, v.description});
  return out;
}

ExperimentConfig preset(const std::string& name) {
  auto it = presets().find(name);
  if (it == presets().end()) throw ConfigError("preset", "unknown preset '" + name + "'");
  return it->second.config;
}

TimeProfile resolve_profile(const ExperimentConfig& cfg) {
  const SymbolSpec& s = cfg.symbol;
  if (s.profile == "lacunary") return lacunary_profile(s.alpha, s.amplitude, s.period);
  if (s.profile == "smooth") return smooth_profile();
  if (s.profile == "power") return power_profile(s.alpha);
  if (s.profile == "none") return TimeProfile{};
  throw ConfigError("symbol.profile", "unknown profile '" + s.profile + "'");
}

SymbolFunction resolve_base(const ExperimentConfig& cfg) {
  const SymbolSpec& s = cfg.symbol;
  if (s.base != "trig") return *named_symbol(s.base);
  if (s.terms.empty()) throw ConfigError("symbol.terms", "trig base needs terms");
  const int n = cfg.grid.n;
  std::vector<double> lengths(n, cfg.grid.length);
  double order = 0.0;
  for (std::size_t i = 0; i < s.terms.size(); ++i) {
    const auto& t = s.terms[i];
    const std::string p = "symbol.terms[" + std::to_string(i) + "]";
    if (static_cast<int>(t.k.size()) != n) throw ConfigError(p + ".k", "length must equal grid.n");
    if (static_cast<int>(t.p.size()) != n) throw ConfigError(p + ".p", "length must equal grid.n");
    int deg = 0;
    for (int a : t.p) {
      if (a < 0) throw ConfigError(p + ".p", "powers must be nonnegative");
      deg += a;
    }
    if (deg > 2) throw ConfigError(p + ".p", "total xi degree must be <= 2");
    order = std::max(order, static_cast<double>(deg));
  }
  SymbolFunction sym = trig_poly_symbol(n, s.terms, lengths, order);
  // q2: real part of the degree-2 terms; q1: everything else.
  auto top = std::make_shared<SymbolFunction>(trig_poly_symbol(
      n,
      [&] {
        std::vector<TrigTerm> v;
        for (const auto& t : s.terms) {
          int deg = 0;
          for (int a : t.p) deg += a;
          if (deg == 2) v.push_back(t);
        }
        if (v.empty()) v.push_back({std::vector<int>(n, 0), std::vector<int>(n, 0), 0.0});
        return v;
      }(),
      lengths, 2.0));
  auto full = std::make_shared<SymbolFunction>(sym);
  sym.with_split(
      [top](double t, const double* x, const double* xi) { return (*top)(t, x, xi).real(); },
      [top, full](double t, const double* x, const double* xi) {
        return (*full)(t, x, xi) - cplx((*top)(t, x, xi).real(), 0.0);
      });
  return sym;
}

SymbolFunction resolve_symbol(const ExperimentConfig& cfg) {
  const SymbolSpec& s = cfg.symbol;
  auto qa = std::make_shared<const SymbolFunction>(resolve_base(cfg));
  if (s.profile == "none" || s.modulation == "none") return *qa;
  auto qb = s.modulation == "same" ? qa : named_symbol(s.modulation);
  return family_symbol(qa, qb, resolve_profile(cfg));
}

namespace {

void validate_impl(const ExperimentConfig& c) {
  if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos)
    throw ConfigError("name", "must be a plain file stem");
  if (c.grid.n < 1 || c.grid.n > 2) throw ConfigError("grid.n", "must be 1 or 2");
  if (c.grid.points < 8 || c.grid.points % 2) throw ConfigError("grid.N", "must be even and >= 8");
  if (!(c.grid.length > 0)) throw ConfigError("grid.L", "must be positive");
  if (!kBases.count(c.symbol.base)) throw ConfigError("symbol.base", "unknown '" + c.symbol.base + "'");
  if (!kModulations.count(c.symbol.modulation))
    throw ConfigError("symbol.modulation", "unknown '" + c.symbol.modulation + "'");
  if (!kProfiles.count(c.symbol.profile))
    throw ConfigError("symbol.profile", "unknown '" + c.symbol.profile + "'");
  if (c.symbol.profile == "lacunary" && !(c.symbol.alpha > 0 && c.symbol.alpha < 1))
    throw ConfigError("symbol.alpha", "lacunary profile needs alpha in (0, 1)");
  if (c.symbol.profile == "power" && !(c.symbol.alpha > 0 && c.symbol.alpha <= 1))
    throw ConfigError("symbol.alpha", "power profile needs alpha in (0, 1]");
  if (!(c.symbol.period > 0)) throw ConfigError("symbol.period", "must be positive");
  if (c.format != "csv" && c.format != "json" && c.format != "both")
    throw ConfigError("output.format", "must be csv, json or both");
  for (std::size_t i = 0; i < c.sweep.h_list.size(); ++i)
    if (!(c.sweep.h_list[i] > 0))
      throw ConfigError("sweep.h_list[" + std::to_string(i) + "]", "must be positive");
  for (std::size_t i = 0; i < c.sweep.n_list.size(); ++i)
    if (c.sweep.n_list[i] < 1)
      throw ConfigError("sweep.N_list[" + std::to_string(i) + "]", "must be >= 1");
  if (!(c.sweep.final_time > 0)) throw ConfigError("sweep.final_time", "must be positive");
  if (c.s_list.empty()) throw ConfigError("s", "need at least one value");
  for (double r : c.r_list)
    if (r < 0 || r > 1) throw ConfigError("r", "must be in [0, 1]");

  const bool one_d = c.grid.n == 1;
  auto need_rate = [](std::size_t n, const char* path) {
    if (n < 4) throw ConfigError(path, "rate fits need at least 4 points");
  };
  switch (c.experiment) {
    case Experiment::kSharpNorm:
      need_rate(c.sweep.h_list.size(), "sweep.h_list");
      break;
    case Experiment::kStability:
      need_rate(c.sweep.n_list.size(), "sweep.N_list");
      need_rate(c.sharp_h_list.size(), "stability.sharp_h_list");
      if (c.sharp_points < 8 || c.sharp_points % 2)
        throw ConfigError("stability.sharp_N", "must be even and >= 8");
      break;
    case Experiment::kConsistency:
      need_rate(c.sweep.h_list.size(), "sweep.h_list");
      if (c.symbol.profile == "none") throw ConfigError("symbol.profile", "consistency needs a family");
      break;
    case Experiment::kConvergenceRn: {
      const SymbolFunction q = resolve_symbol(c);
      const bool exact = q.x_independent() && q.time_independent();
      if (!exact) need_rate(c.sweep.n_list.size(), "sweep.N_list");
      if (c.sweep.n_list.empty()) throw ConfigError("sweep.N_list", "empty");
      if (c.r_list.empty()) throw ConfigError("r", "need at least one value");
      break;
    }
    case Experiment::kConvergenceManifold:
      if (!one_d) throw ConfigError("grid.n", "the manifold is S^1");
      if (c.symbol.base != "curved" && c.symbol.base != "heat")
        throw ConfigError("symbol.base", "manifold metric is 'curved' or 'heat' (flat)");
      if (c.grid.length != kTwoPi) throw ConfigError("grid.L", "S^1 has length 2 pi");
      need_rate(c.sweep.n_list.size(), "sweep.N_list");
      need_rate(c.step_h_list.size(), "manifold.step_h_list");
      if (c.local_points < 8 || c.local_points % 2)
        throw ConfigError("manifold.local_points", "must be even and >= 8");
      break;
    case Experiment::kCompositionRemainders:
      if (!one_d) throw ConfigError("grid.n", "remainder sweeps are 1-D");
      need_rate(c.sweep.h_list.size(), "sweep.h_list");
      if (c.remainders.empty()) throw ConfigError("remainders.runs", "empty");
      for (std::size_t i = 0; i < c.remainders.size(); ++i) {
        const std::string p = "remainders.runs[" + std::to_string(i) + "]";
        if (!kRemainders.count(c.remainders[i].kind))
          throw ConfigError(p + ".kind", "unknown '" + c.remainders[i].kind + "'");
        if (c.remainders[i].s < 0) throw ConfigError(p + ".s", "must be nonnegative");
      }
      break;
    case Experiment::kPullbackResidual:
      if (!one_d) throw ConfigError("grid.n", "pullback sweeps are 1-D");
      if (c.symbol.base != "curved" && c.symbol.base != "heat")
        throw ConfigError("symbol.base", "pullback operator is 'curved' or 'heat'");
      if (c.grid.length != kTwoPi) throw ConfigError("grid.L", "maps act on R / 2 pi Z");
      need_rate(c.sweep.h_list.size(), "sweep.h_list");
      if (c.maps.empty()) throw ConfigError("pullback.maps", "empty");
      for (std::size_t i = 0; i < c.maps.size(); ++i)
        if (!kMaps.count(c.maps[i]))
          throw ConfigError("pullback.maps[" + std::to_string(i) + "]",
                            "unknown '" + c.maps[i] + "'");
      break;
    case Experiment::kQuantizationOracle:
      if (c.oracle_count < 1) throw ConfigError("oracle.count", "must be >= 1");
      if (c.oracle_points.size() != 2) throw ConfigError("oracle.N", "expected [N for n=1, N for n=2]");
      for (int p : c.oracle_points)
        if (p < 8 || p % 2) throw ConfigError("oracle.N", "must be even and >= 8");
      break;
  }

  // Presets and custom symbols must be elliptic where a flow is computed.
  const bool flows = c.experiment != Experiment::kQuantizationOracle &&
                     c.experiment != Experiment::kConvergenceManifold &&
                     c.experiment != Experiment::kPullbackResidual;
  if (flows) {
    const SymbolFunction q = resolve_symbol(c);
    const PeriodicGrid g(c.grid.n, std::min(c.grid.points, 64), c.grid.length);
    bool ok = false;
    if (q.has_split()) ok = verify_ellipticity(q, c.sweep.t, g).ok;
    else if (resolve_base(c).has_split()) ok = verify_ellipticity(resolve_base(c), 0.0, g).ok;
    if (!ok) throw ConfigError("symbol", "resolved symbol fails the ellipticity check");
  }
}

}  // namespace

void validate(const ExperimentConfig& c) {
  try {
    validate_impl(c);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.field() == "tol" ? "symbol" : "symbol." + e.field(), e.what());
  }
}

}  // namespace pdo
