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

#ifndef PDO_HARNESS_HPP_
#define PDO_HARNESS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "pdo/grid.hpp"
#include "pdo/symbols.hpp"

namespace pdo {

inline constexpr const char* kVersion = "1.0.0";

enum class Experiment {
  kSharpNorm,
  kStability,
  kConsistency,
  kConvergenceRn,
  kConvergenceManifold,
  kCompositionRemainders,
  kPullbackResidual,
  kQuantizationOracle,
};

std::string to_string(Experiment e);
Experiment parse_experiment(const std::string& name);  // throws ConfigError

// Config problems carry the dotted field path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct GridSpec {
  int n = 1;
  int points = 64;
  double length = kTwoPi;
};

// q(t) = base + f(t) modulation, f from the profile.
struct SymbolSpec {
  std::string base = "curved";        // curved | heat | first-order | trig
  std::vector<TrigTerm> terms;        // base = "trig"
  std::string modulation = "same";    // same | none | curved | heat | first-order
  std::string profile = "none";       // none | lacunary | smooth | power
  double alpha = 1.0;
  double amplitude = 0.5;             // lacunary c
  double period = 1.0;                // lacunary period
};

struct SweepSpec {
  std::vector<double> h_list;
  std::vector<int> n_list;
  double final_time = 1.0;
  double t = 0.0;
};

// One composition-remainder sweep.
struct RemainderRun {
  std::string kind;  // generator-composition | sobolev-conjugation-weyl |
                     // sobolev-conjugation-left | weight-splitting | cutoff-conjugation
  double s = 0.0;
};

struct ExperimentConfig {
  std::string name = "experiment";
  Experiment experiment = Experiment::kSharpNorm;
  GridSpec grid;
  SymbolSpec symbol;
  SweepSpec sweep;
  std::vector<double> s_list{0.0};
  std::vector<double> r_list{0.0};
  std::uint64_t seed = 20260101;
  std::string out_dir = "results";
  std::string format = "both";  // csv | json | both

  // stability: grid and h list of the C_fit sharp-norm sweep.
  int sharp_points = 512;
  std::vector<double> sharp_h_list;
  // composition-remainders.
  std::vector<RemainderRun> remainders;
  // convergence-manifold.
  int local_points = 128;
  std::vector<double> step_h_list;
  // pullback-residual.
  std::vector<std::string> maps;  // identity | affine | sine
  // quantization-oracle.
  int oracle_count = 20;
  std::vector<int> oracle_points{64, 32};  // per dimension n = 1, 2
};

// TOML text -> config. Unknown keys and bad values raise ConfigError with the
// field path. `preset = "<name>"` starts from a built-in preset.
ExperimentConfig parse_config(const std::string& toml_text);
ExperimentConfig load_config(const std::string& path);
// Structural checks, ellipticity of the resolved symbol, sweep lengths.
void validate(const ExperimentConfig& cfg);

struct PresetInfo {
  std::string name;
  std::string description;
};
std::vector<PresetInfo> list_presets();
ExperimentConfig preset(const std::string& name);  // throws ConfigError

// Resolved symbols.
SymbolFunction resolve_base(const ExperimentConfig& cfg);
SymbolFunction resolve_symbol(const ExperimentConfig& cfg);
TimeProfile resolve_profile(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------

struct ResultRow {
  double scale = 0.0;
  double error = 0.0;
  std::string metric;
  double s = 0.0;
  double r = 0.0;
  double alpha = 0.0;
  int grid_n = 1;
  int grid_N = 0;
};

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::string detail;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ResultRow> rows;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, double>> summary;
  bool non_convergence = false;
  std::string diagnostics;
  double wall_time = 0.0;

  bool all_pass() const;
  // 0 all pass, 1 a band failed, 2 numerical non-convergence.
  int exit_code() const;
};

ExperimentResult run(const ExperimentConfig& cfg);

// CSV: scale,error,metric,s,r,alpha,grid_n,grid_N.
std::string to_csv(const ExperimentResult& res);
// Deterministic: no wall time (that goes to the timing file).
std::string to_json(const ExperimentResult& res);
// Writes <out>/<name>.csv, <name>.json per format and <name>.timing.json.
// Returns the paths written. Throws Error("out", ...) if unwritable.
std::vector<std::string> emit(const ExperimentResult& res, const std::string& out_dir,
                              const std::string& format);

}  // namespace pdo

#endif  // PDO_HARNESS_HPP_
