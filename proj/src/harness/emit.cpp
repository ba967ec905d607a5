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
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <fftw3.h>
#include <nlohmann/json.hpp>

#include "pdo/harness.hpp"

namespace pdo {

namespace {

using Json = nlohmann::ordered_json;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// NaN and infinities are not JSON numbers.
Json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

Json config_json(const ExperimentConfig& c) {
  Json j;
  j["name"] = c.name;
  j["experiment"] = to_string(c.experiment);
  j["seed"] = c.seed;
  j["grid"] = {{"n", c.grid.n}, {"N", c.grid.points}, {"L", c.grid.length}};
  Json terms = Json::array();
  for (const auto& t : c.symbol.terms)
    terms.push_back({{"k", t.k}, {"p", t.p}, {"re", t.c.real()}, {"im", t.c.imag()}});
  j["symbol"] = {{"base", c.symbol.base},         {"terms", terms},
                 {"modulation", c.symbol.modulation}, {"profile", c.symbol.profile},
                 {"alpha", c.symbol.alpha},       {"amplitude", c.symbol.amplitude},
                 {"period", c.symbol.period}};
  j["sweep"] = {{"h_list", c.sweep.h_list},
                {"N_list", c.sweep.n_list},
                {"final_time", c.sweep.final_time},
                {"t", c.sweep.t}};
  j["s"] = c.s_list;
  j["r"] = c.r_list;
  switch (c.experiment) {
    case Experiment::kStability:
      j["stability"] = {{"sharp_N", c.sharp_points}, {"sharp_h_list", c.sharp_h_list}};
      break;
    case Experiment::kCompositionRemainders: {
      Json runs = Json::array();
      for (const auto& r : c.remainders) runs.push_back({{"kind", r.kind}, {"s", r.s}});
      j["remainders"] = {{"runs", runs}};
      break;
    }
    case Experiment::kConvergenceManifold:
      j["manifold"] = {{"local_points", c.local_points}, {"step_h_list", c.step_h_list}};
      break;
    case Experiment::kPullbackResidual:
      j["pullback"] = {{"maps", c.maps}};
      break;
    case Experiment::kQuantizationOracle:
      j["oracle"] = {{"count", c.oracle_count}, {"N", c.oracle_points}};
      break;
    default:
      break;
  }
  return j;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("out", "cannot write '" + p.string() + "'");
  out << text;
  if (!out) throw Error("out", "write failed for '" + p.string() + "'");
}

}  // namespace

std::string to_csv(const ExperimentResult& res) {
  std::string out = "scale,error,metric,s,r,alpha,grid_n,grid_N\n";
  for (const auto& r : res.rows) {
    out += g17(r.scale) + "," + g17(r.error) + "," + r.metric + "," + g17(r.s) + "," + g17(r.r) +
           "," + g17(r.alpha) + "," + std::to_string(r.grid_n) + "," + std::to_string(r.grid_N) +
           "\n";
  }
  return out;
}

std::string to_json(const ExperimentResult& res) {
  Json j;
  j["tool"] = "pdo";
  j["version"] = kVersion;
  Json versions;
  versions["pdo"] = kVersion;
  versions["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                      std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION);
  versions["fftw"] = std::string(fftw_version);
  j["versions"] = versions;
  j["config"] = config_json(res.config);
  Json rows = Json::array();
  for (const auto& r : res.rows)
    rows.push_back({{"scale", num(r.scale)},
                    {"error", num(r.error)},
                    {"metric", r.metric},
                    {"s", num(r.s)},
                    {"r", num(r.r)},
                    {"alpha", num(r.alpha)},
                    {"grid_n", r.grid_n},
                    {"grid_N", r.grid_N}});
  j["rows"] = rows;
  Json checks = Json::array();
  for (const auto& c : res.checks)
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"value", num(c.value)},
                      {"lo", num(c.lo)},
                      {"hi", num(c.hi)},
                      {"detail", c.detail}});
  j["checks"] = checks;
  Json summary = Json::object();
  for (const auto& [k, v] : res.summary) summary[k] = num(v);
  j["summary"] = summary;
  j["non_convergence"] = res.non_convergence;
  j["diagnostics"] = res.diagnostics;
  j["all_pass"] = res.all_pass();
  j["exit_code"] = res.exit_code();
  return j.dump(2) + "\n";
}

std::vector<std::string> emit(const ExperimentResult& res, const std::string& out_dir,
                              const std::string& format) {
  if (format != "csv" && format != "json" && format != "both")
    throw Error("format", "must be csv, json or both");
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error("out", "cannot create '" + out_dir + "'");
  const std::string& name = res.config.name;
  std::vector<std::string> written;
  if (format != "json") {
    write_file(dir / (name + ".csv"), to_csv(res));
    written.push_back((dir / (name + ".csv")).string());
  }
  if (format != "csv") {
    write_file(dir / (name + ".json"), to_json(res));
    written.push_back((dir / (name + ".json")).string());
  }
  const Json timing = {{"name", name}, {"wall_time_seconds", res.wall_time}};
  write_file(dir / (name + ".timing.json"), timing.dump(2) + "\n");
  written.push_back((dir / (name + ".timing.json")).string());
  return written;
}

}  // namespace pdo
