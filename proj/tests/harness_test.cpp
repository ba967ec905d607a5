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


#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "pdo/harness.hpp"
#include "pdo/rate_fit.hpp"

namespace pdo {
namespace {

namespace fs = std::filesystem;

std::vector<std::pair<double, double>> power_law(double c, double p, int count) {
  std::vector<std::pair<double, double>> out;
  for (int k = 1; k <= count; ++k) {
    const double h = std::ldexp(1.0, -k);
    out.emplace_back(h, c * std::pow(h, p));
  }
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("pdo_harness_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(PDO_TOOL_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// ---------------------------------------------------------------------------

TEST(RateFit, RecoversExactPowerLaws) {
  const RateFit one = fit_rate(power_law(3.0, 1.0, 6), 0.8, 1.2);
  EXPECT_NEAR(one.slope, 1.0, 1e-12);
  EXPECT_NEAR(one.intercept, std::log2(3.0), 1e-12);
  EXPECT_TRUE(one.pass);
  const RateFit half = fit_rate(power_law(0.7, 0.5, 5), 0.0, 0.4);
  EXPECT_NEAR(half.slope, 0.5, 1e-12);
  EXPECT_FALSE(half.pass);
  EXPECT_EQ(half.points_used, 5u);
}

TEST(RateFit, AllZeroIsExactPass) {
  std::vector<std::pair<double, double>> pts{{0.5, 0}, {0.25, 0}, {0.125, 0}, {0.0625, 0}};
  const RateFit f = fit_rate(pts, 0.9, 1.1);
  EXPECT_TRUE(f.exact);
  EXPECT_TRUE(f.pass);
}

TEST(RateFit, Errors) {
  EXPECT_THROW(fit_rate(power_law(1.0, 1.0, 3)), Error);
  auto pts = power_law(1.0, 1.0, 4);
  pts[1].second = 0.0;
  EXPECT_THROW(fit_rate(pts), Error);
  pts = power_law(1.0, 1.0, 4);
  pts[0].first = -1.0;
  EXPECT_THROW(fit_rate(pts), Error);
}

TEST(RateFit, DropsPreAsymptoticCoarsestPoint) {
  // Twenty points keep the leverage of the coarsest one low enough that its
  // residual stands out against the rest.
  auto pts = power_law(1.0, 1.0, 20);
  pts[0].second *= 16.0;
  const RateFit f = fit_rate(pts, 0.9, 1.1);
  EXPECT_TRUE(f.dropped_largest);
  EXPECT_EQ(f.points_used, 19u);
  EXPECT_NEAR(f.slope, 1.0, 1e-12);
  EXPECT_TRUE(std::isnan(f.residuals[0]));
  // With four points nothing is dropped.
  auto four = power_law(1.0, 1.0, 4);
  four[0].second *= 16.0;
  EXPECT_FALSE(fit_rate(four).dropped_largest);
}

TEST(Spearman, RanksAndTies) {
  EXPECT_NEAR(spearman({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0, 1e-15);
  EXPECT_NEAR(spearman({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0, 1e-15);
  EXPECT_NEAR(spearman({1, 2, 3, 4}, {1, 9, 4, 16}), 0.8, 1e-12);
  // Ties take average ranks: ranks (1.5, 1.5, 3) vs (1, 2, 3).
  EXPECT_NEAR(spearman({1, 1, 2}, {1, 2, 3}), std::sqrt(0.75), 1e-12);
  EXPECT_THROW(spearman({1}, {1}), Error);
}

// ---------------------------------------------------------------------------

std::string field_of(const std::string& toml) {
  try {
    parse_config(toml);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

TEST(Config, ErrorsCarryFieldPaths) {
  EXPECT_EQ(field_of("bogus = 1\n"), "bogus");
  EXPECT_EQ(field_of("[grid]\nfoo = 2\n"), "grid.foo");
  EXPECT_EQ(field_of("[grid]\nN = \"many\"\n"), "grid.N");
  EXPECT_EQ(field_of("experiment = \"nope\"\n"), "experiment");
  EXPECT_EQ(field_of("preset = \"nope\"\n"), "preset");
  EXPECT_EQ(field_of("[grid\n"), "toml");
  EXPECT_EQ(field_of("[sweep]\nh_range = [9, 3]\n"), "sweep.h_range");
}

std::string validate_field(const std::string& toml) {
  try {
    validate(parse_config(toml));
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

TEST(Config, ValidationFailures) {
  EXPECT_EQ(validate_field("preset = \"curved-1d\"\n[grid]\nN = 6\n"), "grid.N");
  EXPECT_EQ(validate_field("preset = \"curved-1d\"\n[grid]\nN = 33\n"), "grid.N");
  EXPECT_EQ(validate_field("preset = \"curved-1d\"\n[sweep]\nh_list = [0.1, 0.05, 0.02]\n"),
            "sweep.h_list");
  EXPECT_EQ(validate_field("preset = \"holder-half\"\n[symbol]\nalpha = 1.5\n"), "symbol.alpha");
  EXPECT_EQ(validate_field("preset = \"oracle\"\n[output]\nformat = \"xml\"\n"), "output.format");
  EXPECT_EQ(validate_field("preset = \"oracle\"\nname = \"../x\"\n"), "name");
}

TEST(Config, PresetOverridesAndRanges) {
  const ExperimentConfig c =
      parse_config("preset = \"curved-1d\"\nname = \"mine\"\n[sweep]\nh_range = [2, 5]\n");
  EXPECT_EQ(c.name, "mine");
  EXPECT_EQ(c.experiment, Experiment::kSharpNorm);
  ASSERT_EQ(c.sweep.h_list.size(), 4u);
  EXPECT_DOUBLE_EQ(c.sweep.h_list.front(), 0.25);
  EXPECT_DOUBLE_EQ(c.sweep.h_list.back(), 1.0 / 32);
}

TEST(Config, AllPresetsValidate) {
  const auto presets = list_presets();
  EXPECT_GE(presets.size(), 13u);
  for (const auto& p : presets) EXPECT_NO_THROW(validate(preset(p.name))) << p.name;
}

// Each shipped config file describes the preset of the same name.
TEST(Config, ShippedConfigsMatchPresets) {
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(fs::path(PDO_SOURCE_DIR) / "configs")) {
    if (entry.path().extension() != ".toml") continue;
    const std::string stem = entry.path().stem().string();
    ExperimentResult from_file, from_preset;
    from_file.config = load_config(entry.path().string());
    from_preset.config = preset(stem);
    EXPECT_EQ(to_json(from_file), to_json(from_preset)) << stem;
    validate(from_file.config);
    ++seen;
  }
  EXPECT_GE(seen, 13);
}

// ---------------------------------------------------------------------------

ExperimentResult synthetic_result() {
  ExperimentResult r;
  r.config = preset("curved-1d");
  r.config.name = "synthetic";
  for (const auto& [h, e] : power_law(0.3, 1.0, 6))
    r.rows.push_back({h, e * (1.0 + 0.01 * std::sin(1e3 * h)), "sharp_norm", 0.0, 0.0, 0.0, 1,
                      64});
  r.checks.push_back({"slope", true, 1.0, 0.8, 1.2, ""});
  r.summary.emplace_back("c", 0.5);
  r.summary.emplace_back("nan", std::nan(""));
  return r;
}

TEST(Output, CsvHeaderAndRefit) {
  ExperimentResult empty;
  EXPECT_EQ(to_csv(empty), "scale,error,metric,s,r,alpha,grid_n,grid_N\n");

  const ExperimentResult r = synthetic_result();
  std::istringstream in(to_csv(r));
  std::string line;
  std::getline(in, line);
  std::vector<std::pair<double, double>> pts, orig;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string a, b;
    std::getline(ls, a, ',');
    std::getline(ls, b, ',');
    pts.emplace_back(std::stod(a), std::stod(b));
  }
  for (const auto& row : r.rows) orig.emplace_back(row.scale, row.error);
  ASSERT_EQ(pts.size(), orig.size());
  EXPECT_NEAR(fit_rate(pts).slope, fit_rate(orig).slope, 1e-9);
}

TEST(Output, JsonRoundTrip) {
  const ExperimentResult r = synthetic_result();
  const auto j = nlohmann::json::parse(to_json(r));
  EXPECT_EQ(j["config"]["name"], "synthetic");
  EXPECT_EQ(j["config"]["experiment"], "sharp-norm");
  ASSERT_EQ(j["rows"].size(), r.rows.size());
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    EXPECT_EQ(j["rows"][i]["scale"].get<double>(), r.rows[i].scale);
    EXPECT_EQ(j["rows"][i]["error"].get<double>(), r.rows[i].error);
  }
  EXPECT_TRUE(j["summary"]["nan"].is_null());
  EXPECT_EQ(j["all_pass"], true);
  EXPECT_EQ(j["exit_code"], 0);
  EXPECT_FALSE(j.contains("wall_time"));
}

TEST(Output, ExitCodes) {
  ExperimentResult r = synthetic_result();
  EXPECT_EQ(r.exit_code(), 0);
  r.checks.push_back({"bad", false, 2.0, 0.0, 1.0, ""});
  EXPECT_FALSE(r.all_pass());
  EXPECT_EQ(r.exit_code(), 1);
  r.non_convergence = true;
  EXPECT_EQ(r.exit_code(), 2);
}

TEST(Output, EmitWritesFilesAndRejectsBadPaths) {
  const fs::path d = scratch_dir("emit");
  const ExperimentResult r = synthetic_result();
  const auto written = emit(r, (d / "out").string(), "both");
  ASSERT_EQ(written.size(), 3u);
  for (const auto& p : written) EXPECT_TRUE(fs::exists(p)) << p;
  EXPECT_EQ(slurp(d / "out" / "synthetic.csv"), to_csv(r));
  EXPECT_EQ(emit(r, (d / "csv").string(), "csv").size(), 2u);
  EXPECT_THROW(emit(r, (d / "x").string(), "xml"), Error);
  std::ofstream(d / "file") << "x";
  try {
    emit(r, (d / "file" / "sub").string(), "both");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.field(), "out");
  }
}

TEST(Run, DeterministicJson) {
  const ExperimentConfig c = preset("identity-n8");
  const ExperimentResult a = run(c);
  const ExperimentResult b = run(c);
  EXPECT_EQ(a.exit_code(), 0);
  EXPECT_EQ(to_json(a), to_json(b));
  EXPECT_EQ(to_csv(a), to_csv(b));
  EXPECT_FALSE(a.rows.empty());
}

// ---------------------------------------------------------------------------

TEST(Cli, ExitCodes) {
  const fs::path d = scratch_dir("cli");
  std::ofstream(d / "bad.toml") << "[grid]\nN = 7\n";
  std::ofstream(d / "typo.toml") << "[gird]\nN = 8\n";
  const std::string cfg = (fs::path(PDO_SOURCE_DIR) / "configs" / "identity-n8.toml").string();
  EXPECT_EQ(run_tool("validate --config " + cfg), 0);
  EXPECT_EQ(run_tool("validate --config " + (d / "bad.toml").string()), 3);
  EXPECT_EQ(run_tool("run --config " + (d / "typo.toml").string()), 3);
  EXPECT_EQ(run_tool("run --config " + (d / "missing.toml").string()), 3);
  EXPECT_EQ(run_tool("run"), 3);
  EXPECT_EQ(run_tool("list-presets"), 0);
  EXPECT_EQ(run_tool("run --config " + cfg + " --out " + (d / "res").string()), 0);
  EXPECT_TRUE(fs::exists(d / "res" / "identity-n8.csv"));
  EXPECT_TRUE(fs::exists(d / "res" / "identity-n8.json"));
  EXPECT_TRUE(fs::exists(d / "res" / "identity-n8.timing.json"));
  std::ofstream(d / "blocker") << "x";
  EXPECT_EQ(run_tool("run --config " + cfg + " --out " + (d / "blocker" / "r").string()), 3);
}

TEST(Cli, EnvironmentOverridesOutput) {
  const fs::path d = scratch_dir("env");
  const std::string cfg = (fs::path(PDO_SOURCE_DIR) / "configs" / "identity-n8.toml").string();
  const std::string cmd = "PDO_OUT=" + (d / "envout").string() + " PDO_FORMAT=csv " +
                          std::string(PDO_TOOL_PATH) + " run --config " + cfg + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
  EXPECT_TRUE(fs::exists(d / "envout" / "identity-n8.csv"));
  EXPECT_FALSE(fs::exists(d / "envout" / "identity-n8.json"));
}

}  // namespace
}  // namespace pdo
