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

// pdo run --config <path> [--out <dir>] [--format csv|json|both] [--seed <u64>] [--threads <k>]
// pdo list-presets
// pdo validate --config <path>
//
// Environment: PDO_THREADS, PDO_SEED, PDO_OUT, PDO_FORMAT (flags win).

#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "pdo/harness.hpp"
#include "pdo/parallel.hpp"

namespace {

// Sampled symbols at n = 2 run to hundreds of MB. glibc returns such blocks
// to the kernel on free, and refaulting them dominated the oracle run.
void keep_freed_blocks() {
#if defined(__GLIBC__)
  mallopt(M_MMAP_THRESHOLD, 1 << 30);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
}

int run_command(const std::string& path, const std::optional<std::string>& out,
                const std::optional<std::string>& format, const std::optional<std::uint64_t>& seed,
                const std::optional<int>& threads) {
  pdo::ExperimentConfig cfg = pdo::load_config(path);
  if (out) cfg.out_dir = *out;
  if (format) cfg.format = *format;
  if (seed) cfg.seed = *seed;
  if (threads) {
    if (*threads < 1) throw pdo::ConfigError("threads", "must be >= 1");
    pdo::set_num_threads(*threads);
  }
  pdo::validate(cfg);
  const pdo::ExperimentResult res = pdo::run(cfg);
  for (const auto& p : pdo::emit(res, cfg.out_dir, cfg.format)) std::cout << "wrote " << p << "\n";
  for (const auto& c : res.checks)
    std::printf("%s %s value=%.6g band=[%.6g, %.6g]%s%s\n", c.pass ? "PASS" : "FAIL",
                c.name.c_str(), c.value, c.lo, c.hi, c.detail.empty() ? "" : " ",
                c.detail.c_str());
  if (res.non_convergence) std::printf("NON-CONVERGENCE %s\n", res.diagnostics.c_str());
  std::printf("%s: %s (%.1f s)\n", cfg.name.c_str(),
              res.exit_code() == 0 ? "all pass" : res.exit_code() == 1 ? "band failure"
                                                                       : "non-convergence",
              res.wall_time);
  return res.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  keep_freed_blocks();
  CLI::App app{"Multi-product pseudodifferential propagators: experiment runner"};
  app.set_version_flag("--version", pdo::kVersion);
  app.require_subcommand(1);

  std::string config;
  std::optional<std::string> out, format;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;

  auto* run = app.add_subcommand("run", "run an experiment and write CSV/JSON results");
  run->add_option("--config", config, "TOML experiment file")->required();
  run->add_option("--out", out, "output directory")->envname("PDO_OUT");
  run->add_option("--format", format, "csv, json or both")
      ->envname("PDO_FORMAT")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  run->add_option("--seed", seed, "seed for probe fields and random symbols")->envname("PDO_SEED");
  run->add_option("--threads", threads, "worker threads")->envname("PDO_THREADS");

  auto* list = app.add_subcommand("list-presets", "print the built-in presets");
  auto* val = app.add_subcommand("validate", "check a config without running it");
  val->add_option("--config", config, "TOML experiment file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  try {
    if (*list) {
      for (const auto& p : pdo::list_presets())
        std::printf("%-22s %s\n", p.name.c_str(), p.description.c_str());
      return 0;
    }
    if (*val) {
      const pdo::ExperimentConfig cfg = pdo::load_config(config);
      pdo::validate(cfg);
      std::printf("%s: ok (%s)\n", cfg.name.c_str(), pdo::to_string(cfg.experiment).c_str());
      return 0;
    }
    return run_command(config, out, format, seed, threads);
  } catch (const pdo::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 3;
  } catch (const pdo::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.field() == "out" ? 3 : 2;
  }
}
