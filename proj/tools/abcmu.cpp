// Copyright 2026 The abcmu Authors
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


#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "abcmu/cli/app.hpp"

int main(int argc, char** argv) {
  using namespace abcmu::cli;
  CLI::App app{"abcmu: approximate Bayesian computation with per-summary model errors"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  auto add_overrides = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Override the configured seed");
    sub->add_option("--out-dir", out_dir, "Override the configured output directory");
  };

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the sampler described by a config file");
  run->add_option("config", config_path, "Run config (JSON) or a metadata.json from an earlier run")
      ->required();
  add_overrides(run);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a config file without sampling");
  validate->add_option("config", validate_path, "Run config (JSON)")->required();
  add_overrides(validate);

  std::string trace_path;
  auto* diagnose = app.add_subcommand("diagnose", "Print burn-in, ESS and expected error of a trace");
  diagnose->add_option("trace", trace_path, "trace.csv written by run")->required();

  std::string plot_trace;
  std::string pair;
  std::string plot_out;
  std::size_t bins = 30;
  std::size_t shifts = 4;
  auto* plot = app.add_subcommand("plot", "Render the error density of two summaries as an SVG heatmap");
  plot->add_option("trace", plot_trace, "trace.csv written by run")->required();
  plot->add_option("--pair", pair, "Summaries k1,k2 by index or name")->required();
  plot->add_option("--out", plot_out, "Output SVG file")->required();
  plot->add_option("--bins", bins, "Coarse bins per axis")->check(CLI::Range(4, 10000));
  plot->add_option("--shifts", shifts, "Shifted histograms per axis (1 = plain histogram)")->check(CLI::Range(1, 1000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const Overrides overrides{seed, out_dir};
  if (*run) {
    return cmd_run(config_path, overrides, std::cout, std::cerr);
  }
  if (*validate) {
    return cmd_validate(validate_path, overrides, std::cout, std::cerr);
  }
  if (*diagnose) {
    return cmd_diagnose(trace_path, std::cout, std::cerr);
  }
  return cmd_plot(plot_trace, pair, plot_out, bins, shifts, std::cout, std::cerr);
}
