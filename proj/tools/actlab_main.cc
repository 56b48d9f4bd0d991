// Copyright 2026 The actlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// actlab: batch front end for the incumbent-under-threat election game.
//
//   actlab <solve|verify|welfare|simulate|sweep> --config scenario.json
//          [--out DIR] [--format json|csv|both] [--seed N] [--jobs N]
//
// Writes DIR/<task>.json and/or DIR/<task>.csv. Exit status: 0 on success,
// 1 for usage or config errors, 2 for library domain errors, 3 for I/O
// failures.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "report.h"
#include "runner.h"
#include "scenario.h"

namespace {

using actlab::tools::ConfigError;
using actlab::tools::DomainError;
using actlab::tools::Task;

constexpr int kExitConfig = 1;
constexpr int kExitDomain = 2;
constexpr int kExitIo = 3;

bool WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) {
    std::cerr << "actlab: cannot write " << path.string() << "\n";
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibria, welfare and Monte Carlo checks for the "
               "incumbent-under-threat election game."};
  app.set_version_flag("--version", std::string(actlab_version()));
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir = ".";
  std::string format = "both";
  std::optional<std::uint64_t> seed;
  int jobs = 1;

  const std::pair<Task, const char*> verbs[] = {
      {Task::kSolve, "Construct the equilibria for a parameter set"},
      {Task::kVerify, "Best-response check of a profile or of the equilibria"},
      {Task::kWelfare, "Voter welfare under each voter kind"},
      {Task::kSimulate, "Monte Carlo election simulation with z-score checks"},
      {Task::kSweep, "Run a task over a Cartesian grid of parameters"},
  };
  for (const auto& [task, help] : verbs) {
    CLI::App* sub = app.add_subcommand(actlab::tools::TaskName(task), help);
    sub->add_option("--config", config_path, "Scenario JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory")
        ->capture_default_str();
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "both"}))
        ->capture_default_str();
    sub->add_option("--seed", seed, "Override the simulation seed");
    sub->add_option("--jobs", jobs, "Worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  CLI11_PARSE(app, argc, argv);
  const std::string verb_name = app.get_subcommands().front()->get_name();
  const Task verb = *actlab::tools::ParseTaskName(verb_name);

  actlab::tools::RunResult result;
  try {
    actlab::tools::RunOptions options;
    options.jobs = jobs;
    options.seed = seed;
    options.sweep_cap = actlab::tools::SweepCapFromEnv();
    const auto config = actlab::tools::LoadScenario(config_path);
    result = actlab::tools::RunScenario(config, verb, options);
  } catch (const ConfigError& e) {
    std::cerr << "actlab: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "actlab: " << e.what() << "\n";
    return kExitDomain;
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "actlab: cannot create " << out_dir << ": " << ec.message()
              << "\n";
    return kExitIo;
  }
  const std::filesystem::path base =
      std::filesystem::path(out_dir) / verb_name;
  if (format != "csv" &&
      !WriteFile(base.string() + ".json", result.json.dump(2) + "\n")) {
    return kExitIo;
  }
  if (format != "json" &&
      !WriteFile(base.string() + ".csv",
                 actlab::tools::RenderCsv(result.table))) {
    return kExitIo;
  }
  return 0;
}
