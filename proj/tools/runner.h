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

#ifndef ACTLAB_TOOLS_RUNNER_H_
#define ACTLAB_TOOLS_RUNNER_H_

// Executes scenario tasks through the C API and assembles report tables.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "actlab/actlab.h"
#include "json.hpp"
#include "report.h"
#include "scenario.h"

namespace actlab::tools {

inline constexpr std::uint64_t kDefaultSweepCap = 100000;
inline constexpr const char* kSweepCapEnv = "ACTLAB_SWEEP_CAP";

// A library call failed for a single (non-sweep) task.
class DomainError : public std::runtime_error {
 public:
  DomainError(actlab_status status, const std::string& message)
      : std::runtime_error(message), status_(status) {}
  actlab_status status() const { return status_; }

 private:
  actlab_status status_;
};

struct RunOptions {
  int jobs = 1;
  std::optional<std::uint64_t> seed;  // overrides simulation.seed
  std::uint64_t sweep_cap = kDefaultSweepCap;
};

struct RunResult {
  Task task = Task::kSolve;
  ScenarioConfig effective;  // config after command-line overrides
  Table table;
  nlohmann::ordered_json json;
};

// Cap from the environment, or the default when unset. Throws ConfigError on
// a malformed value.
std::uint64_t SweepCapFromEnv();

// Runs `verb` on `config`. A config naming a different task is a ConfigError.
RunResult RunScenario(const ScenarioConfig& config, Task verb,
                      const RunOptions& options);

}  // namespace actlab::tools

#endif  // ACTLAB_TOOLS_RUNNER_H_
