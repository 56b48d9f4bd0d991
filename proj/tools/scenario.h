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

#ifndef ACTLAB_TOOLS_SCENARIO_H_
#define ACTLAB_TOOLS_SCENARIO_H_

// Scenario files: the JSON description of one CLI run. Parsing is strict
// (unknown keys are errors) and Emit produces a canonical document such that
// Parse(Emit(c)) == c for every valid config.
//
// Schema, with defaults:
//   {
//     "name": string,                                  optional
//     "task": "solve" | "verify" | "welfare" | "simulate" | "sweep",  optional
//     "params": {
//       "y": number, "q": number,
//       "bias": number | "neutral",                    default "neutral"
//       "distribution":
//           {"family": "uniform", "lo": 0, "hi": 1}
//         | {"family": "beta", "alpha": a, "beta": b}
//         | {"family": "discrete", "atoms": [[p, w], ...]}
//         | {"family": "piecewise", "breakpoints": [...], "densities": [...]}
//     },
//     "voter": "backward" | "forward",                 default "backward"
//     "forward_regime": "pool_act" | "pool_not_act",   default "pool_act"
//     "grid": int,                                     default 1000
//     "profile": {"competent": {"threshold": t, "mix": m}
//                            | {"points": [...], "values": [...],
//                               "interpolation": "linear" | "step"},
//                 "incompetent": number},              optional
//     "off_path": {"choice": "act" | "not_act", "q_c": x, "p_el": x},
//     "assumed_r_a": number,                           optional
//     "simulation": {"n": int, "seed": int, "bins": int},
//     "sweep": {"task": "solve" | "verify" | "welfare" | "simulate",
//               "axes": [{"name": axis, "values": [...]}
//                      | {"name": axis, "start": a, "stop": b, "step": h}]}
//   }
// Sweep axis names: y, q, bias, dist.lo, dist.hi, dist.alpha, dist.beta.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace actlab::tools {

// Thrown for malformed scenario files; the message names the offending
// field path or the line and column of a JSON syntax error.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Task { kSolve, kVerify, kWelfare, kSimulate, kSweep };

const char* TaskName(Task task);
std::optional<Task> ParseTaskName(const std::string& name);

struct DistributionConfig {
  std::string family = "uniform";
  double lo = 0.0;
  double hi = 1.0;
  double alpha = 1.0;
  double beta = 1.0;
  std::vector<double> points;  // discrete
  std::vector<double> weights;
  std::vector<double> breakpoints;  // piecewise
  std::vector<double> densities;

  bool operator==(const DistributionConfig&) const = default;
};

struct ProfileConfig {
  bool is_threshold = true;
  double threshold = 0.5;
  double mix = 0.5;
  std::vector<double> points;
  std::vector<double> values;
  std::string interpolation = "linear";
  double incompetent = 0.0;

  bool operator==(const ProfileConfig&) const = default;
};

struct OffPathConfig {
  std::string choice = "not_act";
  double q_c = 0.0;
  double p_el = 0.0;

  bool operator==(const OffPathConfig&) const = default;
};

struct SimulationConfig {
  std::uint64_t n = 1000000;
  std::uint64_t seed = 0;
  int bins = 20;

  bool operator==(const SimulationConfig&) const = default;
};

struct AxisRange {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;

  bool operator==(const AxisRange&) const = default;
};

struct SweepAxis {
  std::string name;
  // Exactly one of `values` (explicit list) and `range` is used.
  std::vector<double> values;
  std::optional<AxisRange> range;

  // The points this axis visits, in order.
  std::vector<double> Points() const;

  bool operator==(const SweepAxis&) const = default;
};

struct SweepConfig {
  Task task = Task::kSolve;
  std::vector<SweepAxis> axes;

  bool operator==(const SweepConfig&) const = default;
};

struct ScenarioConfig {
  std::optional<std::string> name;
  std::optional<Task> task;
  double y = 0.0;
  double q = 0.5;
  std::optional<double> bias;  // unset: action-neutral
  DistributionConfig distribution;
  std::string voter = "backward";
  std::string forward_regime = "pool_act";
  int grid = 1000;
  std::optional<ProfileConfig> profile;
  std::optional<OffPathConfig> off_path;
  std::optional<double> assumed_r_a;
  SimulationConfig simulation;
  std::optional<SweepConfig> sweep;

  bool operator==(const ScenarioConfig&) const = default;
};

ScenarioConfig ParseScenario(const std::string& text);
ScenarioConfig LoadScenario(const std::string& path);
std::string EmitScenario(const ScenarioConfig& config);

// Replaces one sweep axis coordinate in `config`. Throws ConfigError for an
// unknown axis or one that does not apply to the distribution family.
void ApplyAxis(ScenarioConfig& config, const std::string& axis, double value);

}  // namespace actlab::tools

#endif  // ACTLAB_TOOLS_SCENARIO_H_
