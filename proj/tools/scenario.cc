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

#include "scenario.h"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace actlab::tools {
namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

[[noreturn]] void Bad(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

std::string Join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void CheckKeys(const Json& obj, const std::string& path,
               std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) Bad(path.empty() ? "<root>" : path, "expected object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) Bad(Join(path, item.key()), "unknown field");
  }
}

const Json& Field(const Json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) Bad(Join(path, key), "missing required field");
  return *it;
}

double Number(const Json& value, const std::string& path) {
  if (!value.is_number()) Bad(path, "expected number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) Bad(path, "expected finite number");
  return x;
}

double NumberField(const Json& obj, const std::string& path, const char* key) {
  return Number(Field(obj, path, key), Join(path, key));
}

std::string String(const Json& value, const std::string& path,
                   std::initializer_list<const char*> choices) {
  if (!value.is_string()) Bad(path, "expected string");
  const std::string s = value.get<std::string>();
  std::string listed;
  for (const char* c : choices) {
    if (s == c) return s;
    listed += listed.empty() ? c : std::string(", ") + c;
  }
  Bad(path, "expected one of " + listed + ", got \"" + s + "\"");
}

std::uint64_t Unsigned(const Json& value, const std::string& path) {
  if (!value.is_number_integer() || (value.is_number_integer() &&
                                     !value.is_number_unsigned() &&
                                     value.get<std::int64_t>() < 0)) {
    Bad(path, "expected non-negative integer");
  }
  return value.get<std::uint64_t>();
}

int Int(const Json& value, const std::string& path) {
  const std::uint64_t v = Unsigned(value, path);
  if (v > 1000000000) Bad(path, "integer out of range");
  return static_cast<int>(v);
}

std::vector<double> NumberList(const Json& value, const std::string& path) {
  if (!value.is_array()) Bad(path, "expected array of numbers");
  std::vector<double> out;
  for (size_t i = 0; i < value.size(); ++i) {
    out.push_back(Number(value[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

DistributionConfig ParseDistribution(const Json& j, const std::string& path) {
  DistributionConfig d;
  if (!j.is_object()) Bad(path, "expected object");
  d.family = String(Field(j, path, "family"), Join(path, "family"),
                    {"uniform", "beta", "discrete", "piecewise"});
  if (d.family == "uniform") {
    CheckKeys(j, path, {"family", "lo", "hi"});
    if (j.contains("lo")) d.lo = NumberField(j, path, "lo");
    if (j.contains("hi")) d.hi = NumberField(j, path, "hi");
  } else if (d.family == "beta") {
    CheckKeys(j, path, {"family", "alpha", "beta"});
    d.alpha = NumberField(j, path, "alpha");
    d.beta = NumberField(j, path, "beta");
  } else if (d.family == "discrete") {
    CheckKeys(j, path, {"family", "atoms"});
    const std::string apath = Join(path, "atoms");
    const Json& atoms = Field(j, path, "atoms");
    if (!atoms.is_array() || atoms.empty()) Bad(apath, "expected non-empty array");
    for (size_t i = 0; i < atoms.size(); ++i) {
      const std::string ipath = apath + "[" + std::to_string(i) + "]";
      if (!atoms[i].is_array() || atoms[i].size() != 2) {
        Bad(ipath, "expected [point, weight]");
      }
      d.points.push_back(Number(atoms[i][0], ipath + "[0]"));
      d.weights.push_back(Number(atoms[i][1], ipath + "[1]"));
    }
  } else {
    CheckKeys(j, path, {"family", "breakpoints", "densities"});
    d.breakpoints = NumberList(Field(j, path, "breakpoints"),
                               Join(path, "breakpoints"));
    d.densities =
        NumberList(Field(j, path, "densities"), Join(path, "densities"));
    if (d.breakpoints.size() != d.densities.size() + 1) {
      Bad(Join(path, "densities"),
          "expected one fewer entry than breakpoints");
    }
  }
  return d;
}

ProfileConfig ParseProfile(const Json& j, const std::string& path) {
  CheckKeys(j, path, {"competent", "incompetent"});
  ProfileConfig p;
  p.incompetent = NumberField(j, path, "incompetent");
  const std::string cpath = Join(path, "competent");
  const Json& c = Field(j, path, "competent");
  if (c.is_object() && c.contains("threshold")) {
    CheckKeys(c, cpath, {"threshold", "mix"});
    p.is_threshold = true;
    p.threshold = NumberField(c, cpath, "threshold");
    if (c.contains("mix")) p.mix = NumberField(c, cpath, "mix");
  } else {
    CheckKeys(c, cpath, {"points", "values", "interpolation"});
    p.is_threshold = false;
    p.points = NumberList(Field(c, cpath, "points"), Join(cpath, "points"));
    p.values = NumberList(Field(c, cpath, "values"), Join(cpath, "values"));
    if (p.points.size() != p.values.size()) {
      Bad(Join(cpath, "values"), "expected as many values as points");
    }
    if (c.contains("interpolation")) {
      p.interpolation = String(c["interpolation"],
                               Join(cpath, "interpolation"),
                               {"linear", "step"});
    }
  }
  return p;
}

SweepAxis ParseAxis(const Json& j, const std::string& path) {
  SweepAxis axis;
  if (!j.is_object()) Bad(path, "expected object");
  axis.name = String(Field(j, path, "name"), Join(path, "name"),
                     {"y", "q", "bias", "dist.lo", "dist.hi", "dist.alpha",
                      "dist.beta"});
  if (j.contains("values")) {
    CheckKeys(j, path, {"name", "values"});
    axis.values = NumberList(j["values"], Join(path, "values"));
    if (axis.values.empty()) Bad(Join(path, "values"), "empty axis");
  } else {
    CheckKeys(j, path, {"name", "start", "stop", "step"});
    AxisRange r;
    r.start = NumberField(j, path, "start");
    r.stop = NumberField(j, path, "stop");
    r.step = NumberField(j, path, "step");
    if (!(r.step > 0.0)) Bad(Join(path, "step"), "expected positive step");
    if (r.stop < r.start) Bad(Join(path, "stop"), "expected stop >= start");
    if ((r.stop - r.start) / r.step > 1e9) Bad(Join(path, "step"), "too many points");
    axis.range = r;
  }
  return axis;
}

OrderedJson EmitDistribution(const DistributionConfig& d) {
  OrderedJson j;
  j["family"] = d.family;
  if (d.family == "uniform") {
    j["lo"] = d.lo;
    j["hi"] = d.hi;
  } else if (d.family == "beta") {
    j["alpha"] = d.alpha;
    j["beta"] = d.beta;
  } else if (d.family == "discrete") {
    j["atoms"] = OrderedJson::array();
    for (size_t i = 0; i < d.points.size(); ++i) {
      j["atoms"].push_back({d.points[i], d.weights[i]});
    }
  } else {
    j["breakpoints"] = d.breakpoints;
    j["densities"] = d.densities;
  }
  return j;
}

}  // namespace

const char* TaskName(Task task) {
  switch (task) {
    case Task::kSolve: return "solve";
    case Task::kVerify: return "verify";
    case Task::kWelfare: return "welfare";
    case Task::kSimulate: return "simulate";
    case Task::kSweep: return "sweep";
  }
  return "?";
}

std::optional<Task> ParseTaskName(const std::string& name) {
  for (Task t : {Task::kSolve, Task::kVerify, Task::kWelfare, Task::kSimulate,
                 Task::kSweep}) {
    if (name == TaskName(t)) return t;
  }
  return std::nullopt;
}

std::vector<double> SweepAxis::Points() const {
  if (!range) return values;
  const AxisRange& r = *range;
  const double span = r.stop - r.start;
  const auto steps = static_cast<std::int64_t>(std::floor(span / r.step + 1e-9));
  std::vector<double> out;
  out.reserve(steps + 1);
  // When the steps land on `stop`, interpolate between the ends so that
  // decimal grids come out correctly rounded (0.3 rather than 3 * 0.1).
  const bool exact =
      std::fabs(r.start + steps * r.step - r.stop) <=
      1e-9 * std::max(1.0, std::fabs(r.stop));
  for (std::int64_t i = 0; i <= steps; ++i) {
    if (exact && steps > 0) {
      out.push_back(i == steps ? r.stop
                               : r.start + span * static_cast<double>(i) /
                                               static_cast<double>(steps));
    } else {
      out.push_back(r.start + static_cast<double>(i) * r.step);
    }
  }
  return out;
}

ScenarioConfig ParseScenario(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  CheckKeys(root, "",
            {"name", "task", "params", "voter", "forward_regime", "grid",
             "profile", "off_path", "assumed_r_a", "simulation", "sweep"});
  ScenarioConfig c;
  if (root.contains("name")) {
    if (!root["name"].is_string()) Bad("name", "expected string");
    c.name = root["name"].get<std::string>();
  }
  if (root.contains("task")) {
    c.task = *ParseTaskName(String(root["task"], "task",
                                   {"solve", "verify", "welfare", "simulate",
                                    "sweep"}));
  }

  const Json& params = Field(root, "", "params");
  CheckKeys(params, "params", {"y", "q", "bias", "distribution"});
  c.y = NumberField(params, "params", "y");
  c.q = NumberField(params, "params", "q");
  if (params.contains("bias")) {
    const Json& b = params["bias"];
    if (b.is_string()) {
      String(b, "params.bias", {"neutral"});
    } else {
      c.bias = Number(b, "params.bias");
    }
  }
  c.distribution = ParseDistribution(Field(params, "params", "distribution"),
                                     "params.distribution");

  if (root.contains("voter")) {
    c.voter = String(root["voter"], "voter", {"backward", "forward"});
  }
  if (root.contains("forward_regime")) {
    c.forward_regime = String(root["forward_regime"], "forward_regime",
                              {"pool_act", "pool_not_act"});
  }
  if (root.contains("grid")) {
    c.grid = Int(root["grid"], "grid");
    if (c.grid < 1) Bad("grid", "expected positive integer");
  }
  if (root.contains("profile")) c.profile = ParseProfile(root["profile"], "profile");
  if (root.contains("off_path")) {
    const Json& o = root["off_path"];
    CheckKeys(o, "off_path", {"choice", "q_c", "p_el"});
    OffPathConfig off;
    off.choice = String(Field(o, "off_path", "choice"), "off_path.choice",
                        {"act", "not_act"});
    off.q_c = NumberField(o, "off_path", "q_c");
    if (o.contains("p_el")) off.p_el = NumberField(o, "off_path", "p_el");
    c.off_path = off;
  }
  if (root.contains("assumed_r_a")) {
    c.assumed_r_a = Number(root["assumed_r_a"], "assumed_r_a");
  }
  if (root.contains("simulation")) {
    const Json& s = root["simulation"];
    CheckKeys(s, "simulation", {"n", "seed", "bins"});
    if (s.contains("n")) c.simulation.n = Unsigned(s["n"], "simulation.n");
    if (s.contains("seed")) {
      c.simulation.seed = Unsigned(s["seed"], "simulation.seed");
    }
    if (s.contains("bins")) {
      c.simulation.bins = Int(s["bins"], "simulation.bins");
      if (c.simulation.bins < 1) Bad("simulation.bins", "expected positive integer");
    }
  }
  if (root.contains("sweep")) {
    const Json& s = root["sweep"];
    CheckKeys(s, "sweep", {"task", "axes"});
    SweepConfig sweep;
    if (s.contains("task")) {
      sweep.task = *ParseTaskName(String(s["task"], "sweep.task",
                                         {"solve", "verify", "welfare",
                                          "simulate"}));
    }
    const Json& axes = Field(s, "sweep", "axes");
    if (!axes.is_array() || axes.empty()) {
      Bad("sweep.axes", "expected non-empty array");
    }
    for (size_t i = 0; i < axes.size(); ++i) {
      sweep.axes.push_back(
          ParseAxis(axes[i], "sweep.axes[" + std::to_string(i) + "]"));
    }
    c.sweep = std::move(sweep);
  }
  if (c.task == Task::kSweep && !c.sweep) Bad("sweep", "required for task sweep");
  if (c.sweep) {
    for (size_t i = 0; i < c.sweep->axes.size(); ++i) {
      // Reject axes that cannot apply to this prior before any work starts.
      ScenarioConfig probe = c;
      try {
        ApplyAxis(probe, c.sweep->axes[i].name, 0.5);
      } catch (const ConfigError& e) {
        Bad("sweep.axes[" + std::to_string(i) + "].name", e.what());
      }
    }
  }
  return c;
}

ScenarioConfig LoadScenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return ParseScenario(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string EmitScenario(const ScenarioConfig& c) {
  OrderedJson root;
  if (c.name) root["name"] = *c.name;
  if (c.task) root["task"] = TaskName(*c.task);
  OrderedJson params;
  params["y"] = c.y;
  params["q"] = c.q;
  if (c.bias) {
    params["bias"] = *c.bias;
  } else {
    params["bias"] = "neutral";
  }
  params["distribution"] = EmitDistribution(c.distribution);
  root["params"] = params;
  root["voter"] = c.voter;
  root["forward_regime"] = c.forward_regime;
  root["grid"] = c.grid;
  if (c.profile) {
    OrderedJson p;
    OrderedJson comp;
    if (c.profile->is_threshold) {
      comp["threshold"] = c.profile->threshold;
      comp["mix"] = c.profile->mix;
    } else {
      comp["points"] = c.profile->points;
      comp["values"] = c.profile->values;
      comp["interpolation"] = c.profile->interpolation;
    }
    p["competent"] = comp;
    p["incompetent"] = c.profile->incompetent;
    root["profile"] = p;
  }
  if (c.off_path) {
    root["off_path"] = {{"choice", c.off_path->choice},
                        {"q_c", c.off_path->q_c},
                        {"p_el", c.off_path->p_el}};
  }
  if (c.assumed_r_a) root["assumed_r_a"] = *c.assumed_r_a;
  root["simulation"] = {{"n", c.simulation.n},
                        {"seed", c.simulation.seed},
                        {"bins", c.simulation.bins}};
  if (c.sweep) {
    OrderedJson s;
    s["task"] = TaskName(c.sweep->task);
    s["axes"] = OrderedJson::array();
    for (const SweepAxis& a : c.sweep->axes) {
      OrderedJson aj;
      aj["name"] = a.name;
      if (a.range) {
        aj["start"] = a.range->start;
        aj["stop"] = a.range->stop;
        aj["step"] = a.range->step;
      } else {
        aj["values"] = a.values;
      }
      s["axes"].push_back(aj);
    }
    root["sweep"] = s;
  }
  return root.dump(2) + "\n";
}

void ApplyAxis(ScenarioConfig& c, const std::string& axis, double value) {
  const std::string& family = c.distribution.family;
  if (axis == "y") {
    c.y = value;
  } else if (axis == "q") {
    c.q = value;
  } else if (axis == "bias") {
    c.bias = value;
  } else if ((axis == "dist.lo" || axis == "dist.hi") && family == "uniform") {
    (axis == "dist.lo" ? c.distribution.lo : c.distribution.hi) = value;
  } else if ((axis == "dist.alpha" || axis == "dist.beta") &&
             family == "beta") {
    (axis == "dist.alpha" ? c.distribution.alpha : c.distribution.beta) = value;
  } else {
    throw ConfigError("axis " + axis + " does not apply to a " + family +
                      " prior");
  }
}

}  // namespace actlab::tools
