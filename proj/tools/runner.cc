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

#include "runner.h"

#include <atomic>
#include <cerrno>
#include <cstdlib>
#include <memory>
#include <thread>
#include <utility>
#include <vector>

namespace actlab::tools {
namespace {

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

using DistPtr =
    std::unique_ptr<actlab_distribution,
                    Deleter<actlab_distribution, actlab_distribution_free>>;
using ParamsPtr =
    std::unique_ptr<actlab_params, Deleter<actlab_params, actlab_params_free>>;
using ProfilePtr =
    std::unique_ptr<actlab_profile, Deleter<actlab_profile, actlab_profile_free>>;
using EquilibriaPtr =
    std::unique_ptr<actlab_equilibria,
                    Deleter<actlab_equilibria, actlab_equilibria_free>>;
using SimulationPtr =
    std::unique_ptr<actlab_simulation,
                    Deleter<actlab_simulation, actlab_simulation_free>>;

void Check(actlab_status status) {
  if (status != ACTLAB_OK) {
    throw DomainError(status, std::string(actlab_status_name(status)) + ": " +
                                  actlab_last_error());
  }
}

Cell Opt(int has, double value) {
  return has ? Cell(value) : Cell(std::monostate{});
}

const char* BiasKindName(actlab_bias_kind kind) {
  switch (kind) {
    case ACTLAB_BIAS_PRO_ACTION: return "pro_action";
    case ACTLAB_BIAS_NEUTRAL: return "action_neutral";
    case ACTLAB_BIAS_AGAINST_ACTION: return "against_action";
  }
  return "?";
}

const char* PoolingName(actlab_pooling p) {
  return p == ACTLAB_POOL_ACT ? "pool_act" : "pool_not_act";
}

const char* ChoiceName(actlab_choice c) {
  return c == ACTLAB_ACT ? "act" : "not_act";
}

// Library objects describing one scenario cell.
struct Environment {
  DistPtr dist;
  ParamsPtr params;
  actlab_voter voter = ACTLAB_VOTER_BACKWARD;
  actlab_pooling pooling = ACTLAB_POOL_ACT;
};

Environment MakeEnvironment(const ScenarioConfig& c) {
  Environment env;
  const DistributionConfig& d = c.distribution;
  actlab_distribution* dist = nullptr;
  if (d.family == "uniform") {
    Check(actlab_distribution_uniform(d.lo, d.hi, &dist));
  } else if (d.family == "beta") {
    Check(actlab_distribution_beta(d.alpha, d.beta, &dist));
  } else if (d.family == "discrete") {
    Check(actlab_distribution_discrete(d.points.data(), d.weights.data(),
                                       d.points.size(), &dist));
  } else {
    Check(actlab_distribution_piecewise(d.breakpoints.data(),
                                        d.breakpoints.size(),
                                        d.densities.data(), &dist));
  }
  env.dist.reset(dist);
  actlab_params* params = nullptr;
  Check(actlab_params_create(c.y, c.q, env.dist.get(), c.bias.has_value(),
                             c.bias.value_or(0.0), &params));
  env.params.reset(params);
  env.voter = c.voter == "forward" ? ACTLAB_VOTER_FORWARD
                                   : ACTLAB_VOTER_BACKWARD;
  env.pooling = c.forward_regime == "pool_not_act" ? ACTLAB_POOL_NOT_ACT
                                                   : ACTLAB_POOL_ACT;
  return env;
}

ProfilePtr MakeProfile(const ProfileConfig& p) {
  actlab_profile* out = nullptr;
  if (p.is_threshold) {
    Check(actlab_profile_threshold(p.threshold, p.mix, p.incompetent, &out));
  } else {
    Check(actlab_profile_tabulated(
        p.points.data(), p.values.data(), p.points.size(),
        p.interpolation == "step" ? ACTLAB_INTERP_STEP : ACTLAB_INTERP_LINEAR,
        p.incompetent, &out));
  }
  return ProfilePtr(out);
}

actlab_off_path MakeOffPath(const std::optional<OffPathConfig>& o) {
  actlab_off_path out{};
  if (o) {
    out.present = 1;
    out.for_choice = o->choice == "act" ? ACTLAB_ACT : ACTLAB_NOT_ACT;
    out.q_c = o->q_c;
    out.p_el = o->p_el;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Column layouts.

const std::vector<std::string> kInputColumns = {
    "y", "q", "family", "mean", "bias", "bias_kind", "voter"};

std::vector<std::string> TaskColumns(Task task) {
  std::vector<std::string> cols = kInputColumns;
  std::vector<std::string> extra;
  switch (task) {
    case Task::kSolve:
      extra = {"index",           "equilibria",     "regime",
               "threshold",       "mix_at_threshold", "pi_nc",
               "r_a",             "residual",       "p_el",
               "q_a",             "q_na",           "prob_act",
               "off_path_choice", "off_path_q_c",   "off_path_p_el",
               "threshold_margin", "threshold_p_el", "high_margin",
               "high_p_el",       "notes",          "error"};
      break;
    case Task::kVerify:
      extra = {"source",          "regime",        "threshold",
               "mix_at_threshold", "pi_nc",        "residual",
               "competent_gain",  "worst_type",    "incompetent_gain",
               "types_checked",   "indifferent_types", "r_a",
               "p_el",            "q_a",           "q_na",
               "prob_act",        "error"};
      break;
    case Task::kWelfare:
      extra = {"forward_regime", "backward_regime", "threshold", "u_c",
               "u_nc",           "U_b",             "U_f",       "gap",
               "error"};
      break;
    case Task::kSimulate:
      extra = {"source",
               "regime",
               "threshold",
               "mix_at_threshold",
               "pi_nc",
               "n",
               "seed",
               "bins",
               "reelect_freq",
               "se_reelect",
               "expected_reelect",
               "z_reelect",
               "reelect_competent",
               "se_reelect_competent",
               "expected_reelect_competent",
               "z_reelect_competent",
               "reelect_incompetent",
               "se_reelect_incompetent",
               "expected_reelect_incompetent",
               "z_reelect_incompetent",
               "act_freq",
               "se_act",
               "expected_act",
               "z_act",
               "mean_utility",
               "se_utility",
               "expected_utility",
               "z_utility",
               "max_abs_bin_z",
               "max_abs_z",
               "any_flagged",
               "fingerprint",
               "error"};
      break;
    case Task::kSweep:
      break;
  }
  cols.insert(cols.end(), extra.begin(), extra.end());
  return cols;
}

// A row under construction, addressed by column name.
class RowBuilder {
 public:
  explicit RowBuilder(const std::vector<std::string>& columns)
      : columns_(columns), cells_(columns.size()) {}

  void Set(const std::string& column, Cell value) {
    for (size_t i = 0; i < columns_.size(); ++i) {
      if (columns_[i] == column) {
        cells_[i] = std::move(value);
        return;
      }
    }
    throw std::logic_error("unknown report column " + column);
  }

  std::vector<Cell> Take() { return std::move(cells_); }

 private:
  const std::vector<std::string>& columns_;
  std::vector<Cell> cells_;
};

void SetInputs(RowBuilder& row, const ScenarioConfig& c,
               const Environment* env) {
  row.Set("y", c.y);
  row.Set("q", c.q);
  row.Set("family", c.distribution.family);
  row.Set("voter", c.voter);
  if (env && env->params) {
    row.Set("mean", actlab_params_mean(env->params.get()));
    row.Set("bias", actlab_params_bias(env->params.get()));
    row.Set("bias_kind",
            BiasKindName(actlab_params_bias_kind(env->params.get())));
  } else if (c.bias) {
    row.Set("bias", *c.bias);
  }
}

void SetProfile(RowBuilder& row, const actlab_profile_summary& s) {
  if (s.is_threshold) {
    row.Set("threshold", s.threshold);
    row.Set("mix_at_threshold", s.mix_at_threshold);
  }
  row.Set("pi_nc", s.pi_nc);
}

void SetPosteriors(RowBuilder& row, const actlab_posteriors& p) {
  row.Set("p_el", Opt(p.has_p_el, p.p_el));
  row.Set("q_a", Opt(p.has_q_a, p.q_a));
  row.Set("q_na", Opt(p.has_q_na, p.q_na));
  row.Set("prob_act", p.prob_act);
}

// Equilibria for the cell: every characterized one, or only the one a sweep
// row reports (the selected forward pooling regime, or the first backward
// result).
EquilibriaPtr SolveEnvironment(const Environment& env, const ScenarioConfig& c,
                               bool primary_only) {
  actlab_equilibria* set = nullptr;
  if (primary_only && env.voter == ACTLAB_VOTER_FORWARD) {
    Check(actlab_forward_pooling(env.params.get(), env.pooling, c.grid, &set));
  } else {
    Check(actlab_solve(env.params.get(), env.voter, c.grid, &set));
  }
  return EquilibriaPtr(set);
}

std::string JoinNotes(const actlab_equilibria* set, size_t index,
                      size_t count) {
  std::string out;
  for (size_t k = 0; k < count; ++k) {
    if (k) out += "; ";
    out += actlab_equilibria_note(set, index, k);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tasks. Each appends rows for one cell; library failures propagate as
// DomainError.

void SolveRows(const ScenarioConfig& c, const Environment& env,
               bool primary_only, const std::vector<std::string>& cols,
               std::vector<std::vector<Cell>>& rows,
               nlohmann::ordered_json* detail) {
  EquilibriaPtr set = SolveEnvironment(env, c, primary_only);
  const size_t count = actlab_equilibria_count(set.get());
  const size_t emit = primary_only ? std::min<size_t>(count, 1) : count;
  for (size_t i = 0; i < emit; ++i) {
    actlab_equilibrium_info info;
    Check(actlab_equilibria_info(set.get(), i, &info));
    RowBuilder row(cols);
    SetInputs(row, c, &env);
    row.Set("index", static_cast<std::int64_t>(i));
    row.Set("equilibria", static_cast<std::int64_t>(count));
    row.Set("regime", actlab_regime_name(info.regime));
    SetProfile(row, info.profile);
    row.Set("r_a", info.r_a);
    row.Set("residual", info.residual);
    SetPosteriors(row, info.posteriors);
    if (info.off_path.present) {
      row.Set("off_path_choice", ChoiceName(info.off_path.for_choice));
      row.Set("off_path_q_c", info.off_path.q_c);
      row.Set("off_path_p_el", info.off_path.p_el);
    }
    row.Set("threshold_margin",
            Opt(info.has_threshold_margin, info.threshold_margin));
    row.Set("threshold_p_el",
            Opt(info.has_threshold_margin, info.threshold_p_el));
    row.Set("high_margin", Opt(info.has_high_margin, info.high_margin));
    row.Set("high_p_el", Opt(info.has_high_margin, info.high_p_el));
    row.Set("notes", JoinNotes(set.get(), i, info.note_count));
    rows.push_back(row.Take());
    if (detail) {
      nlohmann::ordered_json notes = nlohmann::ordered_json::array();
      for (size_t k = 0; k < info.note_count; ++k) {
        notes.push_back(actlab_equilibria_note(set.get(), i, k));
      }
      detail->push_back({{"index", i}, {"notes", notes}});
    }
  }
}

void VerifyRows(const ScenarioConfig& c, const Environment& env,
                bool primary_only, const std::vector<std::string>& cols,
                std::vector<std::vector<Cell>>& rows) {
  const double* assumed = c.assumed_r_a ? &*c.assumed_r_a : nullptr;
  auto emit = [&](const actlab_profile* profile, const actlab_off_path& off,
                  const char* source, const char* regime) {
    actlab_verification v;
    Check(actlab_verify(profile, env.params.get(), env.voter, &off, c.grid,
                        assumed, &v));
    actlab_profile_summary summary;
    actlab_profile_describe(profile, &summary);
    RowBuilder row(cols);
    SetInputs(row, c, &env);
    row.Set("source", source);
    if (regime) row.Set("regime", regime);
    SetProfile(row, summary);
    row.Set("residual", v.residual);
    row.Set("competent_gain", v.competent_gain);
    row.Set("worst_type", v.worst_type);
    row.Set("incompetent_gain", v.incompetent_gain);
    row.Set("types_checked", static_cast<std::int64_t>(v.types_checked));
    row.Set("indifferent_types",
            static_cast<std::int64_t>(v.indifferent_types));
    row.Set("r_a", v.r_a);
    SetPosteriors(row, v.posteriors);
    rows.push_back(row.Take());
  };
  if (c.profile) {
    ProfilePtr profile = MakeProfile(*c.profile);
    emit(profile.get(), MakeOffPath(c.off_path), "profile", nullptr);
    return;
  }
  EquilibriaPtr set = SolveEnvironment(env, c, primary_only);
  const size_t count = actlab_equilibria_count(set.get());
  for (size_t i = 0; i < (primary_only ? std::min<size_t>(count, 1) : count);
       ++i) {
    actlab_equilibrium_info info;
    Check(actlab_equilibria_info(set.get(), i, &info));
    actlab_profile* raw = nullptr;
    Check(actlab_equilibria_profile(set.get(), i, &raw));
    ProfilePtr profile(raw);
    emit(profile.get(), info.off_path, "equilibrium",
         actlab_regime_name(info.regime));
  }
}

void WelfareRows(const ScenarioConfig& c, const Environment& env,
                 const std::vector<std::string>& cols,
                 std::vector<std::vector<Cell>>& rows) {
  RowBuilder row(cols);
  SetInputs(row, c, &env);
  row.Set("forward_regime", PoolingName(env.pooling));
  actlab_welfare w;
  const actlab_status status =
      actlab_welfare_report(env.params.get(), env.pooling, &w);
  if (status == ACTLAB_ERR_UNRESOLVED) {
    // No characterized backward equilibrium: reported, not fatal.
    row.Set("backward_regime", actlab_regime_name(ACTLAB_REGIME_UNRESOLVED));
    row.Set("error", std::string(actlab_status_name(status)) + ": " +
                         actlab_last_error());
    rows.push_back(row.Take());
    return;
  }
  Check(status);
  row.Set("backward_regime", actlab_regime_name(w.backward_regime));
  row.Set("threshold", w.threshold);
  row.Set("u_c", w.u_c);
  row.Set("u_nc", w.u_nc);
  row.Set("U_b", w.U_b);
  row.Set("U_f", w.U_f);
  row.Set("gap", w.gap);
  rows.push_back(row.Take());
}

void SetZ(RowBuilder& row, const std::string& stat, const actlab_zscore& z) {
  row.Set("expected_" + stat, z.expected);
  row.Set("z_" + stat, z.z);
}

void SimulateRows(const ScenarioConfig& c, const Environment& env, int jobs,
                  const std::vector<std::string>& cols,
                  std::vector<std::vector<Cell>>& rows,
                  nlohmann::ordered_json* bins) {
  ProfilePtr profile;
  actlab_off_path off{};
  const char* source = "profile";
  const char* regime = nullptr;
  if (c.profile) {
    profile = MakeProfile(*c.profile);
    off = MakeOffPath(c.off_path);
  } else {
    EquilibriaPtr set = SolveEnvironment(env, c, true);
    actlab_equilibrium_info info;
    Check(actlab_equilibria_info(set.get(), 0, &info));
    actlab_profile* raw = nullptr;
    Check(actlab_equilibria_profile(set.get(), 0, &raw));
    profile.reset(raw);
    off = info.off_path;
    source = "equilibrium";
    regime = actlab_regime_name(info.regime);
  }
  actlab_simulation* raw_sim = nullptr;
  Check(actlab_simulate(profile.get(), env.params.get(), env.voter, &off,
                        c.simulation.n, c.simulation.seed, c.simulation.bins,
                        jobs, &raw_sim));
  SimulationPtr sim(raw_sim);
  actlab_simulation_summary s;
  actlab_simulation_describe(sim.get(), &s);
  actlab_crosscheck x;
  Check(actlab_crosscheck_analytic(sim.get(), profile.get(), env.params.get(),
                                   env.voter, &off, &x));
  actlab_profile_summary summary;
  actlab_profile_describe(profile.get(), &summary);

  RowBuilder row(cols);
  SetInputs(row, c, &env);
  row.Set("source", source);
  if (regime) row.Set("regime", regime);
  SetProfile(row, summary);
  row.Set("n", s.n);
  row.Set("seed", s.seed);
  row.Set("bins", static_cast<std::int64_t>(s.bin_count));
  row.Set("reelect_freq", s.reelect_freq);
  row.Set("se_reelect", s.se_reelect);
  SetZ(row, "reelect", x.reelect);
  row.Set("reelect_competent", s.reelect_competent);
  row.Set("se_reelect_competent", s.se_reelect_competent);
  SetZ(row, "reelect_competent", x.reelect_competent);
  row.Set("reelect_incompetent", s.reelect_incompetent);
  row.Set("se_reelect_incompetent", s.se_reelect_incompetent);
  SetZ(row, "reelect_incompetent", x.reelect_incompetent);
  row.Set("act_freq", s.act_freq);
  row.Set("se_act", s.se_act);
  SetZ(row, "act", x.act);
  row.Set("mean_utility", s.mean_utility);
  row.Set("se_utility", s.se_utility);
  SetZ(row, "utility", x.utility);
  row.Set("max_abs_bin_z", x.max_abs_bin_z);
  row.Set("max_abs_z", x.max_abs_z);
  row.Set("any_flagged", x.any_flagged != 0);
  row.Set("fingerprint", s.fingerprint);
  rows.push_back(row.Take());

  if (bins) {
    for (size_t i = 0; i < s.bin_count; ++i) {
      actlab_bin b;
      Check(actlab_simulation_bin(sim.get(), i, &b));
      bins->push_back({{"lo", b.lo},
                       {"hi", b.hi},
                       {"count", b.count},
                       {"reelected", b.reelected}});
    }
  }
}

void RunCell(Task task, const ScenarioConfig& c, const Environment& env,
             bool primary_only, int jobs, const std::vector<std::string>& cols,
             std::vector<std::vector<Cell>>& rows,
             nlohmann::ordered_json& extra) {
  switch (task) {
    case Task::kSolve: {
      nlohmann::ordered_json notes = nlohmann::ordered_json::array();
      SolveRows(c, env, primary_only, cols, rows,
                primary_only ? nullptr : &notes);
      if (!primary_only) extra["equilibrium_notes"] = notes;
      break;
    }
    case Task::kVerify:
      VerifyRows(c, env, primary_only, cols, rows);
      break;
    case Task::kWelfare:
      WelfareRows(c, env, cols, rows);
      break;
    case Task::kSimulate: {
      nlohmann::ordered_json bins = nlohmann::ordered_json::array();
      SimulateRows(c, env, jobs, cols, rows, primary_only ? nullptr : &bins);
      if (!primary_only) extra["competent_bins"] = bins;
      break;
    }
    case Task::kSweep:
      throw std::logic_error("nested sweep");
  }
}

// ---------------------------------------------------------------------------
// Sweeps.

std::vector<std::vector<Cell>> SweepCells(
    const ScenarioConfig& base, const std::vector<std::vector<double>>& points,
    Task task, const std::vector<std::string>& cols, int jobs) {
  const auto& axes = base.sweep->axes;
  size_t total = 1;
  for (const auto& p : points) total *= p.size();
  std::vector<std::vector<Cell>> rows(total);
  std::atomic<size_t> next{0};

  auto worker = [&] {
    for (size_t cell = next++; cell < total; cell = next++) {
      // Decode the cell index with the last axis varying fastest, which
      // makes the row order lexicographic in axis order.
      std::vector<size_t> idx(axes.size());
      size_t rest = cell;
      for (size_t a = axes.size(); a-- > 0;) {
        idx[a] = rest % points[a].size();
        rest /= points[a].size();
      }
      ScenarioConfig c = base;
      std::vector<Cell> axis_cells;
      for (size_t a = 0; a < axes.size(); ++a) {
        const double v = points[a][idx[a]];
        ApplyAxis(c, axes[a].name, v);
        axis_cells.emplace_back(v);
      }
      std::vector<std::vector<Cell>> produced;
      const std::vector<std::string> task_cols(cols.begin() + 1 + axes.size(),
                                               cols.end());
      std::unique_ptr<Environment> env;
      try {
        env = std::make_unique<Environment>(MakeEnvironment(c));
        nlohmann::ordered_json unused;
        RunCell(task, c, *env, true, 1, task_cols, produced, unused);
      } catch (const std::exception& e) {
        // Domain errors stay in the row; the rest of the grid still runs.
        produced.clear();
        RowBuilder row(task_cols);
        SetInputs(row, c, env.get());
        row.Set("error", std::string(e.what()));
        produced.push_back(row.Take());
      }
      std::vector<Cell> out;
      out.emplace_back(static_cast<std::uint64_t>(cell));
      out.insert(out.end(), axis_cells.begin(), axis_cells.end());
      if (produced.empty()) {
        // A solve that characterizes nothing still occupies its cell.
        out.resize(cols.size());
      } else {
        out.insert(out.end(), produced.front().begin(), produced.front().end());
      }
      rows[cell] = std::move(out);
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(total)));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rows;
}

}  // namespace

std::uint64_t SweepCapFromEnv() {
  const char* raw = std::getenv(kSweepCapEnv);
  if (raw == nullptr || *raw == '\0') return kDefaultSweepCap;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (errno != 0 || *end != '\0' || v == 0 || raw[0] == '-') {
    throw ConfigError(std::string(kSweepCapEnv) +
                      ": expected a positive integer, got \"" + raw + "\"");
  }
  return v;
}

RunResult RunScenario(const ScenarioConfig& config, Task verb,
                      const RunOptions& options) {
  if (config.task && *config.task != verb) {
    throw ConfigError(std::string("task: config is for \"") +
                      TaskName(*config.task) + "\" but the command is \"" +
                      TaskName(verb) + "\"");
  }
  RunResult result;
  result.task = verb;
  result.effective = config;
  if (options.seed) result.effective.simulation.seed = *options.seed;
  const ScenarioConfig& c = result.effective;
  const int jobs = std::max(1, options.jobs);

  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
  if (verb == Task::kSweep) {
    if (!c.sweep) throw ConfigError("sweep: required for task sweep");
    std::vector<std::vector<double>> points;
    std::uint64_t total = 1;
    for (const SweepAxis& axis : c.sweep->axes) {
      points.push_back(axis.Points());
      if (points.back().empty()) throw ConfigError("sweep axis " + axis.name + " is empty");
      // Saturating product so huge grids are rejected without overflow.
      total = total > options.sweep_cap ? total : total * points.back().size();
    }
    if (total > options.sweep_cap) {
      throw ConfigError("sweep: " + std::to_string(total) +
                        "+ cells exceed the cap of " +
                        std::to_string(options.sweep_cap) + " (set " +
                        kSweepCapEnv + " to raise it)");
    }
    result.table.columns = {"cell"};
    for (const SweepAxis& axis : c.sweep->axes) {
      result.table.columns.push_back("axis." + axis.name);
    }
    const auto task_cols = TaskColumns(c.sweep->task);
    result.table.columns.insert(result.table.columns.end(), task_cols.begin(),
                                task_cols.end());
    result.table.rows =
        SweepCells(c, points, c.sweep->task, result.table.columns, jobs);
    extra["cell_task"] = TaskName(c.sweep->task);
  } else {
    result.table.columns = TaskColumns(verb);
    Environment env = MakeEnvironment(c);
    RunCell(verb, c, env, false, jobs, result.table.columns,
            result.table.rows, extra);
  }

  nlohmann::ordered_json& j = result.json;
  j["task"] = TaskName(verb);
  j["library_version"] = actlab_version();
  j["config"] = nlohmann::ordered_json::parse(EmitScenario(c));
  j["columns"] = result.table.columns;
  j["rows"] = RowsToJson(result.table);
  for (auto& item : extra.items()) j[item.key()] = item.value();
  return result;
}

}  // namespace actlab::tools
