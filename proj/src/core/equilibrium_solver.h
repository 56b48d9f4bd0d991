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

#ifndef ACTLAB_CORE_EQUILIBRIUM_SOLVER_H_
#define ACTLAB_CORE_EQUILIBRIUM_SOLVER_H_

// Closed-form equilibrium candidates for both voter kinds plus a numerical
// best-response check. The voter is not a strategic player here: its behaviour
// is the voting rule itself, so only incumbent deviations are examined.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/belief_engine.h"
#include "core/model_core.h"

namespace actlab {

inline constexpr double kResidualTolerance = 1e-9;
inline constexpr int kDefaultDeviationGrid = 1000;

// Voter belief attached to a choice the profile never makes.
struct OffPathBelief {
  PolicyChoice for_choice = PolicyChoice::kNotAct;
  double q_c = 0.0;   // competence belief
  double p_el = 0.0;  // state belief if that choice is Act and unrevealed
};

// Reelection probability after each observable outcome. The defaults on the
// revealed entries are the backward rule's verdicts: acting is vindicated by a
// revealed B, not acting by a revealed G.
struct ReelectionContext {
  double y = 0.0;
  double r_a = 1.0;  // acted, state not revealed; one of {0, 1/2, 1}
  double act_bad = 1.0;
  double act_good = 0.0;
  double not_act_bad = 0.0;
  double not_act_good = 1.0;

  static ReelectionContext Backward(double y, double r_a);

  double ActPayoff(double p) const;
  double NotActPayoff(double p) const;
};

// pi (p'(1-y) + y r_a) + (1 - pi)(1 - p') under the backward defaults.
double ExpectedReelectionCompetent(double p_prime, double pi,
                                   const ReelectionContext& ctx);
// Same with p' replaced by the prior mean.
double ExpectedReelectionIncompetent(double mean, double pi_nc,
                                     const ReelectionContext& ctx);

// (1-y)/(2-y): indifference point when acting is rewarded unrevealed.
double BackwardThreshold(double y);
// 1/(2-y): indifference point when acting is punished unrevealed.
double HighThreshold(double y);

// Voter responses implied by the profile's posteriors (Bayes where it applies,
// `off_path` elsewhere). Throws kMissingOffPath when a needed belief is absent.
ReelectionContext ImpliedContext(const StrategyProfile& profile,
                                 const ModelParams& params, VoterKind voter,
                                 const std::optional<OffPathBelief>& off_path);

struct VerifyOptions {
  int grid = kDefaultDeviationGrid;
  // When set, the unrevealed reelection probability the caller built the
  // profile around; a mismatch with the implied one raises
  // kBeliefInconsistent.
  std::optional<double> assumed_r_a;
};

struct VerificationReport {
  double residual = 0.0;
  double competent_gain = 0.0;
  double worst_type = 0.0;  // p' attaining competent_gain
  double incompetent_gain = 0.0;
  int types_checked = 0;
  // Types that are exactly indifferent while playing a pure action.
  int indifferent_types = 0;
  ReelectionContext context;
  PosteriorReport posteriors;
};

VerificationReport VerifyEquilibrium(
    const StrategyProfile& profile, const ModelParams& params, VoterKind voter,
    const std::optional<OffPathBelief>& off_path,
    const VerifyOptions& options = {});

enum class Regime {
  kThreshold,      // threshold (1-y)/(2-y), acting rewarded when unrevealed
  kPoolAct,        // both types always act
  kPoolNotAct,     // both types never act
  kHighThreshold,  // threshold 1/(2-y), acting punished when unrevealed
  kUnresolved,
};

const char* ToString(Regime regime);

struct ConsistencyMargin {
  Regime regime = Regime::kUnresolved;
  // Positive iff the regime's assumed unrevealed vote is reproduced by the
  // posterior it induces.
  double margin = 0.0;
  std::optional<double> p_el;
};

struct EquilibriumResult {
  explicit EquilibriumResult(StrategyProfile p) : profile(std::move(p)) {}

  StrategyProfile profile;
  VoterKind voter = VoterKind::kBackwardLooking;
  std::optional<OffPathBelief> off_path;
  double r_a = 0.0;
  Regime regime = Regime::kUnresolved;
  double residual = 0.0;
  PosteriorReport posteriors;
  std::vector<ConsistencyMargin> margins;
  std::vector<std::string> notes;
};

// Threshold equilibrium for a backward-looking voter who is action-neutral or
// pro-action. Throws kBiasRegime for an against-action voter. When the
// closed-form profile fails its own best-response check (for example y = 1
// with an atomless prior, where the unrevealed posterior ties the cutoff) the
// profile is still returned, labelled kUnresolved with the failing residual.
EquilibriumResult BackwardClosedForm(const ModelParams& params,
                                     int grid = kDefaultDeviationGrid);

enum class PoolingChoice { kPoolAct, kPoolNotAct };

// Pooling equilibrium for a forward-looking voter; the unchosen action gets
// the extremal competence belief 0.
EquilibriumResult ForwardPooling(const ModelParams& params, PoolingChoice which,
                                 int grid = kDefaultDeviationGrid);

// Candidate equilibria for a backward-looking, against-action voter. Returns
// every internally consistent candidate, or a single kUnresolved result that
// carries both failed margins. Throws kBiasRegime unless bias > mean.
std::vector<EquilibriumResult> AgainstActionSolve(
    const ModelParams& params, int grid = kDefaultDeviationGrid);

// Dispatches on voter kind and bias: every equilibrium the library can
// characterize for `params`.
std::vector<EquilibriumResult> SolveAll(const ModelParams& params,
                                        VoterKind voter,
                                        int grid = kDefaultDeviationGrid);

}  // namespace actlab

#endif  // ACTLAB_CORE_EQUILIBRIUM_SOLVER_H_
