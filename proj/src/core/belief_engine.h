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

#ifndef ACTLAB_CORE_BELIEF_ENGINE_H_
#define ACTLAB_CORE_BELIEF_ENGINE_H_

// Election-day posteriors of the voter and the two voting rules.
//
// Nothing in here invents beliefs for zero-probability events: conditioning on
// a choice the profile never makes raises kZeroActProbability / kOffPath and the
// caller must supply an explicit off-path belief.

#include <optional>

#include "core/model_core.h"

namespace actlab {

// Probability-of-action threshold below which a choice counts as off-path.
inline constexpr double kOffPathTolerance = 1e-12;

// Integrals of the competent strategy against the prior.
struct StrategyMoments {
  double mean_act = 0.0;       // E[pi_c(p')]
  double mean_p_act = 0.0;     // E[p' pi_c(p')]
};

StrategyMoments ComputeMoments(const CompetentStrategy& strategy,
                               const BeliefDistribution& dist);

struct PosteriorReport {
  // Posterior that S = B given Act and no revelation; unset if Act is
  // off-path.
  std::optional<double> p_el_unrevealed;
  std::optional<double> q_a;
  std::optional<double> q_na;
  double prob_act = 0.0;
};

// Unconditional probability that the incumbent acts.
double ActProbability(const StrategyProfile& profile,
                      const ModelParams& params);

double PosteriorStateUnrevealed(const StrategyProfile& profile,
                                const ModelParams& params);

// E[p' pi_c(p')] - E[p'] E[pi_c(p')].
double StrategyStateCovariance(const CompetentStrategy& strategy,
                               const BeliefDistribution& dist);

double PosteriorCompetence(const StrategyProfile& profile,
                           const ModelParams& params, PolicyChoice choice);

// All posteriors at once; undefined conditionals are left unset instead of
// throwing.
PosteriorReport ComputePosteriors(const StrategyProfile& profile,
                                  const ModelParams& params);

// Backward-looking rule: reelect iff the observed choice was the better one
// given the election-day state belief. Returns 0, 1/2 or 1.
double BackwardVote(double p_el, double bias, PolicyChoice choice);

// Forward-looking screen on top of the backward rule.
double ForwardVote(double q_c, double q, double r_bl);

}  // namespace actlab

#endif  // ACTLAB_CORE_BELIEF_ENGINE_H_
